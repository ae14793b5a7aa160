#include "arcoh/lattice.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace arcoh;

namespace {

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows)
{
    Eigen::MatrixXd m(rows.size(), rows.begin()->size());
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index j = 0;
        for (double v : r)
            m(i, j++) = v;
        ++i;
    }
    return m;
}

} // namespace

TEST(Cholesky, IdentityAndDiagonal)
{
    EXPECT_TRUE(cholesky(GramMatrix(Eigen::MatrixXd::Identity(2, 2))).isApprox(Eigen::MatrixXd::Identity(2, 2)));
    Eigen::MatrixXd expect(2, 2);
    expect << 2, 0, 0, 3;
    EXPECT_TRUE(cholesky(GramMatrix(mat({{4, 0}, {0, 9}}))).isApprox(expect, 1e-15));
}

TEST(Cholesky, Recomposes)
{
    const Eigen::MatrixXd g = mat({{2, 1}, {1, 2}});
    const Eigen::MatrixXd l = cholesky(GramMatrix(g));
    EXPECT_LE((l * l.transpose() - g).norm() / g.norm(), 1e-12);
    EXPECT_EQ(l(0, 1), 0.0);
}

TEST(Cholesky, RejectsIndefiniteAndAsymmetric)
{
    EXPECT_THROW(GramMatrix(mat({{1, 2}, {2, 1}})), NotPositiveDefinite);
    EXPECT_THROW(GramMatrix(mat({{1, 0.5}, {0.4, 1}})), InvalidArgument);
    EXPECT_THROW(GramMatrix(Eigen::MatrixXd(0, 0)), InvalidArgument);
}

TEST(Enumerate, OneDimensionalSquares)
{
    const auto pts = enumerate_below(GramMatrix(mat({{1}})), 4.0);
    const std::vector<IntVector> expect{{-2}, {-1}, {0}, {1}, {2}};
    EXPECT_EQ(pts, expect);
}

TEST(Enumerate, HexagonalSevenPoints)
{
    const GramMatrix g(mat({{2, 1}, {1, 2}}));
    const auto pts = enumerate_below(g, 2.0);
    const auto brute = oracle::brute_below(g.matrix(), {}, 2.0, 3);
    EXPECT_EQ(pts.size(), 7u);
    EXPECT_EQ(pts, brute);
}

TEST(Enumerate, ShiftedCenter)
{
    const std::vector<double> c{0.5};
    const auto pts = enumerate_below(GramMatrix(mat({{1}})), c, 0.3);
    const std::vector<IntVector> expect{{-1}, {0}};
    EXPECT_EQ(pts, expect);
}

TEST(Enumerate, MatchesBruteForceOnRandomForms)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> shift(-1.5, 1.5), rad(0.0, 6.0);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + trial % 3;
        const Eigen::MatrixXd g = oracle::random_gram(rng, n, 0.3, 4.0);
        std::vector<double> c(n);
        for (auto& x : c)
            x = shift(rng);
        const double r = rad(rng);
        const auto pts = enumerate_below(GramMatrix(g), c, r);
        EXPECT_EQ(pts, oracle::brute_below(g, c, r, 9)) << "trial " << trial;
    }
}

TEST(Enumerate, BudgetExceeded)
{
    EXPECT_THROW(enumerate_below(GramMatrix(mat({{1e-4, 0}, {0, 1e-4}})), 100.0, 1000), EnumerationBudgetExceeded);
}

TEST(Theta, UnitFormValue)
{
    const auto r = theta_sum(GramMatrix(mat({{1}})), 1e-12);
    EXPECT_NEAR(r.value, oracle::theta_1d(1.0), 1e-12);
    EXPECT_NEAR(r.value, 1.0864348, 1e-7);
    EXPECT_LE(r.tail_bound, 1e-12);
    EXPECT_GE(r.value, 1.0);
}

TEST(Theta, HalfShift)
{
    const std::vector<double> c{0.5};
    const auto r = theta_sum(GramMatrix(mat({{1}})), c, 1e-12);
    EXPECT_NEAR(r.value, oracle::theta_1d(1.0, 0.5), 1e-12);
    EXPECT_NEAR(r.value, 0.9136, 1e-4);
}

TEST(Theta, IntegerCenterIsPeriodic)
{
    const GramMatrix g(mat({{1.3, 0.4}, {0.4, 0.8}}));
    const std::vector<double> c{3.0, -2.0};
    EXPECT_NEAR(theta_sum(g, c, 1e-12).value, theta_sum(g, 1e-12).value, 2e-12);
}

TEST(Theta, MonotoneUnderScaling)
{
    const Eigen::MatrixXd g = mat({{1.0, 0.3}, {0.3, 0.7}});
    double prev = theta_sum(GramMatrix(g), 1e-12).value;
    for (double s : {1.1, 1.5, 2.0, 4.0}) {
        const double v = theta_sum(GramMatrix(s * g), 1e-12).value;
        EXPECT_LE(v, prev + 1e-12);
        prev = v;
    }
}

TEST(Theta, AgreesWithBoxSum)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> entry(0.2, 5.0);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + trial % 2;
        Eigen::MatrixXd g(n, n);
        do {
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    g(i, j) = g(j, i) = entry(rng);
        } while (Eigen::LLT<Eigen::MatrixXd>(g).info() != Eigen::Success ||
                 Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().minCoeff() < 1e-2);
        EXPECT_NEAR(theta_sum(GramMatrix(g), 1e-10).value, oracle::theta_box(g, {}, 60), 1e-9);
    }
}

TEST(Theta, TailBoundIsSound)
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::MatrixXd g = oracle::random_gram(rng, 2, 0.2, 3.0);
        const GramMatrix gram(g);
        const auto r = theta_sum(gram, 1e-6);
        double extra = 0.0;
        for (const auto& v : enumerate_below(gram, r.radius + 4.0)) {
            Eigen::Vector2d x(static_cast<double>(v[0]), static_cast<double>(v[1]));
            const double q = x.dot(g * x);
            if (q > r.radius * (1 + 1e-12))
                extra += std::exp(-oracle::pi * q);
        }
        EXPECT_LT(extra, r.tail_bound) << "trial " << trial;
    }
}

TEST(Theta, Deterministic)
{
    const GramMatrix g(mat({{0.31, 0.12, 0.0}, {0.12, 0.44, -0.05}, {0.0, -0.05, 0.29}}));
    const double a = theta_sum(g, 1e-12).value;
    for (int i = 0; i < 3; ++i)
        EXPECT_EQ(theta_sum(g, 1e-12).value, a);
}

TEST(Theta, InvalidTolerance)
{
    EXPECT_THROW(theta_sum(GramMatrix(mat({{1}})), 0.0), InvalidArgument);
}

TEST(Theta, FlatMetricHitsBudget)
{
    const GramMatrix g(mat({{1e-6, 0}, {0, 1e-6}}));
    EXPECT_THROW(theta_sum(g, 1e-9, {10000}), EnumerationBudgetExceeded);
}

TEST(Eigenvalue, LowerBoundIsCertified)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::MatrixXd g = oracle::random_gram(rng, 3, 0.01, 10.0);
        const double lo = certified_min_eigenvalue(GramMatrix(g));
        const double truth = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().minCoeff();
        EXPECT_GT(lo, 0.0);
        EXPECT_LE(lo, truth);
    }
}

TEST(Dual, SelfDualAndScaling)
{
    Eigen::MatrixXd one(1, 1), two(1, 1);
    one << 1.0;
    two << 2.0;
    EXPECT_NEAR(dual_lattice(EmbeddedLattice(one)).gram().matrix()(0, 0), 1.0, 1e-15);
    EXPECT_NEAR(dual_lattice(EmbeddedLattice(two)).gram().matrix()(0, 0), 0.25, 1e-15);
}

TEST(Dual, GramIsInverse)
{
    const GramMatrix g(mat({{2, 1}, {1, 2}}));
    const Eigen::MatrixXd d = dual_gram(g).matrix();
    EXPECT_TRUE((d * g.matrix()).isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-14));
    EXPECT_NEAR(d(0, 0), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(d(0, 1), -1.0 / 3.0, 1e-15);
}

TEST(Dual, PairingCovolumeAndInvolution)
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> e(-2.0, 2.0);
    for (int trial = 0; trial < 30; ++trial) {
        Eigen::MatrixXd b(3, 3);
        for (int i = 0; i < 9; ++i)
            b(i / 3, i % 3) = e(rng);
        if (std::abs(b.determinant()) < 0.1)
            continue;
        const EmbeddedLattice l(b);
        const EmbeddedLattice d = dual_lattice(l);
        EXPECT_TRUE((l.basis() * d.basis().transpose()).isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-10));
        EXPECT_NEAR(l.covolume() * d.covolume(), 1.0, 1e-9);
        const Eigen::MatrixXd back = dual_lattice(d).gram().matrix();
        EXPECT_LE((back - l.gram().matrix()).norm() / l.gram().matrix().norm(), 1e-9);
    }
}

TEST(EmbeddedLatticeTest, GramAndCovolume)
{
    Eigen::MatrixXd b(2, 2);
    b << 1, 0, 0.5, 2;
    const EmbeddedLattice l(b);
    EXPECT_NEAR(l.gram().matrix()(0, 1), 0.5, 1e-15);
    EXPECT_NEAR(l.covolume(), std::sqrt(l.gram().matrix().determinant()), 1e-12);
}

TEST(Lll, UnimodularAndReduces)
{
    Eigen::MatrixXd b(2, 2);
    b << 1, 0, 1000, 1;
    const Eigen::MatrixXd orig = b;
    const UnimodularMatrix u = lll_reduce(b);
    EXPECT_EQ(std::llabs(static_cast<long long>(std::llround(u.cast<double>().determinant()))), 1);
    EXPECT_TRUE((u.cast<double>() * orig).isApprox(b, 1e-12));
    EXPECT_LE(b.row(1).norm(), 1.5);
}
