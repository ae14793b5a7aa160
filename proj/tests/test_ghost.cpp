#include "arcoh/ghost.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace arcoh;

namespace {

std::vector<std::vector<Complex>> values_of(const std::vector<QuasiCharacter>& qs)
{
    std::vector<std::vector<Complex>> out;
    for (const auto& q : qs)
        out.push_back(q.values);
    return out;
}

} // namespace

TEST(Group, IndexingAndArithmetic)
{
    const FiniteAbelianGroup g({2, 3});
    EXPECT_EQ(g.order(), 6u);
    EXPECT_EQ(g.element(5), (std::vector<int>{1, 2}));
    const std::vector<int> x{1, 1};
    EXPECT_EQ(g.index(x), 4u);
    EXPECT_EQ(g.add(4, 5), g.index(std::vector<int>{0, 0}));
    EXPECT_EQ(g.neg(4), g.index(std::vector<int>{1, 2}));
    EXPECT_THROW(FiniteAbelianGroup({1}), InvalidArgument);
    EXPECT_EQ(FiniteAbelianGroup().order(), 1u);
}

TEST(Group, CharactersMatchOracle)
{
    const FiniteAbelianGroup g({4, 6});
    for (std::size_t a = 0; a < g.order(); ++a)
        for (std::size_t x = 0; x < g.order(); ++x)
            EXPECT_LT(std::abs(g.character(a, x) - oracle::character(g, a, x)), 1e-13);
}

TEST(Dft, Examples)
{
    const FiniteAbelianGroup g({5});
    std::vector<double> delta(5, 0.0);
    delta[0] = 1.0;
    for (auto z : dft(g, delta))
        EXPECT_LT(std::abs(z - 1.0), 1e-15);
    const std::vector<double> ones(5, 1.0);
    const auto f = dft(g, ones);
    EXPECT_NEAR(f[0].real(), 5.0, 1e-14);
    for (std::size_t a = 1; a < 5; ++a)
        EXPECT_LT(std::abs(f[a]), 1e-14);

    const double c = 0.3;
    const auto h = dft(FiniteAbelianGroup({3}), std::vector<double>{1, c, c});
    EXPECT_NEAR(h[0].real(), 1 + 2 * c, 1e-15);
    EXPECT_NEAR(h[1].real(), 1 - c, 1e-15);
    EXPECT_NEAR(h[2].real(), 1 - c, 1e-15);
}

TEST(Dft, InverseRoundTrip)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> v(-1, 1);
    for (int k = 0; k < 20; ++k) {
        const auto g = oracle::random_group(rng, 64);
        std::vector<double> f(g.order());
        for (auto& x : f)
            x = v(rng);
        const auto spec = dft(g, f);
        const auto back = inverse_dft(g, spec);
        for (std::size_t i = 0; i < f.size(); ++i)
            EXPECT_LT(std::abs(back[i] - f[i]), 1e-10);
    }
}

TEST(FirstKind, Examples)
{
    const FiniteAbelianGroup z4({4});
    const auto ones = check_first_kind(z4, std::vector<double>(4, 1.0));
    EXPECT_TRUE(ones.passed);
    EXPECT_EQ(ones.stabilizer.size(), 4u);

    const std::vector<double> u{1, 0.5, 1, 0.5};
    const auto r = check_first_kind(z4, u);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.stabilizer, (std::vector<std::size_t>{0, 2}));
    EXPECT_TRUE(r.constant_on_cosets);
    const double expect[] = {3, 0, 1, 0};
    for (std::size_t a = 0; a < 4; ++a)
        EXPECT_NEAR(r.spectrum[a].real(), expect[a], 1e-14);

    const auto bad = check_first_kind(FiniteAbelianGroup({2}), std::vector<double>{1, 1.5});
    EXPECT_FALSE(bad.passed);
    EXPECT_NEAR(bad.spectrum[1].real(), -0.5, 1e-15);
    EXPECT_THROW(GhostSpaceFirstKind(FiniteAbelianGroup({2}), {1, 1.5}), InvalidGhostSpace);
}

TEST(FirstKind, NamesInvariants)
{
    const FiniteAbelianGroup z3({3});
    EXPECT_EQ(check_first_kind(z3, std::vector<double>{0.9, 0.5, 0.5}).failing_invariant, "u(0) = 1");
    EXPECT_EQ(check_first_kind(z3, std::vector<double>{1, 0.5, 0.4}).failing_invariant, "u even");
    EXPECT_EQ(check_first_kind(z3, std::vector<double>{1, -0.1, -0.1}).failing_invariant, "u > 0");
    EXPECT_EQ(check_first_kind(z3, std::vector<double>{1, 0.5}).failing_invariant, "size");
}

TEST(FirstKind, BochnerEquivalence)
{
    // Random even positive u, valid or not, against the matrix criterion.
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> w(0.05, 1.2);
    int agree_pass = 0, agree_fail = 0;
    for (int k = 0; k < 200; ++k) {
        const auto g = oracle::random_group(rng, 8);
        std::vector<double> u(g.order());
        const bool structured = k % 2 == 0;
        if (structured)
            u = oracle::random_first_kind(rng, g);
        else
            for (std::size_t x = 0; x < g.order(); ++x) {
                if (x == 0)
                    u[x] = 1.0;
                else if (g.neg(x) < x)
                    u[x] = u[g.neg(x)];
                else
                    u[x] = w(rng);
            }
        const bool pd = oracle::bochner_min_eigenvalue(g, u) >= -1e-10;
        const auto r = check_first_kind(g, u);
        if (r.passed) {
            EXPECT_TRUE(pd);
            ++agree_pass;
        } else if (r.failing_invariant == "positive-definite" || r.failing_invariant == "u <= 1") {
            EXPECT_FALSE(pd);
            ++agree_fail;
        }
    }
    EXPECT_GT(agree_pass, 50);
    EXPECT_GT(agree_fail, 10);
}

TEST(FirstKind, StabilizerTheorem)
{
    std::mt19937_64 rng(3);
    int nontrivial = 0;
    for (int k = 0; k < 200; ++k) {
        const auto g = oracle::random_group(rng, 16);
        const auto u = oracle::random_first_kind(rng, g);
        const auto r = check_first_kind(g, u);
        ASSERT_TRUE(r.passed) << r.failing_invariant << " " << r.detail;
        EXPECT_LE(r.max_value, 1.0 + 1e-12);
        EXPECT_TRUE(r.stabilizer_is_subgroup);
        EXPECT_TRUE(r.constant_on_cosets);
        if (r.stabilizer.size() > 1)
            ++nontrivial;
    }
    EXPECT_GT(nontrivial, 20);
}

TEST(SecondKind, Checks)
{
    const FiniteAbelianGroup z2({2});
    EXPECT_TRUE(check_second_kind(z2, std::vector<double>{2.0 / 3, 1.0 / 3}).passed);
    EXPECT_EQ(check_second_kind(z2, std::vector<double>{0.5, 0.4}).failing_invariant, "sum mu = 1");
    EXPECT_EQ(check_second_kind(z2, std::vector<double>{0.3, 0.7}).failing_invariant, "positive-definite");
    EXPECT_EQ(check_second_kind(FiniteAbelianGroup({3}), std::vector<double>{0.5, 0.3, 0.2}).failing_invariant,
              "mu even");
}

TEST(Convolution, FirstKindExamples)
{
    const GhostSpaceFirstKind s(FiniteAbelianGroup({2}), {1, 0.5});
    EXPECT_EQ(convolve_first(s, 0, 0).weights, (std::vector<double>{1, 0}));
    EXPECT_EQ(convolve_first(s, 1, 1).weights, (std::vector<double>{0.25, 0}));
    EXPECT_EQ(convolve_first(s, 0, 1).weights, (std::vector<double>{0, 1}));
}

TEST(Convolution, SecondKindExamples)
{
    const FiniteAbelianGroup z2({2});
    const auto point = GhostSpaceSecondKind::point_mass(z2);
    EXPECT_EQ(convolve_second(point, 1, 0).weights, (std::vector<double>{0, 1}));
    const GhostSpaceSecondKind s(z2, {2.0 / 3, 1.0 / 3});
    const auto a = convolve_second(s, 1, 1).weights;
    EXPECT_NEAR(a[0], 2.0 / 3, 1e-15);
    EXPECT_NEAR(a[1], 1.0 / 3, 1e-15);
    const auto b = convolve_second(s, 1, 0).weights;
    EXPECT_NEAR(b[0], 1.0 / 3, 1e-15);
    EXPECT_NEAR(b[1], 2.0 / 3, 1e-15);
}

TEST(Convolution, MixedExamples)
{
    const FiniteAbelianGroup z2({2});
    const std::vector<double> u{1, 0.5}, mu{0.75, 0.25};
    const auto m = mixed_convolve(z2, u, mu, 1, 1).weights;
    EXPECT_NEAR(m[0], 0.25 * 0.75, 1e-15);
    EXPECT_NEAR(m[1], 0.25 * 0.25, 1e-15);
    const std::vector<double> delta{1, 0}, one{1, 1};
    EXPECT_EQ(mixed_convolve(z2, u, delta, 1, 1).weights,
              convolve_first(GhostSpaceFirstKind(z2, u), 1, 1).weights);
    EXPECT_EQ(mixed_convolve(z2, one, mu, 1, 0).weights,
              convolve_second(GhostSpaceSecondKind(z2, mu), 1, 0).weights);
}

TEST(Convolution, MixedNeedsMuOnStabilizer)
{
    // With mu charging points where u < 1 the mixed product is not
    // associative: (d0 * d0) * d1 and d0 * (d0 * d1) differ.
    const FiniteAbelianGroup z2({2});
    const auto bad = check_associativity(ConvolutionStructure::mixed(z2, {1, 0.5}, {0.75, 0.25}));
    EXPECT_FALSE(bad.passed);
    ASSERT_TRUE(bad.counterexample.has_value());
    const FiniteAbelianGroup z4({4});
    // u = 1 on {0, 2}; mu supported there.
    const auto good = check_associativity(ConvolutionStructure::mixed(z4, {1, 0.5, 1, 0.5}, {0.6, 0, 0.4, 0}));
    EXPECT_TRUE(good.passed) << good.max_associativity_error;
}

TEST(Convolution, AssociativityExhaustive)
{
    std::mt19937_64 rng(4);
    for (int k = 0; k < 40; ++k) {
        const auto g = oracle::random_group(rng, 16);
        const GhostSpaceFirstKind first(g, oracle::random_first_kind(rng, g));
        const auto q = quotient_by_ghost(first);
        const auto stab = check_first_kind(g, first.u()).stabilizer;
        const auto mixed =
            ConvolutionStructure::mixed(g, first.u(), oracle::random_measure_on(rng, g, stab));
        for (const auto& s : {ConvolutionStructure(first), ConvolutionStructure(q), mixed}) {
            const auto r = check_associativity(s);
            EXPECT_TRUE(r.passed) << r.max_associativity_error << " " << r.max_commutativity_error;
        }
    }
}

TEST(Dimension, Examples)
{
    for (std::vector<int> orders : {std::vector<int>{5}, std::vector<int>{2, 4}}) {
        const FiniteAbelianGroup g(orders);
        const double logn = std::log(static_cast<double>(g.order()));
        EXPECT_NEAR(dim_first(GhostSpaceFirstKind::trivial(g)), logn, 1e-15);
        EXPECT_NEAR(dim_second(GhostSpaceSecondKind::point_mass(g)), logn, 1e-15);
    }
    EXPECT_NEAR(dim_first(GhostSpaceFirstKind(FiniteAbelianGroup({2}), {1, 0.5})), std::log(1.5), 1e-15);
}

TEST(Quotient, Examples)
{
    const FiniteAbelianGroup z2({2});
    const auto q = quotient_by_ghost(GhostSpaceFirstKind(z2, {1, 0.5}));
    EXPECT_NEAR(q.mu()[0], 2.0 / 3, 1e-15);
    EXPECT_NEAR(q.mu()[1], 1.0 / 3, 1e-15);
    EXPECT_NEAR(dim_second(q), std::log(4.0 / 3), 1e-15);
    EXPECT_NEAR(std::log(2.0), std::log(1.5) + dim_second(q), 1e-15);

    const auto t = quotient_by_ghost(GhostSpaceFirstKind::trivial(FiniteAbelianGroup({3})));
    for (double m : t.mu())
        EXPECT_NEAR(m, 1.0 / 3, 1e-15);
    EXPECT_NEAR(dim_second(t), 0.0, 1e-15);

    const double c = 0.35;
    const GhostSpaceFirstKind s3(FiniteAbelianGroup({3}), {1, c, c});
    EXPECT_NEAR(std::log(3.0) - dim_first(s3) - dim_second(quotient_by_ghost(s3)), 0.0, 1e-14);
}

TEST(SubQuotient, Examples)
{
    const FiniteAbelianGroup z4({4});
    const GhostSpaceFirstKind s(z4, {1, 0.5, 0.5, 0.5});
    const std::size_t gen[] = {2};
    const auto r = sub_quotient_first(s, gen);
    EXPECT_EQ(r.subgroup, (std::vector<std::size_t>{0, 2}));
    ASSERT_EQ(r.v.size(), 2u);
    EXPECT_NEAR(r.v[0], 1.0, 1e-15);
    EXPECT_NEAR(r.v[1], 2.0 / 3, 1e-15);
    EXPECT_TRUE(r.check.passed);
    EXPECT_NEAR(r.check.spectrum[0].real(), 5.0 / 3, 1e-15);
    EXPECT_NEAR(r.check.spectrum[1].real(), 1.0 / 3, 1e-15);
    EXPECT_NEAR(r.dim_total - r.dim_sub - r.dim_quotient, 0.0, 1e-12);

    const auto none = sub_quotient_first(s, std::span<const std::size_t>{});
    EXPECT_EQ(none.v, s.u());
    const std::size_t all[] = {1};
    const auto whole = sub_quotient_first(s, all);
    EXPECT_EQ(whole.v, std::vector<double>{1.0});
    EXPECT_EQ(whole.groups.quotient.order(), 1u);
}

TEST(SubQuotient, QuotientGroupStructure)
{
    // Z/4 x Z/6 modulo <(2, 3)> has order 12; the projection is a
    // homomorphism with kernel the generated subgroup.
    const FiniteAbelianGroup g({4, 6});
    const std::size_t gen[] = {g.index(std::vector<int>{2, 3})};
    const auto q = quotient_group(g, gen);
    EXPECT_EQ(q.quotient.order(), 12u);
    EXPECT_EQ(q.kernel, subgroup_generated(g, gen));
    for (std::size_t x = 0; x < g.order(); ++x)
        for (std::size_t y = 0; y < g.order(); ++y)
            ASSERT_EQ(q.projection[g.add(x, y)], q.quotient.add(q.projection[x], q.projection[y]));
}

TEST(SubQuotient, RandomPositiveDefiniteAndAdditive)
{
    std::mt19937_64 rng(5);
    std::size_t counterexamples = 0;
    for (int k = 0; k < 200; ++k) {
        const auto g = oracle::random_group(rng, 16);
        const GhostSpaceFirstKind s(g, oracle::random_first_kind(rng, g));
        std::uniform_int_distribution<std::size_t> pick(0, g.order() - 1);
        std::vector<std::size_t> gens{pick(rng)};
        if (k % 3 == 0)
            gens.push_back(pick(rng));
        const auto r = sub_quotient_first(s, gens);
        EXPECT_EQ(r.groups.quotient.order() * r.subgroup.size(), g.order());
        EXPECT_NEAR(r.v[0], 1.0, 1e-14);
        if (!r.check.passed)
            ++counterexamples;
        EXPECT_NEAR(r.dim_total - r.dim_sub - r.dim_quotient, 0.0, 1e-12);
    }
    EXPECT_EQ(counterexamples, 0u);
}

TEST(Dual, Examples)
{
    const auto n = FiniteAbelianGroup({5});
    const auto d1 = dual_ghost(GhostSpaceFirstKind::trivial(n));
    EXPECT_NEAR(d1.mu()[0], 1.0, 1e-15);
    EXPECT_NEAR(dim_second(d1), std::log(5.0), 1e-14);

    const GhostSpaceFirstKind s(FiniteAbelianGroup({2}), {1, 0.5});
    const auto d = dual_ghost(s);
    EXPECT_NEAR(d.mu()[0], 0.75, 1e-15);
    EXPECT_NEAR(d.mu()[1], 0.25, 1e-15);
    EXPECT_NEAR(dim_second(d), std::log(1.5), 1e-15);
    EXPECT_NEAR(dim_second(d), dim_first(s), 1e-15);
}

TEST(Dual, DimensionsAgreeOnRandomSuite)
{
    std::mt19937_64 rng(6);
    for (int k = 0; k < 200; ++k) {
        const auto g = oracle::random_group(rng, 16);
        const GhostSpaceFirstKind s(g, oracle::random_first_kind(rng, g));
        EXPECT_NEAR(dim_first(s) - dim_second(dual_ghost(s)), 0.0, 1e-12);
        EXPECT_NEAR(std::log(static_cast<double>(g.order())) - dim_first(s) - dim_second(quotient_by_ghost(s)), 0.0,
                    1e-12);
    }
}

TEST(Dual, FourierIdentityForQuasiCharacters)
{
    // (chi1 u)(x) (chi2 u)(x) = sum_chi chi(x) u(x) (T_{chi1 + chi2} u^)(chi).
    std::mt19937_64 rng(7);
    for (int k = 0; k < 30; ++k) {
        const auto g = oracle::random_group(rng, 8);
        const GhostSpaceFirstKind s(g, oracle::random_first_kind(rng, g));
        const auto uhat = dual_ghost(s).mu();
        const auto& u = s.u();
        for (std::size_t c1 = 0; c1 < g.order(); ++c1)
            for (std::size_t c2 = 0; c2 < g.order(); ++c2)
                for (std::size_t x = 0; x < g.order(); ++x) {
                    const Complex lhs = oracle::character(g, x, c1) * u[x] * oracle::character(g, x, c2) * u[x];
                    Complex rhs = 0.0;
                    for (std::size_t chi = 0; chi < g.order(); ++chi)
                        rhs += oracle::character(g, x, chi) * u[x] * uhat[g.sub(chi, g.add(c1, c2))];
                    EXPECT_LT(std::abs(lhs - rhs), 1e-10);
                }
    }
}

TEST(QuasiCharacters, Examples)
{
    const FiniteAbelianGroup z3({3});
    const auto plain = quasi_characters(ConvolutionStructure(GhostSpaceFirstKind::trivial(z3)));
    ASSERT_EQ(plain.size(), 3u);
    for (const auto& q : plain)
        for (std::size_t x = 0; x < 3; ++x)
            EXPECT_LT(std::abs(q.values[x] - oracle::character(z3, q.index, x)), 1e-14);

    const GhostSpaceFirstKind s(FiniteAbelianGroup({2}), {1, 0.5});
    const auto qs = quasi_characters(ConvolutionStructure(s));
    const std::vector<std::vector<Complex>> expect{{1.0, 0.5}, {1.0, -0.5}};
    EXPECT_TRUE(oracle::same_function_sets(values_of(qs), expect, 1e-15));
    for (const auto& q : qs)
        EXPECT_TRUE(q.symmetric);
}

TEST(QuasiCharacters, MatchBruteForceSolutions)
{
    std::mt19937_64 rng(8);
    for (int k = 0; k < 60; ++k) {
        const auto g = oracle::random_group(rng, 8);
        const GhostSpaceFirstKind s(g, oracle::random_first_kind(rng, g));
        const ConvolutionStructure c(s);
        const auto qs = quasi_characters(c);
        EXPECT_EQ(qs.size(), g.order());
        for (const auto& q : qs)
            EXPECT_LT(quasi_character_residual(c, q.values), 1e-10);
        EXPECT_TRUE(oracle::same_function_sets(values_of(qs), oracle::solve_first_kind_quasi_characters(g, s.u()),
                                               1e-9));
    }
}

TEST(QuasiCharacters, DoubleDualRecoversFirstKind)
{
    std::mt19937_64 rng(9);
    for (int k = 0; k < 60; ++k) {
        const auto g = oracle::random_group(rng, 8);
        const GhostSpaceFirstKind s(g, oracle::random_first_kind(rng, g));
        const ConvolutionStructure dual(dual_ghost(s));
        std::vector<std::vector<Complex>> symmetric;
        for (const auto& q : quasi_characters(dual)) {
            EXPECT_LT(quasi_character_residual(dual, q.values), 1e-10);
            if (q.symmetric)
                symmetric.push_back(q.values);
        }
        // {chi -> chi(x) u(x) : x in G}.
        std::vector<std::vector<Complex>> expect;
        for (std::size_t x = 0; x < g.order(); ++x) {
            std::vector<Complex> f(g.order());
            for (std::size_t chi = 0; chi < g.order(); ++chi)
                f[chi] = oracle::character(g, chi, x) * s.u()[x];
            expect.push_back(std::move(f));
        }
        EXPECT_TRUE(oracle::same_function_sets(symmetric, expect, 1e-10));
    }
}

TEST(DualSequence, ZFourExample)
{
    const FiniteAbelianGroup z4({4});
    const GhostSpaceFirstKind s(z4, {1, 0.5, 0.5, 0.5});
    const std::size_t gen[] = {2};
    const auto ds = dual_short_exact_sequence(s, gen);
    // H^perp = {0, 2} in the character group.
    std::vector<std::size_t> ann = ds.annihilator;
    std::sort(ann.begin(), ann.end());
    EXPECT_EQ(ann, (std::vector<std::size_t>{0, 2}));
    for (std::size_t b = 0; b < ds.annihilator.size(); ++b)
        for (auto h : ds.primal.subgroup)
            EXPECT_LT(std::abs(z4.character(ds.annihilator[b], h) - 1.0), 1e-15);
    // Dimensions: dual of the quotient, the whole, and the sub.
    EXPECT_NEAR(dim_second(ds.dual_quotient), ds.primal.dim_quotient, 1e-12);
    EXPECT_NEAR(dim_second(ds.dual_total), ds.primal.dim_total, 1e-12);
    EXPECT_NEAR(dim_second(ds.dual_sub), ds.primal.dim_sub, 1e-12);
    EXPECT_NEAR(dim_second(ds.dual_total), dim_second(ds.dual_quotient) + dim_second(ds.dual_sub), 1e-12);
    // The measure on (G/H)^ is u^ restricted to H^perp and renormalized.
    const auto uhat = ds.dual_total.mu();
    double mass = 0.0;
    for (auto a : ds.annihilator)
        mass += uhat[a];
    for (std::size_t b = 0; b < ds.annihilator.size(); ++b)
        EXPECT_NEAR(ds.dual_quotient.mu()[b], uhat[ds.annihilator[b]] / mass, 1e-12);
}

TEST(DualSequence, RandomSuite)
{
    std::mt19937_64 rng(10);
    for (int k = 0; k < 60; ++k) {
        const auto g = oracle::random_group(rng, 16);
        const GhostSpaceFirstKind s(g, oracle::random_first_kind(rng, g));
        std::uniform_int_distribution<std::size_t> pick(0, g.order() - 1);
        const std::vector<std::size_t> gens{pick(rng)};
        const auto ds = dual_short_exact_sequence(s, gens);
        EXPECT_NEAR(dim_second(ds.dual_quotient), ds.primal.dim_quotient, 1e-12);
        EXPECT_NEAR(dim_second(ds.dual_sub), ds.primal.dim_sub, 1e-12);
        EXPECT_NEAR(dim_second(ds.dual_total), ds.primal.dim_total, 1e-12);
    }
}
