#ifndef ARCOH_LATTICE_HPP
#define ARCOH_LATTICE_HPP

// Positive-definite quadratic forms on Z^n: Cholesky, Fincke-Pohst
// enumeration, Gaussian theta sums with a rigorous tail bound, LLL
// reduction and dual lattices.

#include "arcoh/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace arcoh {

using IntVector = std::vector<long long>;

/// Symmetric positive-definite n x n matrix, validated on construction.
class GramMatrix {
public:
    explicit GramMatrix(Eigen::MatrixXd entries) : m_(std::move(entries))
    {
        if (m_.rows() == 0)
            throw InvalidArgument("gram matrix: dimension 0 is not a lattice");
        if (m_.rows() != m_.cols())
            throw InvalidArgument("gram matrix: not square");
        const double scale = std::max(m_.cwiseAbs().maxCoeff(), 1e-300);
        for (Eigen::Index i = 0; i < m_.rows(); ++i)
            for (Eigen::Index j = i + 1; j < m_.cols(); ++j)
                if (std::abs(m_(i, j) - m_(j, i)) > 1e-12 * scale)
                    throw InvalidArgument("gram matrix: not symmetric");
        // Symmetrize exactly so later arithmetic sees one value per pair.
        m_ = 0.5 * (m_ + m_.transpose()).eval();
        Eigen::LLT<Eigen::MatrixXd> llt(m_);
        if (llt.info() != Eigen::Success || !pivots_positive(llt.matrixL()))
            throw NotPositiveDefinite("gram matrix is not positive definite");
        chol_ = llt.matrixL();
    }

    GramMatrix(std::initializer_list<std::initializer_list<double>> rows)
        : GramMatrix(from_rows(rows)) {}

    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    const Eigen::MatrixXd& matrix() const noexcept { return m_; }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    /// Lower-triangular L with L * L^T == matrix().
    const Eigen::MatrixXd& cholesky_factor() const noexcept { return chol_; }

    /// Q(y) = y^T G y.
    double quadratic_form(std::span<const double> y) const
    {
        double q = 0.0;
        const auto n = dim();
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                row += m_(i, j) * y[j];
            q += y[i] * row;
        }
        return q;
    }

    static bool pivots_positive(const Eigen::MatrixXd& lower)
    {
        for (Eigen::Index i = 0; i < lower.rows(); ++i)
            if (!(lower(i, i) > 0.0) || !std::isfinite(lower(i, i)))
                return false;
        return true;
    }

private:
    static Eigen::MatrixXd from_rows(std::initializer_list<std::initializer_list<double>> rows)
    {
        const auto n = static_cast<Eigen::Index>(rows.size());
        Eigen::MatrixXd m(n, n);
        Eigen::Index i = 0;
        for (const auto& r : rows) {
            if (static_cast<Eigen::Index>(r.size()) != n)
                throw InvalidArgument("gram matrix: ragged rows");
            Eigen::Index j = 0;
            for (double v : r)
                m(i, j++) = v;
            ++i;
        }
        return m;
    }

    Eigen::MatrixXd m_;
    Eigen::MatrixXd chol_;
};

/// Lower-triangular Cholesky factor; throws NotPositiveDefinite when a pivot
/// is not strictly positive.
inline Eigen::MatrixXd cholesky(const Eigen::MatrixXd& symmetric)
{
    return GramMatrix(symmetric).cholesky_factor();
}

inline Eigen::MatrixXd cholesky(const GramMatrix& gram) { return gram.cholesky_factor(); }

inline constexpr std::uint64_t default_enumeration_budget = 100'000'000;

namespace detail {

// Fincke-Pohst branch and bound over v in Z^n with Q(v + center) <= radius.
// Calls visit(v, q) for each accepted vector, where q is the directly
// evaluated quadratic form. Visiting order is the natural tree order.
template <class Visitor>
void fincke_pohst(const GramMatrix& gram, std::span<const double> center, double radius,
                  std::uint64_t budget, Visitor&& visit)
{
    const int n = static_cast<int>(gram.dim());
    if (static_cast<int>(center.size()) != n)
        throw InvalidArgument("center has wrong dimension");
    if (!(radius >= 0.0) || !std::isfinite(radius))
        throw InvalidArgument("radius must be finite and nonnegative");

    const Eigen::MatrixXd& L = gram.cholesky_factor();
    std::vector<double> q(n);
    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        q[i] = L(i, i) * L(i, i);
        for (int j = i + 1; j < n; ++j)
            mu(i, j) = L(j, i) / L(i, i);
    }

    const double slack = 1e-9 * std::max(1.0, radius);
    const double accept = radius + 1e-12 * std::max(1.0, radius);
    const std::uint64_t node_budget = budget > UINT64_MAX / 64 ? UINT64_MAX : budget * 64;

    IntVector v(n, 0);
    std::vector<long long> upper(n, 0);
    std::vector<double> partial(n + 1, 0.0);
    std::vector<double> shift(n, 0.0);
    std::vector<double> y(n, 0.0);
    std::uint64_t points = 0;
    std::uint64_t nodes = 0;

    // Sets v[i] to the first candidate at level i; false if the slab is empty.
    auto open_level = [&](int i) {
        double s = 0.0;
        for (int j = i + 1; j < n; ++j)
            s += mu(i, j) * (static_cast<double>(v[j]) + center[j]);
        shift[i] = s;
        const double rem = radius + slack - partial[i + 1];
        if (rem < 0.0)
            return false;
        const double w = std::sqrt(rem / q[i]);
        const double mid = -s - center[i];
        const double lo = std::ceil(mid - w);
        const double hi = std::floor(mid + w);
        if (lo > hi)
            return false;
        if (std::abs(lo) > 9e15 || std::abs(hi) > 9e15)
            throw EnumerationBudgetExceeded("enumeration range exceeds integer limits");
        v[i] = static_cast<long long>(lo);
        upper[i] = static_cast<long long>(hi);
        return true;
    };

    int level = n - 1;
    if (!open_level(level))
        return;
    for (;;) {
        if (++nodes > node_budget)
            throw EnumerationBudgetExceeded("enumeration search tree exceeded budget of " +
                                            std::to_string(node_budget) + " nodes");
        if (v[level] > upper[level]) {
            if (++level == n)
                return;
            ++v[level];
            continue;
        }
        const double t = static_cast<double>(v[level]) + center[level] + shift[level];
        partial[level] = partial[level + 1] + q[level] * t * t;
        if (level == 0) {
            for (int k = 0; k < n; ++k)
                y[k] = static_cast<double>(v[k]) + center[k];
            const double qv = gram.quadratic_form(y);
            if (qv <= accept) {
                if (++points > budget)
                    throw EnumerationBudgetExceeded("lattice point count exceeded budget of " +
                                                    std::to_string(budget));
                visit(std::span<const long long>(v), qv);
            }
            ++v[0];
            continue;
        }
        --level;
        if (!open_level(level)) {
            ++level;
            ++v[level];
        }
    }
}

inline double neumaier_sum(std::span<const double> terms)
{
    double sum = 0.0;
    double comp = 0.0;
    for (double t : terms) {
        const double s = sum + t;
        if (std::abs(sum) >= std::abs(t))
            comp += (sum - s) + t;
        else
            comp += (t - s) + sum;
        sum = s;
    }
    return sum + comp;
}

// sum_{k in Z} exp(-a k^2)
inline double gaussian_integer_sum(double a)
{
    if (!(a > 0.0))
        return std::numeric_limits<double>::infinity();
    if (a < 1e-12)
        return 1.0 + std::sqrt(std::numbers::pi / a);
    double total = 1.0;
    for (long long k = 1;; ++k) {
        const double term = std::exp(-a * static_cast<double>(k) * static_cast<double>(k));
        total += 2.0 * term;
        if (term < 1e-18 * total)
            break;
    }
    return total;
}

} // namespace detail

/// All v in Z^n with (v + center)^T G (v + center) <= radius, sorted
/// lexicographically.
inline std::vector<IntVector> enumerate_below(const GramMatrix& gram, std::span<const double> center,
                                              double radius,
                                              std::uint64_t budget = default_enumeration_budget)
{
    std::vector<IntVector> out;
    detail::fincke_pohst(gram, center, radius, budget,
                         [&](std::span<const long long> v, double) { out.emplace_back(v.begin(), v.end()); });
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<IntVector> enumerate_below(const GramMatrix& gram, double radius,
                                              std::uint64_t budget = default_enumeration_budget)
{
    const std::vector<double> zero(gram.dim(), 0.0);
    return enumerate_below(gram, zero, radius, budget);
}

/// Certified lower bound on the smallest eigenvalue of the gram matrix.
///
/// Fifty power iterations on G^{-1} estimate its spectral norm; 0.99 over
/// that estimate is then certified by a successful Cholesky factorization
/// of G - lambda I, halving lambda until it succeeds.
inline double certified_min_eigenvalue(const GramMatrix& gram)
{
    const auto n = static_cast<Eigen::Index>(gram.dim());
    Eigen::LLT<Eigen::MatrixXd> llt(gram.matrix());
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i)
        x(i) = 1.0 + 0.1234567 * static_cast<double>(i + 1);
    x.normalize();
    double rayleigh = 0.0;
    for (int it = 0; it < 50; ++it) {
        Eigen::VectorXd next = llt.solve(x);
        rayleigh = x.dot(next);
        const double norm = next.norm();
        if (!(norm > 0.0) || !std::isfinite(norm))
            break;
        x = next / norm;
    }
    double lambda = rayleigh > 0.0 && std::isfinite(rayleigh) ? 0.99 / rayleigh : 0.0;
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    for (int it = 0; it < 200 && lambda > 0.0; ++it) {
        Eigen::LLT<Eigen::MatrixXd> shifted(gram.matrix() - lambda * id);
        if (shifted.info() == Eigen::Success && GramMatrix::pivots_positive(shifted.matrixL()))
            return lambda;
        lambda *= 0.5;
    }
    throw NotPositiveDefinite("could not certify a positive lower eigenvalue bound");
}

struct ThetaOptions {
    std::uint64_t budget = default_enumeration_budget;
};

struct ThetaResult {
    double value = 0.0;
    double tail_bound = 0.0;
    std::uint64_t points_enumerated = 0;
    double radius = 0.0;
};

/// Bound on sum over Q(v + c) > radius of exp(-pi Q(v + c)):
/// exp(-pi R / 2) * (sum_k exp(-pi lambda k^2 / 2) + 2)^n.
inline double theta_tail_bound(std::size_t dim, double lambda_min, double radius)
{
    const double c = detail::gaussian_integer_sum(std::numbers::pi * lambda_min / 2.0) + 2.0;
    return std::exp(-std::numbers::pi * radius / 2.0 + static_cast<double>(dim) * std::log(c));
}

/// sum_{v in Z^n} exp(-pi Q(v + center)) with |true - value| <= tail_bound <= tol.
inline ThetaResult theta_sum(const GramMatrix& gram, std::span<const double> center, double tol,
                             const ThetaOptions& opts = {})
{
    if (!(tol > 0.0) || !std::isfinite(tol))
        throw InvalidArgument("theta_sum: tolerance must be positive");
    const auto n = gram.dim();
    const double lambda = certified_min_eigenvalue(gram);
    const double log_c = std::log(detail::gaussian_integer_sum(std::numbers::pi * lambda / 2.0) + 2.0);
    if (!std::isfinite(log_c))
        throw ToleranceUnreachable("theta_sum: eigenvalue bound underflows");

    double radius = std::max(0.0, 2.0 / std::numbers::pi * (static_cast<double>(n) * log_c - std::log(tol)));
    double bound = theta_tail_bound(n, lambda, radius);
    for (int grow = 0; !(bound < tol); ++grow) {
        if (grow > 64 || !std::isfinite(radius))
            throw ToleranceUnreachable("theta_sum: radius growth stalled before reaching tolerance");
        radius += 1.0;
        bound = theta_tail_bound(n, lambda, radius);
    }

    std::vector<double> qs;
    detail::fincke_pohst(gram, center, radius, opts.budget,
                         [&](std::span<const long long>, double q) { qs.push_back(q); });
    std::sort(qs.begin(), qs.end());
    std::vector<double> terms(qs.size());
    std::transform(qs.begin(), qs.end(), terms.begin(),
                   [](double q) { return std::exp(-std::numbers::pi * q); });

    ThetaResult r;
    r.value = detail::neumaier_sum(terms);
    r.tail_bound = bound;
    r.points_enumerated = qs.size();
    r.radius = radius;
    return r;
}

inline ThetaResult theta_sum(const GramMatrix& gram, double tol, const ThetaOptions& opts = {})
{
    const std::vector<double> zero(gram.dim(), 0.0);
    return theta_sum(gram, zero, tol, opts);
}

/// Lattice spanned by the rows of `basis` in Euclidean R^n.
class EmbeddedLattice {
public:
    explicit EmbeddedLattice(Eigen::MatrixXd basis)
        : basis_(std::move(basis)), gram_(checked_gram(basis_)),
          covolume_(std::abs(basis_.determinant())) {}

    std::size_t dim() const noexcept { return static_cast<std::size_t>(basis_.rows()); }
    const Eigen::MatrixXd& basis() const noexcept { return basis_; }
    const GramMatrix& gram() const noexcept { return gram_; }
    double covolume() const noexcept { return covolume_; }

private:
    static GramMatrix checked_gram(const Eigen::MatrixXd& b)
    {
        if (b.rows() == 0 || b.rows() != b.cols())
            throw InvalidArgument("lattice basis must be a nonempty square matrix");
        return GramMatrix(b * b.transpose());
    }

    Eigen::MatrixXd basis_;
    GramMatrix gram_;
    double covolume_;
};

/// Dual lattice {w : <w, L> in Z}, with basis b*_j satisfying <b_i, b*_j> = delta_ij.
inline EmbeddedLattice dual_lattice(const EmbeddedLattice& lattice)
{
    Eigen::MatrixXd dual = lattice.basis().inverse().transpose();
    return EmbeddedLattice(std::move(dual));
}

/// Inverse of a gram matrix; the gram of the dual basis.
inline GramMatrix dual_gram(const GramMatrix& gram)
{
    Eigen::LLT<Eigen::MatrixXd> llt(gram.matrix());
    const auto n = static_cast<Eigen::Index>(gram.dim());
    return GramMatrix(llt.solve(Eigen::MatrixXd::Identity(n, n)));
}

using UnimodularMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

/// LLL-reduces the rows of `basis` in place (delta = 0.99) and returns the
/// integer unimodular U with reduced = U * original.
inline UnimodularMatrix lll_reduce(Eigen::MatrixXd& basis, double delta = 0.99)
{
    const Eigen::Index n = basis.rows();
    UnimodularMatrix u = UnimodularMatrix::Identity(n, n);
    if (n < 2)
        return u;

    Eigen::MatrixXd star(n, basis.cols());
    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd norms(n);
    auto gram_schmidt = [&] {
        for (Eigen::Index i = 0; i < n; ++i) {
            star.row(i) = basis.row(i);
            for (Eigen::Index j = 0; j < i; ++j) {
                mu(i, j) = basis.row(i).dot(star.row(j)) / norms(j);
                star.row(i) -= mu(i, j) * star.row(j);
            }
            norms(i) = star.row(i).squaredNorm();
        }
    };

    gram_schmidt();
    Eigen::Index k = 1;
    for (int guard = 0; k < n; ++guard) {
        if (guard > 100000)
            throw Error("lll_reduce: no convergence");
        for (Eigen::Index j = k - 1; j >= 0; --j) {
            const double r = std::round(mu(k, j));
            if (r != 0.0) {
                basis.row(k) -= r * basis.row(j);
                u.row(k) -= static_cast<long long>(r) * u.row(j);
                gram_schmidt();
            }
        }
        if (norms(k) >= (delta - mu(k, k - 1) * mu(k, k - 1)) * norms(k - 1)) {
            ++k;
        } else {
            basis.row(k).swap(basis.row(k - 1));
            u.row(k).swap(u.row(k - 1));
            gram_schmidt();
            k = std::max<Eigen::Index>(k - 1, 1);
        }
    }
    return u;
}

} // namespace arcoh

#endif // ARCOH_LATTICE_HPP
