#ifndef ARCOH_GHOST_HPP
#define ARCOH_GHOST_HPP

// Ghost-spaces on finite abelian groups.
//
// A ghost-space of the first kind G_u is G with the convolution
//     delta_x * delta_y = u(x) u(y) / u(x + y) delta_{x+y}
// for an even, positive, positive-definite u with u(0) = 1. One of the
// second kind G^mu uses
//     delta_x * delta_y = T_{x+y} mu
// for an even positive-definite probability measure mu. The mixed structure
// combines both factors. Characters are indexed by G itself through
// chi_a(x) = exp(2 pi i sum_j a_j x_j / n_j).

#include "arcoh/errors.hpp"
#include "arcoh/zmatrix.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace arcoh {

using Complex = std::complex<double>;

inline constexpr double pd_tolerance = 1e-12;

/// Z/n_1 x ... x Z/n_k with elements indexed in mixed-radix lexicographic
/// order (first component most significant). An empty order list is the
/// trivial group.
class FiniteAbelianGroup {
public:
    FiniteAbelianGroup() { init(); }
    explicit FiniteAbelianGroup(std::vector<int> orders) : orders_(std::move(orders)) { init(); }

    const std::vector<int>& orders() const noexcept { return orders_; }
    std::size_t order() const noexcept { return order_; }
    std::size_t rank() const noexcept { return orders_.size(); }
    /// Least common multiple of the cyclic orders.
    long long exponent() const noexcept { return exponent_; }

    std::vector<int> element(std::size_t index) const
    {
        std::vector<int> x(orders_.size());
        for (std::size_t j = orders_.size(); j-- > 0;) {
            x[j] = static_cast<int>(index % static_cast<std::size_t>(orders_[j]));
            index /= static_cast<std::size_t>(orders_[j]);
        }
        return x;
    }

    std::size_t index(std::span<const int> x) const
    {
        if (x.size() != orders_.size())
            throw InvalidArgument("group element has wrong rank");
        std::size_t idx = 0;
        for (std::size_t j = 0; j < orders_.size(); ++j) {
            const int n = orders_[j];
            idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(((x[j] % n) + n) % n);
        }
        return idx;
    }

    std::size_t add(std::size_t a, std::size_t b) const { return add_[a * order_ + b]; }
    std::size_t neg(std::size_t a) const { return neg_[a]; }
    std::size_t sub(std::size_t a, std::size_t b) const { return add(a, neg(b)); }

    /// k with chi_a(x) = exp(2 pi i k / exponent()).
    long long phase(std::size_t a, std::size_t x) const
    {
        const auto& ea = coords_[a];
        const auto& ex = coords_[x];
        long long k = 0;
        for (std::size_t j = 0; j < orders_.size(); ++j)
            k += static_cast<long long>(ea[j]) * ex[j] * (exponent_ / orders_[j]);
        return k % exponent_;
    }

    Complex character(std::size_t a, std::size_t x) const { return roots_[static_cast<std::size_t>(phase(a, x))]; }

    friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) { return a.orders_ == b.orders_; }

private:
    void init()
    {
        order_ = 1;
        exponent_ = 1;
        for (int n : orders_) {
            if (n < 2)
                throw InvalidArgument("cyclic orders must be at least 2");
            order_ *= static_cast<std::size_t>(n);
            exponent_ = std::lcm(exponent_, static_cast<long long>(n));
        }
        if (order_ > 100000)
            throw InvalidArgument("group order too large for exhaustive methods");
        coords_.resize(order_);
        for (std::size_t i = 0; i < order_; ++i)
            coords_[i] = element(i);
        add_.resize(order_ * order_);
        neg_.resize(order_);
        std::vector<int> tmp(orders_.size());
        for (std::size_t a = 0; a < order_; ++a) {
            for (std::size_t j = 0; j < orders_.size(); ++j)
                tmp[j] = -coords_[a][j];
            neg_[a] = index(tmp);
            for (std::size_t b = 0; b < order_; ++b) {
                for (std::size_t j = 0; j < orders_.size(); ++j)
                    tmp[j] = coords_[a][j] + coords_[b][j];
                add_[a * order_ + b] = index(tmp);
            }
        }
        roots_.resize(static_cast<std::size_t>(exponent_));
        for (long long k = 0; k < exponent_; ++k) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(exponent_);
            roots_[static_cast<std::size_t>(k)] = {std::cos(angle), std::sin(angle)};
        }
    }

    std::vector<int> orders_;
    std::size_t order_ = 1;
    long long exponent_ = 1;
    std::vector<std::vector<int>> coords_;
    std::vector<std::size_t> add_;
    std::vector<std::size_t> neg_;
    std::vector<Complex> roots_;
};

// ---------------------------------------------------------------------------
// Fourier transform

/// f^(chi_a) = sum_x f(x) conj(chi_a(x)), counting measure on G.
template <class T>
std::vector<Complex> dft(const FiniteAbelianGroup& g, std::span<const T> f)
{
    if (f.size() != g.order())
        throw InvalidArgument("dft: function size does not match group order");
    std::vector<Complex> out(g.order());
    for (std::size_t a = 0; a < g.order(); ++a) {
        Complex s = 0.0;
        for (std::size_t x = 0; x < g.order(); ++x)
            s += Complex(f[x]) * std::conj(g.character(a, x));
        out[a] = s;
    }
    return out;
}

inline std::vector<Complex> dft(const FiniteAbelianGroup& g, const std::vector<double>& f)
{
    return dft<double>(g, std::span<const double>(f));
}

/// f(x) = (1/|G|) sum_a F(a) chi_a(x).
inline std::vector<Complex> inverse_dft(const FiniteAbelianGroup& g, std::span<const Complex> spectrum)
{
    if (spectrum.size() != g.order())
        throw InvalidArgument("inverse_dft: size does not match group order");
    std::vector<Complex> out(g.order());
    const double inv = 1.0 / static_cast<double>(g.order());
    for (std::size_t x = 0; x < g.order(); ++x) {
        Complex s = 0.0;
        for (std::size_t a = 0; a < g.order(); ++a)
            s += spectrum[a] * g.character(a, x);
        out[x] = s * inv;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Structure validation

struct GhostCheckReport {
    bool passed = true;
    std::string failing_invariant;
    std::string detail;
    std::vector<Complex> spectrum;
    /// {x : u(x) = 1}; first kind only.
    std::vector<std::size_t> stabilizer;
    bool stabilizer_is_subgroup = true;
    bool constant_on_cosets = true;
    double max_value = 0.0;

    void fail(std::string invariant, std::string what)
    {
        if (passed) {
            passed = false;
            failing_invariant = std::move(invariant);
            detail = std::move(what);
        }
    }
};

/// Checks u(0) = 1, evenness, strict positivity, nonnegative spectrum and
/// u <= 1, then reports the subgroup {u = 1} and whether u is constant on
/// its cosets.
inline GhostCheckReport check_first_kind(const FiniteAbelianGroup& g, std::span<const double> u)
{
    GhostCheckReport r;
    if (u.size() != g.order()) {
        r.fail("size", "u has " + std::to_string(u.size()) + " values for a group of order " +
                           std::to_string(g.order()));
        return r;
    }
    if (std::abs(u[0] - 1.0) > pd_tolerance)
        r.fail("u(0) = 1", "u(0) = " + std::to_string(u[0]));
    for (std::size_t x = 0; x < g.order(); ++x) {
        if (!(u[x] > 0.0) || !std::isfinite(u[x]))
            r.fail("u > 0", "u(" + std::to_string(x) + ") = " + std::to_string(u[x]));
        if (std::abs(u[x] - u[g.neg(x)]) > pd_tolerance)
            r.fail("u even", "u(x) != u(-x) at element " + std::to_string(x));
    }
    r.spectrum = dft<double>(g, u);
    for (std::size_t a = 0; a < g.order(); ++a)
        if (r.spectrum[a].real() < -pd_tolerance)
            r.fail("positive-definite", "Fourier coefficient " + std::to_string(a) + " = " +
                                            std::to_string(r.spectrum[a].real()));
    r.max_value = *std::max_element(u.begin(), u.end());
    if (r.max_value > 1.0 + pd_tolerance)
        r.fail("u <= 1", "max u = " + std::to_string(r.max_value));

    for (std::size_t x = 0; x < g.order(); ++x)
        if (std::abs(u[x] - 1.0) <= pd_tolerance)
            r.stabilizer.push_back(x);
    std::vector<char> in_h(g.order(), 0);
    for (auto h : r.stabilizer)
        in_h[h] = 1;
    for (auto a : r.stabilizer) {
        if (!in_h[g.neg(a)])
            r.stabilizer_is_subgroup = false;
        for (auto b : r.stabilizer)
            if (!in_h[g.add(a, b)])
                r.stabilizer_is_subgroup = false;
    }
    for (std::size_t x = 0; x < g.order(); ++x)
        for (auto h : r.stabilizer)
            if (std::abs(u[g.add(x, h)] - u[x]) > pd_tolerance)
                r.constant_on_cosets = false;
    if (!r.stabilizer_is_subgroup)
        r.fail("{u = 1} is a subgroup", "stabilizer set is not closed");
    if (!r.constant_on_cosets)
        r.fail("u constant on cosets of {u = 1}", "u varies within a coset");
    return r;
}

/// mu >= 0, sum mu = 1, mu even, nonnegative spectrum.
inline GhostCheckReport check_second_kind(const FiniteAbelianGroup& g, std::span<const double> mu)
{
    GhostCheckReport r;
    if (mu.size() != g.order()) {
        r.fail("size", "mu has " + std::to_string(mu.size()) + " values for a group of order " +
                           std::to_string(g.order()));
        return r;
    }
    double total = 0.0;
    for (std::size_t x = 0; x < g.order(); ++x) {
        if (!(mu[x] >= 0.0) || !std::isfinite(mu[x]))
            r.fail("mu >= 0", "mu(" + std::to_string(x) + ") = " + std::to_string(mu[x]));
        if (std::abs(mu[x] - mu[g.neg(x)]) > pd_tolerance)
            r.fail("mu even", "mu(x) != mu(-x) at element " + std::to_string(x));
        total += mu[x];
    }
    if (std::abs(total - 1.0) > 1e-12)
        r.fail("sum mu = 1", "total mass " + std::to_string(total));
    r.spectrum = dft<double>(g, mu);
    for (std::size_t a = 0; a < g.order(); ++a)
        if (r.spectrum[a].real() < -pd_tolerance)
            r.fail("positive-definite", "Fourier coefficient " + std::to_string(a) + " = " +
                                            std::to_string(r.spectrum[a].real()));
    r.max_value = *std::max_element(mu.begin(), mu.end());
    return r;
}

class GhostSpaceFirstKind {
public:
    GhostSpaceFirstKind(FiniteAbelianGroup g, std::vector<double> u) : group_(std::move(g)), u_(std::move(u))
    {
        const auto r = check_first_kind(group_, u_);
        if (!r.passed)
            throw InvalidGhostSpace("first kind: " + r.failing_invariant + " fails: " + r.detail);
    }

    static GhostSpaceFirstKind trivial(FiniteAbelianGroup g)
    {
        std::vector<double> ones(g.order(), 1.0);
        return {std::move(g), std::move(ones)};
    }

    const FiniteAbelianGroup& group() const noexcept { return group_; }
    const std::vector<double>& u() const noexcept { return u_; }

private:
    FiniteAbelianGroup group_;
    std::vector<double> u_;
};

class GhostSpaceSecondKind {
public:
    GhostSpaceSecondKind(FiniteAbelianGroup g, std::vector<double> mu) : group_(std::move(g)), mu_(std::move(mu))
    {
        const auto r = check_second_kind(group_, mu_);
        if (!r.passed)
            throw InvalidGhostSpace("second kind: " + r.failing_invariant + " fails: " + r.detail);
    }

    static GhostSpaceSecondKind point_mass(FiniteAbelianGroup g)
    {
        std::vector<double> mu(g.order(), 0.0);
        mu[0] = 1.0;
        return {std::move(g), std::move(mu)};
    }

    const FiniteAbelianGroup& group() const noexcept { return group_; }
    const std::vector<double>& mu() const noexcept { return mu_; }

private:
    FiniteAbelianGroup group_;
    std::vector<double> mu_;
};

// ---------------------------------------------------------------------------
// Convolutions

/// Finitely supported signed measure, dense over the group.
struct GhostMeasure {
    std::vector<double> weights;

    static GhostMeasure point(std::size_t order, std::size_t x, double w = 1.0)
    {
        GhostMeasure m{std::vector<double>(order, 0.0)};
        m.weights[x] = w;
        return m;
    }
};

enum class StructureKind { first, second, mixed };

/// delta_x * delta_y = u(x) u(y) / u(x+y) T_{x+y} mu, which is the first
/// kind for mu = delta_0 and the second kind for u = 1. Extended
/// bilinearly to measures.
class ConvolutionStructure {
public:
    ConvolutionStructure(StructureKind kind, FiniteAbelianGroup g, std::vector<double> u, std::vector<double> mu)
        : kind_(kind), group_(std::move(g)), u_(std::move(u)), mu_(std::move(mu))
    {
        if (u_.size() != group_.order() || mu_.size() != group_.order())
            throw InvalidArgument("convolution structure: sizes do not match group order");
        for (double v : u_)
            if (!(v > 0.0))
                throw InvalidArgument("convolution structure: u must be positive");
        for (std::size_t s = 0; s < mu_.size(); ++s)
            if (mu_[s] != 0.0)
                support_.push_back(s);
    }

    explicit ConvolutionStructure(const GhostSpaceFirstKind& s)
        : ConvolutionStructure(StructureKind::first, s.group(), s.u(), delta0(s.group().order())) {}

    explicit ConvolutionStructure(const GhostSpaceSecondKind& s)
        : ConvolutionStructure(StructureKind::second, s.group(), std::vector<double>(s.group().order(), 1.0),
                               s.mu()) {}

    /// Mixed structure; u must be even with u(0) = 1 and mu an even
    /// probability measure.
    static ConvolutionStructure mixed(FiniteAbelianGroup g, std::vector<double> u, std::vector<double> mu)
    {
        if (u.size() != g.order() || mu.size() != g.order())
            throw InvalidArgument("mixed structure: sizes do not match group order");
        if (std::abs(u[0] - 1.0) > pd_tolerance)
            throw InvalidGhostSpace("mixed structure: u(0) must be 1");
        double total = 0.0;
        for (std::size_t x = 0; x < g.order(); ++x) {
            if (std::abs(u[x] - u[g.neg(x)]) > pd_tolerance || std::abs(mu[x] - mu[g.neg(x)]) > pd_tolerance)
                throw InvalidGhostSpace("mixed structure: u and mu must be even");
            if (!(mu[x] >= 0.0))
                throw InvalidGhostSpace("mixed structure: mu must be nonnegative");
            total += mu[x];
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw InvalidGhostSpace("mixed structure: mu must be a probability measure");
        return {StructureKind::mixed, std::move(g), std::move(u), std::move(mu)};
    }

    StructureKind kind() const noexcept { return kind_; }
    const FiniteAbelianGroup& group() const noexcept { return group_; }
    const std::vector<double>& u() const noexcept { return u_; }
    const std::vector<double>& mu() const noexcept { return mu_; }

    double coefficient(std::size_t x, std::size_t y) const { return u_[x] * u_[y] / u_[group_.add(x, y)]; }

    /// Accumulates w * (delta_x * delta_y) into out.
    void accumulate_point(std::size_t x, std::size_t y, double w, std::vector<double>& out) const
    {
        const std::size_t s = group_.add(x, y);
        const double c = w * coefficient(x, y);
        for (std::size_t z : support_)
            out[group_.add(s, z)] += c * mu_[z];
    }

    GhostMeasure convolve_points(std::size_t x, std::size_t y) const
    {
        GhostMeasure m{std::vector<double>(group_.order(), 0.0)};
        accumulate_point(x, y, 1.0, m.weights);
        return m;
    }

    GhostMeasure convolve(const GhostMeasure& a, const GhostMeasure& b) const
    {
        GhostMeasure m{std::vector<double>(group_.order(), 0.0)};
        for (std::size_t x = 0; x < group_.order(); ++x) {
            if (a.weights[x] == 0.0)
                continue;
            for (std::size_t y = 0; y < group_.order(); ++y)
                if (b.weights[y] != 0.0)
                    accumulate_point(x, y, a.weights[x] * b.weights[y], m.weights);
        }
        return m;
    }

private:
    static std::vector<double> delta0(std::size_t n)
    {
        std::vector<double> d(n, 0.0);
        d[0] = 1.0;
        return d;
    }

    StructureKind kind_;
    FiniteAbelianGroup group_;
    std::vector<double> u_;
    std::vector<double> mu_;
    std::vector<std::size_t> support_;
};

inline GhostMeasure convolve_first(const GhostSpaceFirstKind& s, std::size_t x, std::size_t y)
{
    return ConvolutionStructure(s).convolve_points(x, y);
}

inline GhostMeasure convolve_second(const GhostSpaceSecondKind& s, std::size_t x, std::size_t y)
{
    return ConvolutionStructure(s).convolve_points(x, y);
}

inline GhostMeasure mixed_convolve(const FiniteAbelianGroup& g, const std::vector<double>& u,
                                   const std::vector<double>& mu, std::size_t x, std::size_t y)
{
    return ConvolutionStructure::mixed(g, u, mu).convolve_points(x, y);
}

struct AssociativityReport {
    bool passed = true;
    double max_associativity_error = 0.0;
    double max_commutativity_error = 0.0;
    /// First offending triple (x, y, z) when associativity fails.
    std::optional<std::array<std::size_t, 3>> counterexample;
};

/// Exhaustive check of (d_x * d_y) * d_z == d_x * (d_y * d_z) and
/// d_x * d_y == d_y * d_x, with errors measured relative to max(1, |weights|).
inline AssociativityReport check_associativity(const ConvolutionStructure& s, double tol = 1e-11)
{
    const FiniteAbelianGroup& g = s.group();
    const std::size_t n = g.order();
    AssociativityReport r;
    std::vector<std::vector<double>> pair(n * n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            pair[x * n + y] = s.convolve_points(x, y).weights;

    auto rel_err = [](const std::vector<double>& a, const std::vector<double>& b) {
        double diff = 0.0, scale = 1.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            diff = std::max(diff, std::abs(a[i] - b[i]));
            scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
        }
        return diff / scale;
    };

    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y)
            r.max_commutativity_error = std::max(r.max_commutativity_error, rel_err(pair[x * n + y], pair[y * n + x]));

    std::vector<double> left(n), right(n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
                std::fill(left.begin(), left.end(), 0.0);
                std::fill(right.begin(), right.end(), 0.0);
                const auto& xy = pair[x * n + y];
                const auto& yz = pair[y * n + z];
                for (std::size_t w = 0; w < n; ++w) {
                    if (xy[w] != 0.0)
                        s.accumulate_point(w, z, xy[w], left);
                    if (yz[w] != 0.0)
                        s.accumulate_point(x, w, yz[w], right);
                }
                const double e = rel_err(left, right);
                if (e > r.max_associativity_error) {
                    r.max_associativity_error = e;
                    if (e > tol && !r.counterexample)
                        r.counterexample = std::array<std::size_t, 3>{x, y, z};
                }
            }
    r.passed = r.max_associativity_error <= tol && r.max_commutativity_error <= tol;
    return r;
}

// ---------------------------------------------------------------------------
// Dimensions, quotients, duals

/// log sum_x u(x), counting measure.
inline double dim_first(const GhostSpaceFirstKind& s)
{
    double total = 0.0;
    for (double v : s.u())
        total += v;
    return std::log(total);
}

/// log of the density of mu at 0 against the probability Haar measure.
inline double dim_second(const GhostSpaceSecondKind& s)
{
    return std::log(s.mu()[0] * static_cast<double>(s.group().order()));
}

/// G / G_u = G^mu with mu = u / sum u.
inline GhostSpaceSecondKind quotient_by_ghost(const GhostSpaceFirstKind& s)
{
    double total = 0.0;
    for (double v : s.u())
        total += v;
    std::vector<double> mu(s.u().size());
    for (std::size_t i = 0; i < mu.size(); ++i)
        mu[i] = s.u()[i] / total;
    return {s.group(), std::move(mu)};
}

/// Closure of the generators under addition.
inline std::vector<std::size_t> subgroup_generated(const FiniteAbelianGroup& g, std::span<const std::size_t> gens)
{
    std::vector<char> seen(g.order(), 0);
    std::vector<std::size_t> members{0};
    seen[0] = 1;
    for (std::size_t i = 0; i < members.size(); ++i)
        for (auto h : gens) {
            if (h >= g.order())
                throw InvalidArgument("subgroup generator out of range");
            const std::size_t next = g.add(members[i], h);
            if (!seen[next]) {
                seen[next] = 1;
                members.push_back(next);
            }
        }
    std::sort(members.begin(), members.end());
    return members;
}

/// G / H as a product of cyclic groups, with the projection G -> G/H.
struct GroupQuotient {
    FiniteAbelianGroup quotient;
    std::vector<std::size_t> projection;
    std::vector<std::size_t> kernel;
};

inline GroupQuotient quotient_group(const FiniteAbelianGroup& g, std::span<const std::size_t> gens)
{
    const std::size_t k = g.rank();
    std::vector<std::vector<long long>> rel;
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<long long> r(k, 0);
        r[j] = g.orders()[j];
        rel.push_back(std::move(r));
    }
    for (auto h : gens) {
        if (h >= g.order())
            throw InvalidArgument("subgroup generator out of range");
        const auto e = g.element(h);
        rel.emplace_back(e.begin(), e.end());
    }
    const SmithForm snf = smith_normal_form(rel, k);

    std::vector<int> orders;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < k; ++i)
        if (snf.diagonal[i] > 1) {
            orders.push_back(static_cast<int>(snf.diagonal[i]));
            kept.push_back(i);
        }
    GroupQuotient q{FiniteAbelianGroup(orders), std::vector<std::size_t>(g.order()), {}};
    std::vector<int> y(kept.size());
    for (std::size_t x = 0; x < g.order(); ++x) {
        const auto e = g.element(x);
        for (std::size_t t = 0; t < kept.size(); ++t) {
            long long s = 0;
            for (std::size_t j = 0; j < k; ++j)
                s += static_cast<long long>(e[j]) * snf.column_transform[j][kept[t]];
            const long long d = snf.diagonal[kept[t]];
            y[t] = static_cast<int>(((s % d) + d) % d);
        }
        q.projection[x] = q.quotient.index(y);
        if (q.projection[x] == 0)
            q.kernel.push_back(x);
    }
    return q;
}

struct SubQuotient {
    GroupQuotient groups;
    std::vector<std::size_t> subgroup;
    /// v on G/H; pass through GhostSpaceFirstKind to validate.
    std::vector<double> v;
    double dim_total = 0.0;     // log sum_G u
    double dim_sub = 0.0;       // log sum_H u
    double dim_quotient = 0.0;  // log sum_{G/H} v
    GhostCheckReport check;
};

/// v(xH) = sum_{y in H} u(x + y) / sum_{y in H} u(y) on G/H. The returned
/// check report carries the positive-definiteness verdict for v.
inline SubQuotient sub_quotient_first(const GhostSpaceFirstKind& s, std::span<const std::size_t> gens)
{
    const FiniteAbelianGroup& g = s.group();
    const auto& u = s.u();
    SubQuotient r{quotient_group(g, gens), subgroup_generated(g, gens), {}, 0, 0, 0, {}};
    if (r.groups.kernel != r.subgroup)
        throw Error("sub_quotient_first: quotient kernel disagrees with generated subgroup");

    double h_mass = 0.0;
    for (auto h : r.subgroup)
        h_mass += u[h];
    std::vector<double> coset_mass(r.groups.quotient.order(), 0.0);
    double total = 0.0;
    for (std::size_t x = 0; x < g.order(); ++x) {
        coset_mass[r.groups.projection[x]] += u[x];
        total += u[x];
    }
    r.v.resize(coset_mass.size());
    double v_total = 0.0;
    for (std::size_t c = 0; c < coset_mass.size(); ++c) {
        r.v[c] = coset_mass[c] / h_mass;
        v_total += r.v[c];
    }
    r.dim_total = std::log(total);
    r.dim_sub = std::log(h_mass);
    r.dim_quotient = std::log(v_total);
    r.check = check_first_kind(r.groups.quotient, r.v);
    return r;
}

/// The character group with the probability measure u^(chi) = (1/|G|) sum_x u(x) conj(chi(x)).
inline GhostSpaceSecondKind dual_ghost(const GhostSpaceFirstKind& s)
{
    const FiniteAbelianGroup& g = s.group();
    const auto spectrum = dft<double>(g, s.u());
    std::vector<double> mu(g.order());
    const double inv = 1.0 / static_cast<double>(g.order());
    for (std::size_t a = 0; a < g.order(); ++a)
        mu[a] = std::max(0.0, spectrum[a].real() * inv);
    // Clamp roundoff-level negatives, then restore exact unit mass.
    double total = 0.0;
    for (double m : mu)
        total += m;
    for (double& m : mu)
        m /= total;
    return {g, std::move(mu)};
}

struct QuasiCharacter {
    std::size_t index = 0;  // chi_index (first kind) or evaluation point (second kind)
    std::vector<Complex> values;
    bool symmetric = false;
};

/// Nonzero solutions phi of phi(x) phi(y) = integral of phi against
/// delta_x * delta_y. First kind: phi = chi u. Second kind: phi = c chi with
/// c = sum_l chi(l) mu(l).
inline std::vector<QuasiCharacter> quasi_characters(const ConvolutionStructure& s)
{
    if (s.kind() == StructureKind::mixed)
        throw InvalidArgument("quasi_characters: mixed structures are not supported");
    const FiniteAbelianGroup& g = s.group();
    std::vector<QuasiCharacter> out;
    for (std::size_t a = 0; a < g.order(); ++a) {
        QuasiCharacter q{a, std::vector<Complex>(g.order()), true};
        Complex c = 1.0;
        if (s.kind() == StructureKind::second) {
            c = 0.0;
            for (std::size_t l = 0; l < g.order(); ++l)
                c += g.character(a, l) * s.mu()[l];
        }
        for (std::size_t x = 0; x < g.order(); ++x)
            q.values[x] = (s.kind() == StructureKind::first ? s.u()[x] : 1.0) * c * g.character(a, x);
        for (std::size_t x = 0; x < g.order(); ++x)
            if (std::abs(q.values[g.neg(x)] - std::conj(q.values[x])) > 1e-10)
                q.symmetric = false;
        if (std::abs(c) == 0.0)
            continue;
        out.push_back(std::move(q));
    }
    return out;
}

/// Largest violation of phi(x) phi(y) = integral phi d(delta_x * delta_y) over all pairs.
inline double quasi_character_residual(const ConvolutionStructure& s, std::span<const Complex> phi)
{
    const FiniteAbelianGroup& g = s.group();
    double worst = 0.0;
    for (std::size_t x = 0; x < g.order(); ++x)
        for (std::size_t y = 0; y < g.order(); ++y) {
            const auto m = s.convolve_points(x, y);
            Complex integral = 0.0;
            for (std::size_t z = 0; z < g.order(); ++z)
                integral += phi[z] * m.weights[z];
            worst = std::max(worst, std::abs(phi[x] * phi[y] - integral));
        }
    return worst;
}

/// The dual of 0 -> H_u -> G_u -> (G/H)_v -> 0:
///     0 -> (G/H)^ with v^ -> G^ with u^ -> G^/H^perp with the image of u^ -> 0.
/// The character group of G/H is identified with the annihilator H^perp in G^.
struct DualSequence {
    SubQuotient primal;
    GhostSpaceSecondKind dual_quotient;   // on (G/H)^, measure v^
    std::vector<std::size_t> annihilator;  // lift of each character of G/H into G^
    GhostSpaceSecondKind dual_total;      // G^ with u^
    GroupQuotient restriction;            // G^ -> G^/H^perp = H^
    GhostSpaceSecondKind dual_sub;        // on H^, pushforward of u^
};

inline DualSequence dual_short_exact_sequence(const GhostSpaceFirstKind& s, std::span<const std::size_t> gens)
{
    const FiniteAbelianGroup& g = s.group();
    SubQuotient primal = sub_quotient_first(s, gens);
    if (!primal.check.passed)
        throw InvalidGhostSpace("quotient function v is not a first-kind structure: " + primal.check.failing_invariant);
    const GhostSpaceFirstKind quotient_space(primal.groups.quotient, primal.v);
    GhostSpaceSecondKind dual_quotient = dual_ghost(quotient_space);
    GhostSpaceSecondKind dual_total = dual_ghost(s);

    // Lift character b of G/H to the character a of G with chi_a = chi_b o projection.
    const FiniteAbelianGroup& q = primal.groups.quotient;
    std::vector<std::size_t> lift(q.order());
    std::vector<std::size_t> unit(g.rank());
    for (std::size_t j = 0; j < g.rank(); ++j) {
        std::vector<int> e(g.rank(), 0);
        e[j] = 1;
        unit[j] = g.index(e);
    }
    for (std::size_t b = 0; b < q.order(); ++b) {
        std::vector<int> a(g.rank());
        for (std::size_t j = 0; j < g.rank(); ++j) {
            const long long k = q.phase(b, primal.groups.projection[unit[j]]);
            const long long num = k * g.orders()[j];
            if (num % q.exponent() != 0)
                throw Error("dual_short_exact_sequence: lifted character is not integral");
            a[j] = static_cast<int>(num / q.exponent());
        }
        lift[b] = g.index(a);
    }

    std::vector<std::size_t> lift_gens;
    for (std::size_t j = 0; j < q.rank(); ++j) {
        std::vector<int> e(q.rank(), 0);
        e[j] = 1;
        lift_gens.push_back(lift[q.index(e)]);
    }
    GroupQuotient restriction = quotient_group(g, lift_gens);
    std::vector<double> pushed(restriction.quotient.order(), 0.0);
    for (std::size_t a = 0; a < g.order(); ++a)
        pushed[restriction.projection[a]] += dual_total.mu()[a];
    GhostSpaceSecondKind dual_sub(restriction.quotient, std::move(pushed));

    return {std::move(primal), std::move(dual_quotient), std::move(lift), std::move(dual_total),
            std::move(restriction), std::move(dual_sub)};
}

} // namespace arcoh

#endif // ARCOH_GHOST_HPP
