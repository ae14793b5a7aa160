#ifndef ARCOH_ARAKELOV_HPP
#define ARCOH_ARAKELOV_HPP

// Arakelov divisors on a number field and their arithmetic cohomology:
// h0 as the log of a lattice theta sum, h1 through the closed-form density
// of the first cohomology, and numeric verifiers for Serre duality and
// Riemann-Roch that re-enumerate the dual lattice independently.

#include "arcoh/errors.hpp"
#include "arcoh/lattice.hpp"
#include "arcoh/numfield.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <utility>
#include <variant>
#include <vector>

namespace arcoh {

struct PrimeExponent {
    long long p = 0;
    int index = 0;
    long long exponent = 0;

    friend bool operator==(const PrimeExponent&, const PrimeExponent&) = default;
};

/// sum_P x_P P + sum_sigma x_sigma sigma. The finite part is either a list
/// of prime exponents or directly the associated ideal prod P^{-x_P}.
struct ArakelovDivisor {
    std::variant<std::vector<PrimeExponent>, FractionalIdeal> finite;
    std::vector<double> infinite;

    static ArakelovDivisor zero(const NumberField& field)
    {
        return {std::vector<PrimeExponent>{}, std::vector<double>(field.places(), 0.0)};
    }

    static ArakelovDivisor at_infinity(const NumberField& field, std::vector<double> x)
    {
        if (x.size() != field.places())
            throw InvalidArgument("divisor: expected " + std::to_string(field.places()) + " infinite components");
        return {std::vector<PrimeExponent>{}, std::move(x)};
    }

    bool has_prime_form() const noexcept { return std::holds_alternative<std::vector<PrimeExponent>>(finite); }
};

struct CohomologyValue {
    double value = 0.0;
    double tail_bound = 0.0;
    std::uint64_t points_enumerated = 0;
};

struct CohomologyOptions {
    std::uint64_t budget = default_enumeration_budget;
};

namespace detail {

inline double log_integer(const Integer& v)
{
    if (v <= 0)
        throw InvalidArgument("log of a nonpositive integer");
    const auto bits = boost::multiprecision::msb(v);
    if (bits < 1000)
        return std::log(v.convert_to<double>());
    const auto shift = bits - 900;
    const Integer top = v >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

inline double log_rational(const Rational& q)
{
    return log_integer(boost::multiprecision::numerator(q)) - log_integer(boost::multiprecision::denominator(q));
}

inline const PrimeIdeal& lookup_prime(const std::vector<PrimeIdeal>& primes, const PrimeExponent& e)
{
    if (e.index < 0 || static_cast<std::size_t>(e.index) >= primes.size())
        throw InvalidArgument("prime index " + std::to_string(e.index) + " out of range above p = " +
                              std::to_string(e.p));
    return primes[static_cast<std::size_t>(e.index)];
}

inline void check_infinite(const NumberField& field, const ArakelovDivisor& d)
{
    if (d.infinite.size() != field.places())
        throw InvalidArgument("divisor: expected " + std::to_string(field.places()) + " infinite components, got " +
                              std::to_string(d.infinite.size()));
    for (double x : d.infinite)
        if (!std::isfinite(x))
            throw InvalidArgument("divisor: infinite components must be finite reals");
}

} // namespace detail

/// prod_P P^{-x_P}, exact.
inline FractionalIdeal associated_ideal(const NumberField& field, const ArakelovDivisor& d)
{
    if (const auto* ideal = std::get_if<FractionalIdeal>(&d.finite)) {
        if (ideal->degree() != field.degree())
            throw InvalidArgument("divisor ideal has the wrong degree for this field");
        return *ideal;
    }
    FractionalIdeal out = field.ring_of_integers();
    for (const auto& e : std::get<std::vector<PrimeExponent>>(d.finite)) {
        if (e.exponent == 0)
            continue;
        const auto primes = primes_above(field, e.p);
        const PrimeIdeal& prime = detail::lookup_prime(primes, e);
        out = ideal_mul(field, out, ideal_pow(field, prime.ideal, -e.exponent));
    }
    return out;
}

/// sum_P x_P log N(P) + sum_sigma x_sigma.
inline double degree(const NumberField& field, const ArakelovDivisor& d)
{
    detail::check_infinite(field, d);
    double finite = 0.0;
    if (const auto* ideal = std::get_if<FractionalIdeal>(&d.finite)) {
        finite = -detail::log_rational(ideal->norm());
    } else {
        for (const auto& e : std::get<std::vector<PrimeExponent>>(d.finite)) {
            if (e.exponent == 0)
                continue;
            const auto primes = primes_above(field, e.p);
            finite += static_cast<double>(e.exponent) *
                      detail::log_integer(detail::lookup_prime(primes, e).residue_norm);
        }
    }
    double infinite = 0.0;
    for (double x : d.infinite)
        infinite += x;
    return finite + infinite;
}

/// Ideal different^{-1}, zero infinite components.
inline ArakelovDivisor canonical_divisor(const NumberField& field)
{
    return {field.inverse_different(), std::vector<double>(field.places(), 0.0)};
}

/// D1 - D2. Prime forms subtract exponentwise; otherwise the associated
/// ideals combine as I1 * I2^{-1}.
inline ArakelovDivisor sub(const NumberField& field, const ArakelovDivisor& a, const ArakelovDivisor& b)
{
    detail::check_infinite(field, a);
    detail::check_infinite(field, b);
    std::vector<double> x(a.infinite.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = a.infinite[i] - b.infinite[i];

    if (a.has_prime_form() && b.has_prime_form()) {
        std::map<std::pair<long long, int>, long long> acc;
        for (const auto& e : std::get<std::vector<PrimeExponent>>(a.finite))
            acc[{e.p, e.index}] += e.exponent;
        for (const auto& e : std::get<std::vector<PrimeExponent>>(b.finite))
            acc[{e.p, e.index}] -= e.exponent;
        std::vector<PrimeExponent> out;
        for (const auto& [key, exp] : acc)
            if (exp != 0)
                out.push_back({key.first, key.second, exp});
        return {std::move(out), std::move(x)};
    }
    FractionalIdeal ideal = ideal_mul(field, associated_ideal(field, a), ideal_inv(field, associated_ideal(field, b)));
    return {std::move(ideal), std::move(x)};
}

inline MetrizedIdeal metrize(const NumberField& field, const ArakelovDivisor& d)
{
    detail::check_infinite(field, d);
    return metrize_ideal(field, associated_ideal(field, d), d.infinite);
}

namespace detail {

// Theta tolerance such that the log-level error eps / (S - eps) stays below
// tol for any S >= 1.
inline double theta_tolerance_for_log(double tol) { return tol / (1.0 + tol); }

inline CohomologyValue log_theta(const ThetaResult& t)
{
    return {std::log(t.value), t.tail_bound / (t.value - t.tail_bound), t.points_enumerated};
}

} // namespace detail

/// h0(D) = log sum_{x in I} exp(-pi ||x||_D^2).
inline CohomologyValue h0(const NumberField& field, const ArakelovDivisor& d, double tol,
                          const CohomologyOptions& opts = {})
{
    if (!(tol > 0.0))
        throw InvalidArgument("h0: tolerance must be positive");
    const MetrizedIdeal m = metrize(field, d);
    const ThetaResult t = theta_sum(m.lattice.gram(), detail::theta_tolerance_for_log(tol), {opts.budget});
    return detail::log_theta(t);
}

/// h1(D) = (1/2) log Delta - deg D + h0(D): the log-density at 0 of the
/// probability measure describing H^1(D).
inline CohomologyValue h1(const NumberField& field, const ArakelovDivisor& d, double tol,
                          const CohomologyOptions& opts = {})
{
    CohomologyValue v = h0(field, d, tol, opts);
    v.value += 0.5 * field.log_abs_discriminant() - degree(field, d);
    return v;
}

/// exp(-pi ||x||_D^2) for x given by real coordinates over the HNF basis
/// of the associated ideal.
inline double effectivity_u(const NumberField& field, const ArakelovDivisor& d, std::span<const double> coords)
{
    detail::check_infinite(field, d);
    const FractionalIdeal ideal = associated_ideal(field, d);
    const std::size_t n = field.degree();
    if (coords.size() != n)
        throw InvalidArgument("effectivity_u: expected " + std::to_string(n) + " coordinates");
    std::vector<double> element(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double> row = to_doubles(ideal.basis().row(i), ideal.denominator());
        for (std::size_t j = 0; j < n; ++j)
            element[j] += coords[i] * row[j];
    }
    const Eigen::RowVectorXd z = field.embed(element).cwiseProduct(field.metric_scale(d.infinite));
    return std::exp(-std::numbers::pi * z.squaredNorm());
}

/// v(x) = sum_y exp(-pi ||x + y||^2) / sum_y exp(-pi ||y||^2) over y in I,
/// for x given by real coordinates over the HNF basis of the ideal.
inline double effectivity_v(const NumberField& field, const ArakelovDivisor& d, std::span<const double> coords,
                            double tol, const CohomologyOptions& opts = {})
{
    if (!(tol > 0.0))
        throw InvalidArgument("effectivity_v: tolerance must be positive");
    const MetrizedIdeal m = metrize(field, d);
    const std::size_t n = field.degree();
    if (coords.size() != n)
        throw InvalidArgument("effectivity_v: expected " + std::to_string(n) + " coordinates");
    std::vector<double> element(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double> row = to_doubles(m.ideal.basis().row(i), m.ideal.denominator());
        for (std::size_t j = 0; j < n; ++j)
            element[j] += coords[i] * row[j];
    }
    const Eigen::RowVectorXd point = field.embed(element).cwiseProduct(field.metric_scale(d.infinite));
    // Coordinates of the point over the reduced lattice basis.
    const Eigen::RowVectorXd c = m.lattice.basis().transpose().partialPivLu().solve(point.transpose()).transpose();
    const std::vector<double> center(c.data(), c.data() + c.size());

    const ThetaResult denom = theta_sum(m.lattice.gram(), tol, {opts.budget});
    const ThetaResult numer = theta_sum(m.lattice.gram(), center, tol * denom.value, {opts.budget});
    return numer.value / denom.value;
}

struct SerreDualityReport {
    CohomologyValue h1_direct;
    CohomologyValue h0_dual;
    double delta = 0.0;
    double tol = 0.0;
    bool passed = false;
};

/// Compares h1(D) from the density formula with h0(K - D) enumerated over
/// different^{-1} I^{-1} under the K - D metric.
inline SerreDualityReport verify_serre_duality(const NumberField& field, const ArakelovDivisor& d, double tol,
                                               const CohomologyOptions& opts = {})
{
    if (!(tol > 0.0))
        throw InvalidArgument("verify_serre_duality: tolerance must be positive");
    SerreDualityReport r;
    r.tol = tol;
    r.h1_direct = h1(field, d, tol / 4.0, opts);
    r.h0_dual = h0(field, sub(field, canonical_divisor(field), d), tol / 4.0, opts);
    r.delta = std::abs(r.h1_direct.value - r.h0_dual.value);
    r.passed = r.delta <= tol;
    return r;
}

struct RiemannRochReport {
    CohomologyValue h0_d;
    CohomologyValue h0_k_minus_d;
    double lhs = 0.0;
    double rhs = 0.0;
    double delta = 0.0;
    double tol = 0.0;
    bool passed = false;
};

/// lhs = h0(D) - h0(K - D) from two enumerations; rhs = deg D - (1/2) log Delta.
inline RiemannRochReport verify_riemann_roch(const NumberField& field, const ArakelovDivisor& d, double tol,
                                             const CohomologyOptions& opts = {})
{
    if (!(tol > 0.0))
        throw InvalidArgument("verify_riemann_roch: tolerance must be positive");
    RiemannRochReport r;
    r.tol = tol;
    r.h0_d = h0(field, d, tol / 4.0, opts);
    r.h0_k_minus_d = h0(field, sub(field, canonical_divisor(field), d), tol / 4.0, opts);
    r.lhs = r.h0_d.value - r.h0_k_minus_d.value;
    r.rhs = degree(field, d) - 0.5 * field.log_abs_discriminant();
    r.delta = std::abs(r.lhs - r.rhs);
    r.passed = r.delta <= tol;
    return r;
}

struct ZetaRow {
    double t = 0.0;
    std::complex<double> value;
    double h0 = 0.0;
    double h1 = 0.0;
};

/// exp(s h0(D_t) + (1 - s) h1(D_t)) for D_t = t * infinity on Q.
inline std::vector<ZetaRow> zeta_integrand_sweep(const NumberField& field, std::complex<double> s,
                                                 std::span<const double> t_grid, double tol = 1e-10,
                                                 const CohomologyOptions& opts = {})
{
    if (field.kind() != FieldKind::rational)
        throw UnsupportedField("zeta sweep is implemented for Q only");
    std::vector<ZetaRow> rows;
    rows.reserve(t_grid.size());
    for (double t : t_grid) {
        const ArakelovDivisor d = ArakelovDivisor::at_infinity(field, {t});
        const double a = h0(field, d, tol, opts).value;
        const double b = a + 0.5 * field.log_abs_discriminant() - degree(field, d);
        rows.push_back({t, std::exp(s * a + (1.0 - s) * b), a, b});
    }
    return rows;
}

} // namespace arcoh

#endif // ARCOH_ARAKELOV_HPP
