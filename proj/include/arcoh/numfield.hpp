#ifndef ARCOH_NUMFIELD_HPP
#define ARCOH_NUMFIELD_HPP

// Number fields given by an integral basis, fractional ideals in Hermite
// normal form, prime splitting for quadratic fields, and the metrized
// embedding of an ideal into R^n.
//
// Coordinates of field elements are always taken over the integral basis
// omega_0 = 1, omega_1, ..., omega_{n-1}. Archimedean places are ordered
// real first (ascending value of the generator), then complex; a complex
// place contributes the coordinate pair (Re, Im).

#include "arcoh/errors.hpp"
#include "arcoh/lattice.hpp"
#include "arcoh/zmatrix.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace arcoh {

using QVector = std::vector<Rational>;
using ZVector = std::vector<Integer>;

/// (1 / denominator) * row lattice of `basis`, with basis in HNF and
/// gcd(basis entries, denominator) = 1.
class FractionalIdeal {
public:
    FractionalIdeal() = default;

    /// Ideal spanned (over Z) by the rows of `generators` / denominator.
    FractionalIdeal(ZMatrix generators, Integer denominator)
    {
        if (denominator <= 0)
            throw InvalidArgument("fractional ideal: denominator must be positive");
        basis_ = hermite_normal_form(std::move(generators));
        denominator_ = std::move(denominator);
        normalize();
    }

    static FractionalIdeal unit(std::size_t n) { return {ZMatrix::identity(n), Integer(1)}; }

    static FractionalIdeal from_rational_rows(const QMatrix& rows)
    {
        auto [num, den] = clear_denominators(rows);
        return {std::move(num), std::move(den)};
    }

    const ZMatrix& basis() const noexcept { return basis_; }
    const Integer& denominator() const noexcept { return denominator_; }
    std::size_t degree() const noexcept { return basis_.rows(); }

    /// |det(basis)| / denominator^n.
    Rational norm() const
    {
        Integer det = 1;
        for (std::size_t i = 0; i < basis_.rows(); ++i)
            det *= basis_(i, i);
        Integer den = 1;
        for (std::size_t i = 0; i < basis_.rows(); ++i)
            den *= denominator_;
        return Rational(det, den);
    }

    /// Basis rows as rational coordinates over the integral basis.
    QMatrix rational_basis() const
    {
        QMatrix q(basis_.rows(), basis_.cols());
        for (std::size_t i = 0; i < basis_.rows(); ++i)
            for (std::size_t j = 0; j < basis_.cols(); ++j)
                q(i, j) = Rational(basis_(i, j), denominator_);
        return q;
    }

    bool is_integral() const noexcept { return denominator_ == 1; }

    friend bool operator==(const FractionalIdeal&, const FractionalIdeal&) = default;

private:
    void normalize()
    {
        Integer g = denominator_;
        for (std::size_t i = 0; i < basis_.rows(); ++i)
            for (std::size_t j = 0; j < basis_.cols(); ++j)
                g = gcd(g, basis_(i, j));
        if (g > 1) {
            for (std::size_t i = 0; i < basis_.rows(); ++i)
                for (std::size_t j = 0; j < basis_.cols(); ++j)
                    basis_(i, j) /= g;
            denominator_ /= g;
        }
    }

    ZMatrix basis_;
    Integer denominator_ = 1;
};

enum class FieldKind { rational, quadratic, custom };

/// Raw content of a custom field descriptor file.
struct FieldDescriptor {
    std::size_t degree = 0;
    std::size_t r1 = 0;
    std::size_t r2 = 0;
    Integer abs_discriminant = 0;
    std::vector<double> embeddings;  // degree x degree, row-major
    ZMatrix different_basis;          // degree x degree over the integral basis
};

class NumberField;

struct PrimeIdeal {
    long long p = 0;
    int index = 0;
    Integer residue_norm = 0;
    int residue_degree = 1;
    int ramification = 1;
    FractionalIdeal ideal;
};

class NumberField {
public:
    std::size_t degree() const noexcept { return n_; }
    std::size_t r1() const noexcept { return r1_; }
    std::size_t r2() const noexcept { return r2_; }
    std::size_t places() const noexcept { return r1_ + r2_; }
    const Integer& abs_discriminant() const noexcept { return disc_; }
    double log_abs_discriminant() const { return std::log(disc_.convert_to<double>()); }
    FieldKind kind() const noexcept { return kind_; }

    /// The squarefree d of Q(sqrt d); empty for other fields.
    std::optional<long long> quadratic_d() const noexcept { return d_; }

    /// Row i holds the place coordinates of omega_i.
    const Eigen::MatrixXd& embeddings() const noexcept { return emb_; }
    const ZMatrix& trace_matrix() const noexcept { return trace_; }
    const FractionalIdeal& different() const noexcept { return different_; }
    const FractionalIdeal& inverse_different() const noexcept { return inv_different_; }
    FractionalIdeal ring_of_integers() const { return FractionalIdeal::unit(n_); }

    std::string name() const
    {
        switch (kind_) {
        case FieldKind::rational: return "Q";
        case FieldKind::quadratic: return "Q(sqrt(" + std::to_string(*d_) + "))";
        case FieldKind::custom: return "custom degree " + std::to_string(n_);
        }
        return {};
    }

    /// Product of two elements given by coordinates over the integral basis.
    template <class T>
    std::vector<T> multiply(const std::vector<T>& a, const std::vector<T>& b) const
    {
        std::vector<T> c(n_, T(0));
        for (std::size_t i = 0; i < n_; ++i) {
            if (a[i] == 0)
                continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (b[j] == 0)
                    continue;
                const T ab = a[i] * b[j];
                const auto& w = table_[i * n_ + j];
                for (std::size_t k = 0; k < n_; ++k)
                    if (w[k] != 0)
                        c[k] += ab * T(w[k]);
            }
        }
        return c;
    }

    Rational trace_pairing(const QVector& a, const QVector& b) const
    {
        Rational t = 0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                t += a[i] * Rational(trace_(i, j)) * b[j];
        return t;
    }

    /// Place coordinates of an element, unscaled.
    Eigen::RowVectorXd embed(const std::vector<double>& coords) const
    {
        Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(n_));
        for (std::size_t i = 0; i < n_; ++i)
            out += coords[i] * emb_.row(static_cast<Eigen::Index>(i));
        return out;
    }

    /// Per-coordinate scale factors realizing ||z||_D^2 for infinite
    /// components x: e^{-x} at real places, sqrt(2 e^{-x}) on both
    /// coordinates of a complex place.
    Eigen::RowVectorXd metric_scale(std::span<const double> x) const
    {
        if (x.size() != places())
            throw InvalidArgument("expected " + std::to_string(places()) + " infinite components, got " +
                                  std::to_string(x.size()));
        Eigen::RowVectorXd s(static_cast<Eigen::Index>(n_));
        for (std::size_t k = 0; k < r1_; ++k)
            s(static_cast<Eigen::Index>(k)) = std::exp(-x[k]);
        for (std::size_t k = 0; k < r2_; ++k) {
            const double w = std::sqrt(2.0 * std::exp(-x[r1_ + k]));
            s(static_cast<Eigen::Index>(r1_ + 2 * k)) = w;
            s(static_cast<Eigen::Index>(r1_ + 2 * k + 1)) = w;
        }
        return s;
    }

    /// Covolume of O_F under the zero-divisor metric.
    double unit_covolume() const
    {
        const std::vector<double> zero(places(), 0.0);
        const Eigen::RowVectorXd s = metric_scale(zero);
        return std::abs((emb_ * s.asDiagonal()).determinant());
    }

    friend NumberField make_rational_field();
    friend NumberField make_quadratic_field(long long d);
    friend NumberField make_custom_field(const FieldDescriptor& desc, bool validate);

private:
    NumberField() = default;

    void finish_from_tables()
    {
        // O_F^vee = {y : Tr(y O_F) in Z} = inverse different; rows of T^{-1}.
        inv_different_ = FractionalIdeal::from_rational_rows(inverse(to_rational(trace_)));
    }

    std::size_t n_ = 0;
    std::size_t r1_ = 0;
    std::size_t r2_ = 0;
    Integer disc_ = 1;
    FieldKind kind_ = FieldKind::rational;
    std::optional<long long> d_;
    // omega^2 = c0 + c1 * omega for quadratic fields.
    long long c0_ = 0;
    long long c1_ = 0;
    Eigen::MatrixXd emb_;
    std::vector<std::vector<Integer>> table_;
    ZMatrix trace_;
    FractionalIdeal different_;
    FractionalIdeal inv_different_;

    friend std::vector<PrimeIdeal> primes_above(const NumberField& field, long long p);
};

inline bool is_squarefree(long long d)
{
    long long m = d < 0 ? -d : d;
    for (long long q = 2; q * q <= m; ++q)
        if (m % (q * q) == 0)
            return false;
    return true;
}

inline bool is_prime(long long p)
{
    if (p < 2)
        return false;
    for (long long q = 2; q * q <= p; ++q)
        if (p % q == 0)
            return false;
    return true;
}

inline NumberField make_rational_field()
{
    NumberField f;
    f.n_ = 1;
    f.r1_ = 1;
    f.r2_ = 0;
    f.disc_ = 1;
    f.kind_ = FieldKind::rational;
    f.emb_ = Eigen::MatrixXd::Ones(1, 1);
    f.table_ = {{Integer(1)}};
    f.trace_ = ZMatrix{{Integer(1)}};
    f.different_ = FractionalIdeal::unit(1);
    f.finish_from_tables();
    return f;
}

inline FractionalIdeal principal_ideal(const NumberField& field, const QVector& alpha);

/// Q(sqrt d) with integral basis {1, omega}, omega = (1 + sqrt d) / 2 when
/// d = 1 mod 4 and omega = sqrt d otherwise.
inline NumberField make_quadratic_field(long long d)
{
    if (d == 0 || d == 1 || !is_squarefree(d))
        throw InvalidFieldSpec("quadratic field: d = " + std::to_string(d) + " must be squarefree and not 0 or 1");
    NumberField f;
    f.n_ = 2;
    f.kind_ = FieldKind::quadratic;
    f.d_ = d;
    const bool one_mod_four = ((d % 4) + 4) % 4 == 1;
    const long long field_disc = one_mod_four ? d : 4 * d;
    f.disc_ = field_disc < 0 ? -field_disc : field_disc;
    if (one_mod_four) {
        f.c0_ = (d - 1) / 4;
        f.c1_ = 1;
    } else {
        f.c0_ = d;
        f.c1_ = 0;
    }

    const double root = std::sqrt(std::abs(static_cast<double>(d)));
    f.emb_ = Eigen::MatrixXd(2, 2);
    if (d > 0) {
        f.r1_ = 2;
        f.r2_ = 0;
        // sigma_1(sqrt d) = -sqrt d, sigma_2(sqrt d) = +sqrt d.
        f.emb_ << 1.0, 1.0, one_mod_four ? (1.0 - root) / 2.0 : -root, one_mod_four ? (1.0 + root) / 2.0 : root;
    } else {
        f.r1_ = 0;
        f.r2_ = 1;
        f.emb_ << 1.0, 0.0, one_mod_four ? 0.5 : 0.0, one_mod_four ? root / 2.0 : root;
    }

    const Integer c0 = f.c0_, c1 = f.c1_;
    f.table_ = {{1, 0}, {0, 1}, {0, 1}, {c0, c1}};
    // Tr(1) = 2, Tr(omega) = c1, Tr(omega^2) = 2 c0 + c1^2.
    f.trace_ = ZMatrix{{Integer(2), c1}, {c1, 2 * c0 + c1 * c1}};
    // The different is (sqrt(field discriminant)).
    const QVector sqrt_disc = one_mod_four ? QVector{Rational(-1), Rational(2)} : QVector{Rational(0), Rational(2)};
    f.different_ = principal_ideal(f, sqrt_disc);
    f.finish_from_tables();
    return f;
}

/// Builds a field from a descriptor. With `validate`, every cross-check
/// (signature, integral multiplication and trace tables, covolume against
/// sqrt(Delta), discriminant of the trace form, and the different) must
/// pass or DescriptorInconsistent names the one that failed.
inline NumberField make_custom_field(const FieldDescriptor& desc, bool validate = true)
{
    const std::size_t n = desc.degree;
    if (n == 0)
        throw DescriptorInconsistent("degree", "degree must be at least 1");
    if (desc.r1 + 2 * desc.r2 != n)
        throw DescriptorInconsistent("signature", "r1 + 2 r2 must equal the degree");
    if (desc.embeddings.size() != n * n)
        throw DescriptorInconsistent("embeddings", "expected " + std::to_string(n * n) + " reals");
    if (desc.abs_discriminant <= 0)
        throw DescriptorInconsistent("abs_discriminant", "must be a positive integer");
    if (desc.different_basis.rows() != n || desc.different_basis.cols() != n)
        throw DescriptorInconsistent("different_basis", "expected a degree x degree integer matrix");

    NumberField f;
    f.n_ = n;
    f.r1_ = desc.r1;
    f.r2_ = desc.r2;
    f.disc_ = desc.abs_discriminant;
    f.kind_ = FieldKind::custom;
    f.emb_ = Eigen::MatrixXd(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            f.emb_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = desc.embeddings[i * n + j];

    if (std::abs(f.emb_.determinant()) < 1e-12)
        throw DescriptorInconsistent("embeddings", "integral basis embeddings are singular");

    if (validate) {
        const double expected = std::sqrt(desc.abs_discriminant.convert_to<double>());
        const double got = f.unit_covolume();
        if (std::abs(got - expected) > 1e-8 * expected)
            throw DescriptorInconsistent("covolume", "covolume of O_F is " + std::to_string(got) +
                                                         ", sqrt(abs_discriminant) is " + std::to_string(expected));
    }

    // Multiplication and trace tables recovered from the embeddings.
    const Eigen::MatrixXd emb_inv = f.emb_.inverse();
    auto place_product = [&](const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& y) {
        Eigen::RowVectorXd z(x.size());
        for (std::size_t k = 0; k < desc.r1; ++k)
            z(static_cast<Eigen::Index>(k)) = x(static_cast<Eigen::Index>(k)) * y(static_cast<Eigen::Index>(k));
        for (std::size_t k = 0; k < desc.r2; ++k) {
            const auto re = static_cast<Eigen::Index>(desc.r1 + 2 * k);
            z(re) = x(re) * y(re) - x(re + 1) * y(re + 1);
            z(re + 1) = x(re) * y(re + 1) + x(re + 1) * y(re);
        }
        return z;
    };
    auto place_trace = [&](const Eigen::RowVectorXd& z) {
        double t = 0.0;
        for (std::size_t k = 0; k < desc.r1; ++k)
            t += z(static_cast<Eigen::Index>(k));
        for (std::size_t k = 0; k < desc.r2; ++k)
            t += 2.0 * z(static_cast<Eigen::Index>(desc.r1 + 2 * k));
        return t;
    };
    auto nearest = [](double v, const char* what) {
        const double r = std::round(v);
        if (std::abs(v - r) > 1e-6 * std::max(1.0, std::abs(v)))
            throw DescriptorInconsistent(what, "value " + std::to_string(v) + " is not an integer");
        return Integer(static_cast<long long>(r));
    };

    f.table_.assign(n * n, std::vector<Integer>(n));
    f.trace_ = ZMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Eigen::RowVectorXd prod = place_product(f.emb_.row(static_cast<Eigen::Index>(i)),
                                                          f.emb_.row(static_cast<Eigen::Index>(j)));
            const Eigen::RowVectorXd coords = prod * emb_inv;
            for (std::size_t k = 0; k < n; ++k)
                f.table_[i * n + j][k] = nearest(coords(static_cast<Eigen::Index>(k)), "multiplication_table");
            f.trace_(i, j) = nearest(place_trace(prod), "trace_form");
        }

    f.different_ = FractionalIdeal(desc.different_basis, Integer(1));
    f.finish_from_tables();

    if (validate) {
        const Rational det = determinant(to_rational(f.trace_));
        if (boost::multiprecision::abs(det) != Rational(desc.abs_discriminant))
            throw DescriptorInconsistent("discriminant", "|det trace form| = " + det.str() +
                                                             " but abs_discriminant = " + desc.abs_discriminant.str());
        if (f.different_.norm() != Rational(desc.abs_discriminant))
            throw DescriptorInconsistent("different", "N(different) = " + f.different_.norm().str() +
                                                          " differs from abs_discriminant");
    }
    return f;
}

// ---------------------------------------------------------------------------
// Ideal arithmetic

/// The principal ideal alpha * O_F.
inline FractionalIdeal principal_ideal(const NumberField& field, const QVector& alpha)
{
    const std::size_t n = field.degree();
    QMatrix rows(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        QVector e(n, Rational(0));
        e[i] = 1;
        const QVector p = field.multiply(alpha, e);
        for (std::size_t j = 0; j < n; ++j)
            rows(i, j) = p[j];
    }
    return FractionalIdeal::from_rational_rows(rows);
}

inline FractionalIdeal ideal_mul(const NumberField& field, const FractionalIdeal& a, const FractionalIdeal& b)
{
    const std::size_t n = field.degree();
    ZMatrix gens(n * n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const ZVector x = a.basis().row(i);
        for (std::size_t j = 0; j < n; ++j) {
            const ZVector p = field.multiply(x, b.basis().row(j));
            for (std::size_t k = 0; k < n; ++k)
                gens(i * n + j, k) = p[k];
        }
    }
    return {std::move(gens), a.denominator() * b.denominator()};
}

/// {y : Tr(y I) in Z} = different^{-1} * I^{-1}.
inline FractionalIdeal trace_dual(const NumberField& field, const FractionalIdeal& ideal)
{
    // Dual basis Y with B T Y^T = 1, i.e. Y = (T B^T)^{-1}.
    const QMatrix tb = to_rational(field.trace_matrix()) * ideal.rational_basis().transpose();
    return FractionalIdeal::from_rational_rows(inverse(tb));
}

inline FractionalIdeal ideal_inv(const NumberField& field, const FractionalIdeal& ideal)
{
    return ideal_mul(field, field.different(), trace_dual(field, ideal));
}

inline Rational ideal_norm(const FractionalIdeal& ideal) { return ideal.norm(); }

/// I^k for any integer k.
inline FractionalIdeal ideal_pow(const NumberField& field, const FractionalIdeal& ideal, long long k)
{
    FractionalIdeal base = k < 0 ? ideal_inv(field, ideal) : ideal;
    FractionalIdeal out = field.ring_of_integers();
    for (long long e = k < 0 ? -k : k; e > 0; e >>= 1) {
        if (e & 1)
            out = ideal_mul(field, out, base);
        if (e > 1)
            base = ideal_mul(field, base, base);
    }
    return out;
}

/// Primes of O_F above p, in a fixed order: for split p the two primes
/// (p, omega - r) follow the roots r of the minimal polynomial of omega
/// mod p as least nonnegative residues.
inline std::vector<PrimeIdeal> primes_above(const NumberField& field, long long p)
{
    if (!is_prime(p))
        throw InvalidArgument(std::to_string(p) + " is not a rational prime");
    std::vector<PrimeIdeal> out;
    if (field.kind() == FieldKind::rational) {
        out.push_back({p, 0, Integer(p), 1, 1, FractionalIdeal(ZMatrix{{Integer(p)}}, Integer(1))});
        return out;
    }
    if (field.kind() != FieldKind::quadratic)
        throw UnsupportedField("primes_above: custom fields carry no splitting data; give the divisor by an explicit ideal");

    // omega^2 - c1 omega - c0 = 0.
    std::vector<long long> roots;
    for (long long r = 0; r < p; ++r) {
        const long long val = ((r % p) * (r % p) - field.c1_ * r - field.c0_) % p;
        if ((val + p) % p == 0)
            roots.push_back(r);
    }
    auto two_element = [&](long long r) {
        return FractionalIdeal(ZMatrix{{Integer(p), Integer(0)}, {Integer(0), Integer(p)}, {Integer(-r), Integer(1)}},
                               Integer(1));
    };
    const Integer pp = Integer(p);
    if (roots.size() == 2) {
        for (int i = 0; i < 2; ++i)
            out.push_back({p, i, pp, 1, 1, two_element(roots[static_cast<std::size_t>(i)])});
    } else if (roots.size() == 1) {
        out.push_back({p, 0, pp, 1, 2, two_element(roots[0])});
    } else {
        out.push_back({p, 0, pp * pp, 2, 1, FractionalIdeal(ZMatrix{{pp, Integer(0)}, {Integer(0), pp}}, Integer(1))});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Metrized embedding

/// An ideal with an LLL-reduced Z-basis and its embedded lattice under the
/// metric of infinite components x.
struct MetrizedIdeal {
    FractionalIdeal ideal;
    ZMatrix basis_numerators;  // rows; divide by ideal.denominator()
    EmbeddedLattice lattice;
};

inline std::vector<double> to_doubles(const std::vector<Integer>& row, const Integer& den)
{
    std::vector<double> out(row.size());
    for (std::size_t i = 0; i < row.size(); ++i)
        out[i] = Rational(row[i], den).convert_to<double>();
    return out;
}

inline Eigen::MatrixXd embed_rows(const NumberField& field, const ZMatrix& rows, const Integer& den,
                                  const Eigen::RowVectorXd& scale)
{
    const auto n = static_cast<Eigen::Index>(field.degree());
    Eigen::MatrixXd b(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        b.row(i) = field.embed(to_doubles(rows.row(static_cast<std::size_t>(i)), den)).cwiseProduct(scale);
    return b;
}

inline MetrizedIdeal metrize_ideal(const NumberField& field, const FractionalIdeal& ideal, std::span<const double> x)
{
    const Eigen::RowVectorXd scale = field.metric_scale(x);
    Eigen::MatrixXd approx = embed_rows(field, ideal.basis(), ideal.denominator(), scale);
    const UnimodularMatrix u = lll_reduce(approx);

    const std::size_t n = field.degree();
    ZMatrix reduced(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const long long c = u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
            if (c == 0)
                continue;
            for (std::size_t j = 0; j < n; ++j)
                reduced(i, j) += Integer(c) * ideal.basis()(k, j);
        }
    // Re-embed from exact coordinates so no cancellation is inherited.
    Eigen::MatrixXd basis = embed_rows(field, reduced, ideal.denominator(), scale);
    return {ideal, std::move(reduced), EmbeddedLattice(std::move(basis))};
}

/// The ideal as a lattice in R^n with ||z||_D^2 = sum_sigma |z_sigma|^2 ||1||_sigma^2.
inline EmbeddedLattice embed_ideal(const NumberField& field, const FractionalIdeal& ideal, std::span<const double> x)
{
    return metrize_ideal(field, ideal, x).lattice;
}

/// N(I) * sqrt(Delta) * e^{-sum x_sigma}.
inline double expected_covolume(const NumberField& field, const FractionalIdeal& ideal, std::span<const double> x)
{
    double s = 0.0;
    for (double v : x)
        s += v;
    return ideal.norm().convert_to<double>() * std::sqrt(field.abs_discriminant().convert_to<double>()) *
           std::exp(-s);
}

} // namespace arcoh

#endif // ARCOH_NUMFIELD_HPP
