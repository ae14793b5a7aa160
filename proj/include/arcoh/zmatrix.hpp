#ifndef ARCOH_ZMATRIX_HPP
#define ARCOH_ZMATRIX_HPP

// Exact integer and rational matrices: Hermite normal form, rational
// inversion, and a small Smith normal form for finite-group quotients.

#include "arcoh/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

namespace arcoh {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

template <class T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
    DenseMatrix(std::initializer_list<std::initializer_list<T>> init)
    {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& r : init) {
            if (r.size() != cols_)
                throw InvalidArgument("matrix: ragged rows");
            a_.insert(a_.end(), r.begin(), r.end());
        }
    }

    static DenseMatrix identity(std::size_t n)
    {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const
    {
        return {a_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
    }

    void swap_rows(std::size_t i, std::size_t j)
    {
        for (std::size_t c = 0; c < cols_; ++c)
            std::swap((*this)(i, c), (*this)(j, c));
    }

    DenseMatrix transpose() const
    {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    friend DenseMatrix operator*(const DenseMatrix& x, const DenseMatrix& y)
    {
        if (x.cols_ != y.rows_)
            throw InvalidArgument("matrix product: dimension mismatch");
        DenseMatrix p(x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                if (x(i, k) == 0)
                    continue;
                for (std::size_t j = 0; j < y.cols_; ++j)
                    p(i, j) += x(i, k) * y(k, j);
            }
        return p;
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> a_;
};

using ZMatrix = DenseMatrix<Integer>;
using QMatrix = DenseMatrix<Rational>;

inline Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

inline Integer gcd(Integer a, Integer b)
{
    return boost::multiprecision::gcd(a, b);
}

inline Integer lcm(const Integer& a, const Integer& b)
{
    if (a == 0 || b == 0)
        return 0;
    return boost::multiprecision::abs(a / gcd(a, b) * b);
}

/// Row-style Hermite normal form of a full-column-rank integer matrix:
/// returns the cols x cols upper-triangular basis of the row lattice with
/// positive pivots and 0 <= H(i, j) < H(j, j) above each pivot.
inline ZMatrix hermite_normal_form(ZMatrix a)
{
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    auto row_axpy = [&](std::size_t dst, const Integer& q, std::size_t src) {
        for (std::size_t c = 0; c < n; ++c)
            a(dst, c) -= q * a(src, c);
    };

    for (std::size_t col = 0; col < n; ++col) {
        for (;;) {
            std::size_t best = m;
            for (std::size_t r = col; r < m; ++r)
                if (a(r, col) != 0 && (best == m || abs(a(r, col)) < abs(a(best, col))))
                    best = r;
            if (best == m)
                throw InvalidArgument("hermite_normal_form: matrix does not have full column rank");
            a.swap_rows(col, best);
            bool done = true;
            for (std::size_t r = col + 1; r < m; ++r) {
                if (a(r, col) == 0)
                    continue;
                row_axpy(r, floor_div(a(r, col), a(col, col)), col);
                if (a(r, col) != 0)
                    done = false;
            }
            if (done)
                break;
        }
        if (a(col, col) < 0)
            for (std::size_t c = 0; c < n; ++c)
                a(col, c) = -a(col, c);
        for (std::size_t r = 0; r < col; ++r)
            row_axpy(r, floor_div(a(r, col), a(col, col)), col);
    }

    ZMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h(i, j) = a(i, j);
    return h;
}

inline Rational determinant(QMatrix a)
{
    const std::size_t n = a.rows();
    if (n != a.cols())
        throw InvalidArgument("determinant: matrix not square");
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a(piv, col) == 0)
            ++piv;
        if (piv == n)
            return 0;
        if (piv != col) {
            a.swap_rows(piv, col);
            det = -det;
        }
        det *= a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a(r, col) == 0)
                continue;
            const Rational f = a(r, col) / a(col, col);
            for (std::size_t c = col; c < n; ++c)
                a(r, c) -= f * a(col, c);
        }
    }
    return det;
}

/// Exact inverse by Gauss-Jordan elimination.
inline QMatrix inverse(QMatrix a)
{
    const std::size_t n = a.rows();
    if (n != a.cols())
        throw InvalidArgument("inverse: matrix not square");
    QMatrix inv = QMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a(piv, col) == 0)
            ++piv;
        if (piv == n)
            throw InvalidArgument("inverse: singular matrix");
        a.swap_rows(piv, col);
        inv.swap_rows(piv, col);
        const Rational p = a(col, col);
        for (std::size_t c = 0; c < n; ++c) {
            a(col, c) /= p;
            inv(col, c) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a(r, col) == 0)
                continue;
            const Rational f = a(r, col);
            for (std::size_t c = 0; c < n; ++c) {
                a(r, c) -= f * a(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

inline QMatrix to_rational(const ZMatrix& z)
{
    QMatrix q(z.rows(), z.cols());
    for (std::size_t i = 0; i < z.rows(); ++i)
        for (std::size_t j = 0; j < z.cols(); ++j)
            q(i, j) = Rational(z(i, j));
    return q;
}

/// Writes a rational matrix as numerator / denominator with the least
/// common denominator.
inline std::pair<ZMatrix, Integer> clear_denominators(const QMatrix& q)
{
    Integer den = 1;
    for (std::size_t i = 0; i < q.rows(); ++i)
        for (std::size_t j = 0; j < q.cols(); ++j)
            den = lcm(den, boost::multiprecision::denominator(q(i, j)));
    ZMatrix z(q.rows(), q.cols());
    for (std::size_t i = 0; i < q.rows(); ++i)
        for (std::size_t j = 0; j < q.cols(); ++j)
            z(i, j) = boost::multiprecision::numerator(q(i, j)) * (den / boost::multiprecision::denominator(q(i, j)));
    return {std::move(z), std::move(den)};
}

/// Smith normal form over machine integers, for small finite-group
/// computations. Returns the diagonal d and unimodular column transform V
/// with U * a * V = diag(d) for some unimodular U.
struct SmithForm {
    std::vector<long long> diagonal;
    std::vector<std::vector<long long>> column_transform;
};

inline SmithForm smith_normal_form(std::vector<std::vector<long long>> a, std::size_t cols)
{
    const std::size_t m = a.size();
    std::vector<std::vector<long long>> v(cols, std::vector<long long>(cols, 0));
    for (std::size_t i = 0; i < cols; ++i)
        v[i][i] = 1;

    auto col_op = [&](std::size_t dst, long long q, std::size_t src) {
        for (std::size_t r = 0; r < m; ++r)
            a[r][dst] -= q * a[r][src];
        for (std::size_t r = 0; r < cols; ++r)
            v[r][dst] -= q * v[r][src];
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < m; ++r)
            std::swap(a[r][i], a[r][j]);
        for (std::size_t r = 0; r < cols; ++r)
            std::swap(v[r][i], v[r][j]);
    };
    auto fdiv = [](long long x, long long y) {
        long long q = x / y;
        if ((x % y != 0) && ((x < 0) != (y < 0)))
            --q;
        return q;
    };

    const std::size_t rank_max = std::min(m, cols);
    std::vector<long long> diag;
    bool exhausted = false;
    for (std::size_t t = 0; t < rank_max && !exhausted; ++t) {
        for (;;) {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            std::size_t br = m, bc = cols;
            for (std::size_t r = t; r < m; ++r)
                for (std::size_t c = t; c < cols; ++c)
                    if (a[r][c] != 0 && (br == m || std::llabs(a[r][c]) < std::llabs(a[br][bc]))) {
                        br = r;
                        bc = c;
                    }
            if (br == m) {
                exhausted = true;
                break;
            }
            std::swap(a[t], a[br]);
            swap_cols(t, bc);
            bool clean = true;
            for (std::size_t r = t + 1; r < m; ++r) {
                const long long q = fdiv(a[r][t], a[t][t]);
                if (q != 0)
                    for (std::size_t c = t; c < cols; ++c)
                        a[r][c] -= q * a[t][c];
                if (a[r][t] != 0)
                    clean = false;
            }
            for (std::size_t c = t + 1; c < cols; ++c) {
                const long long q = fdiv(a[t][c], a[t][t]);
                if (q != 0)
                    col_op(c, q, t);
                if (a[t][c] != 0)
                    clean = false;
            }
            if (!clean)
                continue;
            // The pivot must divide the whole trailing block.
            bool divides = true;
            for (std::size_t r = t + 1; r < m && divides; ++r)
                for (std::size_t c = t + 1; c < cols; ++c)
                    if (a[r][c] % a[t][t] != 0) {
                        for (std::size_t k = t; k < cols; ++k)
                            a[t][k] += a[r][k];
                        divides = false;
                        break;
                    }
            if (divides)
                break;
        }
        if (!exhausted)
            diag.push_back(std::llabs(a[t][t]));
    }
    while (diag.size() < cols)
        diag.push_back(0);
    return {std::move(diag), std::move(v)};
}

} // namespace arcoh

#endif // ARCOH_ZMATRIX_HPP
