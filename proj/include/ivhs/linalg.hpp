#ifndef IVHS_LINALG_HPP
#define IVHS_LINALG_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "field.hpp"

namespace ivhs {

// Dense row-major matrix over a finite field.
template <class F>
class Matrix {
public:
    using Elem = typename F::Elem;

    Matrix(F field, std::size_t rows, std::size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero())
    {
    }

    static Matrix identity(const F& field, std::size_t n)
    {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = field.one();
        return m;
    }

    static Matrix from_rows(const F& field, std::size_t cols, const std::vector<std::vector<Elem>>& rows)
    {
        Matrix m(field, rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols)
                throw Error(ErrorKind::AmbientMismatch, "row length differs from column count");
            std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
        }
        return m;
    }

    const F& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Elem& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Elem& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<Elem> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const Elem> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::vector<Elem> row_vector(std::size_t i) const
    {
        auto r = row(i);
        return {r.begin(), r.end()};
    }

    void append_row(std::span<const Elem> r)
    {
        if (r.size() != cols_)
            throw Error(ErrorKind::AmbientMismatch, "row length differs from column count");
        data_.insert(data_.end(), r.begin(), r.end());
        ++rows_;
    }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a != b)
            std::swap_ranges(data_.begin() + a * cols_, data_.begin() + (a + 1) * cols_, data_.begin() + b * cols_);
    }

    void truncate_rows(std::size_t n)
    {
        rows_ = std::min(rows_, n);
        data_.resize(rows_ * cols_);
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    F field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Elem> data_;
};

// In-place Gaussian elimination, pivoting on the first nonzero entry of each
// column. With `reduced` the result is the reduced row-echelon form. Returns
// the pivot columns; rows past the rank are zero afterwards.
template <class F>
std::vector<std::size_t> echelonize(Matrix<F>& m, bool reduced)
{
    const F& f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && f.is_zero(m(piv, c)))
            ++piv;
        if (piv == m.rows())
            continue;
        m.swap_rows(r, piv);
        const auto inv = f.inv(m(r, c));
        f.scale(m.row(r).subspan(c), inv);
        auto src = std::span<const typename F::Elem>(m.row(r).subspan(c));
        for (std::size_t i = reduced ? 0 : r + 1; i < m.rows(); ++i) {
            if (i == r || f.is_zero(m(i, c)))
                continue;
            const auto factor = m(i, c);
            f.axpy(m.row(i).subspan(c), src, factor);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

template <class F>
std::size_t rank(Matrix<F> m)
{
    return echelonize(m, false).size();
}

template <class F>
Matrix<F> transpose(const Matrix<F>& m)
{
    Matrix<F> t(m.field(), m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            t(j, i) = m(i, j);
    return t;
}

template <class F>
Matrix<F> multiply(const Matrix<F>& a, const Matrix<F>& b)
{
    if (a.cols() != b.rows())
        throw Error(ErrorKind::AmbientMismatch, "matrix product shape mismatch");
    const F& f = a.field();
    Matrix<F> c(f, a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (f.is_zero(a(i, k)))
                continue;
            f.axpy(c.row(i), b.row(k), f.neg(a(i, k)));
        }
    return c;
}

template <class F>
typename F::Elem determinant(Matrix<F> m)
{
    if (m.rows() != m.cols())
        throw Error(ErrorKind::AmbientMismatch, "determinant of a non-square matrix");
    const F& f = m.field();
    auto det = f.one();
    const std::size_t n = m.rows();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && f.is_zero(m(piv, c)))
            ++piv;
        if (piv == n)
            return f.zero();
        if (piv != c) {
            m.swap_rows(c, piv);
            det = f.neg(det);
        }
        det = f.mul(det, m(c, c));
        const auto inv = f.inv(m(c, c));
        for (std::size_t i = c + 1; i < n; ++i) {
            if (f.is_zero(m(i, c)))
                continue;
            const auto factor = f.mul(m(i, c), inv);
            f.axpy(m.row(i).subspan(c), std::span<const typename F::Elem>(m.row(c).subspan(c)), factor);
        }
    }
    return det;
}

template <class F>
Matrix<F> inverse(const Matrix<F>& m)
{
    const std::size_t n = m.rows();
    if (n != m.cols())
        throw Error(ErrorKind::AmbientMismatch, "inverse of a non-square matrix");
    Matrix<F> aug(m.field(), n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            aug(i, j) = m(i, j);
        aug(i, n + i) = m.field().one();
    }
    auto piv = echelonize(aug, true);
    if (piv.size() < n || piv[n - 1] != n - 1)
        throw Error(ErrorKind::Unsupported, "matrix is singular");
    Matrix<F> inv(m.field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv(i, j) = aug(i, n + j);
    return inv;
}

// A linear subspace of F^ambient stored by its reduced row-echelon basis,
// which makes equal subspaces compare equal.
template <class F>
class Subspace {
public:
    using Elem = typename F::Elem;

    Subspace(F field, std::size_t ambient) : basis_(std::move(field), 0, ambient) {}

    // Span of the rows of m (dependent or zero rows allowed).
    static Subspace span_of(Matrix<F> m)
    {
        Subspace s(m.field(), m.cols());
        s.pivots_ = echelonize(m, true);
        m.truncate_rows(s.pivots_.size());
        s.basis_ = std::move(m);
        return s;
    }

    const F& field() const noexcept { return basis_.field(); }
    std::size_t ambient() const noexcept { return basis_.cols(); }
    std::size_t dim() const noexcept { return basis_.rows(); }
    const Matrix<F>& basis() const noexcept { return basis_; }
    const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

    // Normal form of v modulo this subspace: zero at every pivot column.
    std::vector<Elem> reduce(std::vector<Elem> v) const
    {
        const F& f = field();
        for (std::size_t r = 0; r < dim(); ++r) {
            const auto c = v[pivots_[r]];
            if (!f.is_zero(c))
                f.axpy(std::span<Elem>(v), basis_.row(r), c);
        }
        return v;
    }

    bool contains(const std::vector<Elem>& v) const
    {
        if (v.size() != ambient())
            throw Error(ErrorKind::AmbientMismatch, "vector length differs from ambient dimension");
        for (const auto& x : reduce(v))
            if (!field().is_zero(x))
                return false;
        return true;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis_ == b.basis_; }

private:
    Matrix<F> basis_;
    std::vector<std::size_t> pivots_;
};

template <class F>
Subspace<F> kernel_basis(Matrix<F> m)
{
    const F& f = m.field();
    const std::size_t n = m.cols();
    auto pivots = echelonize(m, true);
    std::vector<char> is_pivot(n, 0);
    for (auto c : pivots)
        is_pivot[c] = 1;
    Matrix<F> k(f, 0, n);
    std::vector<typename F::Elem> v(n, f.zero());
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free])
            continue;
        std::fill(v.begin(), v.end(), f.zero());
        v[free] = f.one();
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = f.neg(m(r, free));
        k.append_row(v);
    }
    return Subspace<F>::span_of(std::move(k));
}

struct CombinedRank {
    std::size_t sum_dim;
    std::size_t intersection_dim;
};

template <class F>
CombinedRank combine_and_rank(const Subspace<F>& a, const Subspace<F>& b)
{
    if (a.ambient() != b.ambient())
        throw Error(ErrorKind::AmbientMismatch,
            "subspaces of dimension " + std::to_string(a.ambient()) + " and " + std::to_string(b.ambient()));
    if (!(a.field() == b.field()))
        throw Error(ErrorKind::FieldMismatch, "subspaces over different fields");
    Matrix<F> stacked = a.basis();
    for (std::size_t i = 0; i < b.dim(); ++i)
        stacked.append_row(b.basis().row(i));
    const std::size_t sum = rank(std::move(stacked));
    return {sum, a.dim() + b.dim() - sum};
}

// Image of an F_p-subspace after extending scalars to `target`.
template <class F>
Subspace<F> extend_scalars(const Subspace<PrimeField>& s, const F& target)
{
    Matrix<F> m(target, s.dim(), s.ambient());
    for (std::size_t i = 0; i < s.dim(); ++i)
        for (std::size_t j = 0; j < s.ambient(); ++j)
            m(i, j) = target.from_base(s.basis()(i, j));
    return Subspace<F>::span_of(std::move(m));
}

// A Frobenius-stable subspace is defined over F_p, and its reduced echelon
// basis then has prime-field entries. Throws if that fails.
inline Subspace<PrimeField> descend(const Subspace<ExtField>& s)
{
    const PrimeField& fp = s.field().base();
    Matrix<PrimeField> m(fp, s.dim(), s.ambient());
    for (std::size_t i = 0; i < s.dim(); ++i)
        for (std::size_t j = 0; j < s.ambient(); ++j) {
            auto v = s.field().base_value(s.basis()(i, j));
            if (!v)
                throw Error(ErrorKind::FieldMismatch, "subspace is not defined over the prime field");
            m(i, j) = *v;
        }
    return Subspace<PrimeField>::span_of(std::move(m));
}

inline Subspace<PrimeField> descend(const Subspace<PrimeField>& s) { return s; }

} // namespace ivhs

#endif
