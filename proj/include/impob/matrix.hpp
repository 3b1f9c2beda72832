#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "impob/errors.hpp"
#include "impob/rational.hpp"

namespace impob {

// Dense matrix over Rational, row-major. Dimensions may be zero in either
// direction; every operation is total on such shapes.
class RationalMatrix {
public:
    RationalMatrix() = default;

    RationalMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    static RationalMatrix identity(std::size_t n) {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    static RationalMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
        RationalMatrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != m.cols_)
                throw dimension_mismatch("from_rows: ragged rows");
            std::size_t j = 0;
            for (long v : row)
                m(i, j++) = v;
            ++i;
        }
        return m;
    }

    static RationalMatrix from_rows(const std::vector<RationalVector>& rows) {
        RationalMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_)
                throw dimension_mismatch("from_rows: ragged rows");
            for (std::size_t j = 0; j < m.cols_; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    static RationalMatrix column_vector(const RationalVector& v) {
        RationalMatrix m(v.size(), 1);
        for (std::size_t i = 0; i < v.size(); ++i)
            m(i, 0) = v[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    bool is_zero() const {
        for (const Rational& e : entries_)
            if (e != 0)
                return false;
        return true;
    }

    RationalMatrix transpose() const {
        RationalMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    // Copies B into this matrix with top-left corner at (r0, c0). B must fit.
    void set_block(std::size_t r0, std::size_t c0, const RationalMatrix& b) {
        if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_)
            throw dimension_mismatch("set_block: block exceeds matrix bounds");
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j)
                (*this)(r0 + i, c0 + j) = b(i, j);
    }

    RationalMatrix block(std::size_t r0, std::size_t c0, std::size_t r, std::size_t c) const {
        if (r0 + r > rows_ || c0 + c > cols_)
            throw dimension_mismatch("block: range exceeds matrix bounds");
        RationalMatrix out(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                out(i, j) = (*this)(r0 + i, c0 + j);
        return out;
    }

    RationalVector column(std::size_t j) const {
        RationalVector v(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            v[i] = (*this)(i, j);
        return v;
    }

    RationalVector apply(const RationalVector& x) const {
        if (x.size() != cols_)
            throw dimension_mismatch("apply: vector length != cols");
        RationalVector y(rows_, Rational(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            Rational acc(0);
            for (std::size_t j = 0; j < cols_; ++j)
                acc += (*this)(i, j) * x[j];
            y[i] = acc;
        }
        return y;
    }

    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }

    friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw dimension_mismatch("matrix +: shape mismatch");
        RationalMatrix c(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.entries_.size(); ++k)
            c.entries_[k] = a.entries_[k] + b.entries_[k];
        return c;
    }

    friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw dimension_mismatch("matrix -: shape mismatch");
        RationalMatrix c(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.entries_.size(); ++k)
            c.entries_[k] = a.entries_[k] - b.entries_[k];
        return c;
    }

    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
        if (a.cols_ != b.rows_)
            throw dimension_mismatch("matrix *: inner dimensions differ");
        RationalMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Rational& aik = a(i, k);
                if (aik == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend RationalMatrix operator*(const Rational& s, const RationalMatrix& a) {
        RationalMatrix c(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.entries_.size(); ++k)
            c.entries_[k] = s * a.entries_[k];
        return c;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> entries_;
};

inline RationalMatrix vconcat(const RationalMatrix& top, const RationalMatrix& bottom) {
    if (top.cols() != bottom.cols())
        throw dimension_mismatch("vconcat: column counts differ");
    RationalMatrix out(top.rows() + bottom.rows(), top.cols());
    out.set_block(0, 0, top);
    out.set_block(top.rows(), 0, bottom);
    return out;
}

inline RationalMatrix hconcat(const RationalMatrix& left, const RationalMatrix& right) {
    if (left.rows() != right.rows())
        throw dimension_mismatch("hconcat: row counts differ");
    RationalMatrix out(left.rows(), left.cols() + right.cols());
    out.set_block(0, 0, left);
    out.set_block(0, left.cols(), right);
    return out;
}

inline RationalMatrix pow(const RationalMatrix& m, std::size_t e) {
    if (!m.is_square())
        throw dimension_mismatch("pow: matrix not square");
    RationalMatrix acc = RationalMatrix::identity(m.rows());
    for (std::size_t i = 0; i < e; ++i)
        acc = acc * m;
    return acc;
}

namespace detail {

inline mpz_class divexact(const mpz_class& a, const mpz_class& b) {
    mpz_class r;
    mpz_divexact(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// Clears denominators row by row: W[i] = lcm_i * M.row(i) over the integers.
inline std::vector<std::vector<mpz_class>> cleared_rows(const RationalMatrix& m,
                                                        std::vector<mpz_class>* scales = nullptr) {
    std::vector<std::vector<mpz_class>> w(m.rows(), std::vector<mpz_class>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        mpz_class l(1);
        for (std::size_t j = 0; j < m.cols(); ++j)
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
        for (std::size_t j = 0; j < m.cols(); ++j) {
            mpz_class num(m(i, j).get_num());
            w[i][j] = num * divexact(l, mpz_class(m(i, j).get_den()));
        }
        if (scales)
            scales->push_back(l);
    }
    return w;
}

// Fraction-free elimination (Bareiss with column skipping). Returns the rank;
// when det_out is non-null the input must be square and *det_out receives
// det(W) (0 if rank-deficient). Intermediate entries are minors of W, so the
// division by the previous pivot is exact.
inline std::size_t bareiss(std::vector<std::vector<mpz_class>>& w, mpz_class* det_out) {
    const std::size_t rows = w.size();
    const std::size_t cols = rows ? w[0].size() : 0;
    std::size_t rk = 0;
    mpz_class prev(1);
    int sign = 1;
    for (std::size_t col = 0; col < cols && rk < rows; ++col) {
        std::size_t p = rk;
        while (p < rows && w[p][col] == 0)
            ++p;
        if (p == rows)
            continue;
        if (p != rk) {
            std::swap(w[p], w[rk]);
            sign = -sign;
        }
        for (std::size_t i = rk + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j)
                w[i][j] = divexact(w[rk][col] * w[i][j] - w[i][col] * w[rk][j], prev);
            w[i][col] = 0;
        }
        prev = w[rk][col];
        ++rk;
    }
    if (det_out) {
        if (rk < rows)
            *det_out = 0;
        else
            *det_out = sign > 0 ? prev : mpz_class(-prev);
    }
    return rk;
}

} // namespace detail

inline std::size_t rank(const RationalMatrix& m) {
    auto w = detail::cleared_rows(m);
    return detail::bareiss(w, nullptr);
}

inline Rational det(const RationalMatrix& m) {
    if (!m.is_square())
        throw dimension_mismatch("det: matrix not square");
    if (m.rows() == 0)
        return Rational(1);
    std::vector<mpz_class> scales;
    auto w = detail::cleared_rows(m, &scales);
    mpz_class d;
    detail::bareiss(w, &d);
    Rational out(d);
    for (const mpz_class& s : scales)
        out /= Rational(s);
    return out;
}

struct RrefForm {
    RationalMatrix mat;
    std::vector<std::size_t> pivot_cols;
    std::size_t rank() const { return pivot_cols.size(); }
};

// Reduced row echelon form via rational Gauss-Jordan. Independent of the
// Bareiss path above; the two are cross-checked by rank in the tests.
inline RrefForm rref(RationalMatrix m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t col = 0; col < m.cols() && r < m.rows(); ++col) {
        std::size_t p = r;
        while (p < m.rows() && m(p, col) == 0)
            ++p;
        if (p == m.rows())
            continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j)
                std::swap(m(p, j), m(r, j));
        const Rational inv = 1 / m(r, col);
        for (std::size_t j = col; j < m.cols(); ++j)
            m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, col) == 0)
                continue;
            const Rational f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j)
                m(i, j) -= f * m(r, j);
        }
        pivots.push_back(col);
        ++r;
    }
    return {std::move(m), std::move(pivots)};
}

// Kernel basis, one vector per free column, free columns in ascending order.
// Basis vector for free column f has entry 1 at f, 0 at every other free
// column, and -R(t, f) at the t-th pivot column.
inline std::vector<RationalVector> nullspace_basis(const RationalMatrix& m) {
    const RrefForm form = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : form.pivot_cols)
        is_pivot[c] = true;
    std::vector<RationalVector> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        RationalVector v(m.cols(), Rational(0));
        v[f] = 1;
        for (std::size_t t = 0; t < form.pivot_cols.size(); ++t)
            v[form.pivot_cols[t]] = -form.mat(t, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solves M X = B for square invertible M; B may hold several right-hand
// sides. Throws singular_matrix when rank(M) < n.
inline RationalMatrix solve_invertible(const RationalMatrix& m, const RationalMatrix& b) {
    if (!m.is_square())
        throw dimension_mismatch("solve_invertible: matrix not square");
    if (b.rows() != m.rows())
        throw dimension_mismatch("solve_invertible: rhs row count");
    const std::size_t n = m.rows();
    const RrefForm form = rref(hconcat(m, b));
    if (form.rank() != n || (n > 0 && form.pivot_cols.back() >= n))
        throw singular_matrix("solve_invertible: singular coefficient matrix");
    return form.mat.block(0, n, n, b.cols());
}

inline RationalMatrix inverse(const RationalMatrix& m) {
    return solve_invertible(m, RationalMatrix::identity(m.rows()));
}

} // namespace impob
