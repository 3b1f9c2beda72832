#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "impob/errors.hpp"
#include "impob/matrix.hpp"
#include "impob/polynomial.hpp"
#include "impob/rational.hpp"

namespace impob {

// Dense matrix with polynomial entries; the only producers in this library
// are matrix pencils sE - A and their column replacements for Cramer solves.
class PolynomialMatrix {
public:
    PolynomialMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    static PolynomialMatrix pencil(const RationalMatrix& e, const RationalMatrix& a) {
        if (e.rows() != a.rows() || e.cols() != a.cols())
            throw dimension_mismatch("pencil: E and A shapes differ");
        PolynomialMatrix p(e.rows(), e.cols());
        for (std::size_t i = 0; i < e.rows(); ++i)
            for (std::size_t j = 0; j < e.cols(); ++j)
                p(i, j) = RationalPolynomial::from_coeffs({-a(i, j), e(i, j)});
        return p;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    RationalPolynomial& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const RationalPolynomial& operator()(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }

    PolynomialMatrix with_column(std::size_t j, const PolynomialVector& col) const {
        if (j >= cols_)
            throw dimension_mismatch("with_column: column index out of range");
        if (col.size() != rows_)
            throw dimension_mismatch("with_column: column length != rows");
        PolynomialMatrix out = *this;
        for (std::size_t i = 0; i < rows_; ++i)
            out(i, j) = col[i];
        return out;
    }

    RationalMatrix evaluate(const Rational& s) const {
        RationalMatrix m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                m(i, j) = (*this)(i, j).evaluate(s);
        return m;
    }

    PolynomialVector apply(const PolynomialVector& x) const {
        if (x.size() != cols_)
            throw dimension_mismatch("apply: vector length != cols");
        PolynomialVector y(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            RationalPolynomial acc;
            for (std::size_t j = 0; j < cols_; ++j)
                acc = acc + (*this)(i, j) * x[j];
            y[i] = acc;
        }
        return y;
    }

    // Sum over columns of the max entry degree; bounds deg(det) since every
    // determinant term takes one entry per column.
    std::size_t det_degree_bound() const {
        std::size_t bound = 0;
        for (std::size_t j = 0; j < cols_; ++j) {
            int dmax = -1;
            for (std::size_t i = 0; i < rows_; ++i)
                dmax = std::max(dmax, (*this)(i, j).degree());
            if (dmax > 0)
                bound += static_cast<std::size_t>(dmax);
        }
        return bound;
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<RationalPolynomial> entries_;
};

namespace detail {

// Lagrange interpolation through (x_i, y_i) with distinct x_i.
inline RationalPolynomial lagrange_interpolate(const std::vector<Rational>& xs,
                                               const std::vector<Rational>& ys) {
    RationalPolynomial acc;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        RationalPolynomial basis(Rational(1));
        Rational denom(1);
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (j == i)
                continue;
            basis = basis * RationalPolynomial::from_coeffs({-xs[j], Rational(1)});
            denom *= xs[i] - xs[j];
        }
        acc = acc + (ys[i] / denom) * basis;
    }
    return acc;
}

} // namespace detail

// Exact determinant polynomial: evaluate at enough integer points, then
// interpolate. Each sample is an exact rational determinant.
inline RationalPolynomial det_poly(const PolynomialMatrix& p) {
    if (!p.is_square())
        throw dimension_mismatch("det_poly: matrix not square");
    if (p.rows() == 0)
        return RationalPolynomial(Rational(1));
    const std::size_t bound = p.det_degree_bound();
    std::vector<Rational> xs, ys;
    xs.reserve(bound + 1);
    ys.reserve(bound + 1);
    for (std::size_t k = 0; k <= bound; ++k) {
        xs.emplace_back(static_cast<long>(k));
        ys.push_back(det(p.evaluate(xs.back())));
    }
    return detail::lagrange_interpolate(xs, ys);
}

// Constant matrix times polynomial vector.
inline PolynomialVector matrix_apply(const RationalMatrix& m, const PolynomialVector& x) {
    if (x.size() != m.cols())
        throw dimension_mismatch("matrix_apply: vector length != cols");
    PolynomialVector y(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        RationalPolynomial acc;
        for (std::size_t j = 0; j < m.cols(); ++j)
            acc = acc + m(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

// Cramer's rule for P x = b with square P. Each component is returned as an
// unreduced (numerator, denominator) pair; the denominator det(P) is shared
// and repeated per pair. Throws irregular_pencil when det(P) = 0.
inline std::vector<std::pair<RationalPolynomial, RationalPolynomial>>
solve_poly_cramer(const PolynomialMatrix& p, const PolynomialVector& b) {
    if (!p.is_square())
        throw dimension_mismatch("solve_poly_cramer: matrix not square");
    if (b.size() != p.rows())
        throw dimension_mismatch("solve_poly_cramer: rhs length != rows");
    const RationalPolynomial den = det_poly(p);
    if (den.is_zero())
        throw irregular_pencil("solve_poly_cramer: zero determinant");
    std::vector<std::pair<RationalPolynomial, RationalPolynomial>> out;
    out.reserve(p.cols());
    for (std::size_t j = 0; j < p.cols(); ++j)
        out.emplace_back(det_poly(p.with_column(j, b)), den);
    return out;
}

} // namespace impob
