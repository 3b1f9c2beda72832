#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "impob/errors.hpp"
#include "impob/matrix.hpp"
#include "impob/poly_matrix.hpp"
#include "impob/polynomial.hpp"

namespace impob {

// A validated descriptor system E x' = A x, y = C x with a regular pencil:
// E, A are n x n, C is m x n, and det(sE - A) is not the zero polynomial.
// Construction goes through validate(); instances are immutable afterwards.
class DescriptorSystem {
public:
    static DescriptorSystem validate(RationalMatrix e, RationalMatrix a, RationalMatrix c) {
        if (!e.is_square())
            throw dimension_mismatch("descriptor system: E must be square");
        if (a.rows() != e.rows() || a.cols() != e.cols())
            throw dimension_mismatch("descriptor system: A must match E");
        if (c.cols() != e.cols())
            throw dimension_mismatch("descriptor system: C must have n columns");
        RationalPolynomial dp = det_poly(PolynomialMatrix::pencil(e, a));
        if (dp.is_zero())
            throw irregular_pencil("descriptor system: det(sE - A) is identically zero");
        return DescriptorSystem(std::move(e), std::move(a), std::move(c), std::move(dp));
    }

    std::size_t n() const { return e_.rows(); }
    std::size_t m() const { return c_.rows(); }

    const RationalMatrix& E() const { return e_; }
    const RationalMatrix& A() const { return a_; }
    const RationalMatrix& C() const { return c_; }

    const RationalPolynomial& det_pencil() const { return det_pencil_; }
    std::size_t rank_E() const { return rank_e_; }

    // Invertible E: the system is an ordinary ODE in disguise and admits no
    // impulsive behaviour at all.
    bool is_standard() const { return rank_e_ == n(); }

private:
    DescriptorSystem(RationalMatrix e, RationalMatrix a, RationalMatrix c, RationalPolynomial dp)
        : e_(std::move(e)),
          a_(std::move(a)),
          c_(std::move(c)),
          det_pencil_(std::move(dp)),
          rank_e_(rank(e_)) {}

    RationalMatrix e_;
    RationalMatrix a_;
    RationalMatrix c_;
    RationalPolynomial det_pencil_;
    std::size_t rank_e_;
};

} // namespace impob
