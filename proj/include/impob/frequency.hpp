#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "impob/criteria.hpp"
#include "impob/descriptor.hpp"
#include "impob/errors.hpp"
#include "impob/poly_matrix.hpp"
#include "impob/polynomial.hpp"

namespace impob {

// Unique decomposition of num/den into polynomial part plus strictly proper
// part, with q = lim s * proper(s) (the residue-at-infinity weight).
struct ScalarSplit {
    RationalPolynomial poly_part;
    RationalPolynomial proper_num;
    Rational q;

    friend bool operator==(const ScalarSplit&, const ScalarSplit&) = default;
};

inline ScalarSplit split_rational(const RationalPolynomial& num, const RationalPolynomial& den) {
    if (den.is_zero())
        throw invalid_argument("split_rational: zero denominator");
    PolyDivision d = divmod(num, den);
    Rational q(0);
    if (den.degree() >= 1)
        q = d.remainder.coeff(static_cast<std::size_t>(den.degree() - 1)) / den.leading();
    return {std::move(d.quotient), std::move(d.remainder), std::move(q)};
}

// X(s) = (sE - A)^{-1} E w, componentwise split as X = X_A + X_P with X_A
// strictly proper and X_P polynomial. The denominator is stored monic; the
// proper numerators are kept unreduced against it. q_i = lim s * X_A_i(s).
class FrequencySolution {
public:
    FrequencySolution(RationalVector w,
                      PolynomialVector proper_num,
                      RationalPolynomial monic_den,
                      PolynomialVector poly_part,
                      RationalVector q)
        : w_(std::move(w)),
          proper_num_(std::move(proper_num)),
          den_(std::move(monic_den)),
          poly_(std::move(poly_part)),
          q_(std::move(q)) {}

    const RationalVector& w() const { return w_; }
    const PolynomialVector& proper_numerators() const { return proper_num_; }
    const RationalPolynomial& denominator() const { return den_; }
    const PolynomialVector& polynomial_part() const { return poly_; }
    const RationalVector& q() const { return q_; }

    // (numerator, denominator) for X_A component i with common factors
    // cancelled; presentation only, the stored pair stays unreduced.
    std::pair<RationalPolynomial, RationalPolynomial> proper_component_reduced(std::size_t i) const {
        const RationalPolynomial g = poly_gcd(proper_num_.at(i), den_);
        if (g.is_zero() || g.degree() == 0)
            return {proper_num_.at(i), den_};
        return {divmod(proper_num_.at(i), g).quotient, divmod(den_, g).quotient};
    }

private:
    RationalVector w_;
    PolynomialVector proper_num_;
    RationalPolynomial den_;
    PolynomialVector poly_;
    RationalVector q_;
};

inline FrequencySolution solve_frequency(const DescriptorSystem& sys, const RationalVector& w) {
    const std::size_t n = sys.n();
    if (w.size() != n)
        throw dimension_mismatch("solve_frequency: w length != n");
    const PolynomialMatrix p = PolynomialMatrix::pencil(sys.E(), sys.A());
    const RationalVector ew = sys.E().apply(w);
    PolynomialVector b(n);
    for (std::size_t i = 0; i < n; ++i)
        b[i] = RationalPolynomial(ew[i]);
    const auto cramer = solve_poly_cramer(p, b);
    const RationalPolynomial den_raw = cramer.empty() ? sys.det_pencil() : cramer.front().second;
    const Rational lead_inv = 1 / den_raw.leading();
    const RationalPolynomial den = lead_inv * den_raw;
    PolynomialVector proper(n), poly(n);
    RationalVector q(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        const ScalarSplit split = split_rational(lead_inv * cramer[i].first, den);
        poly[i] = split.poly_part;
        proper[i] = split.proper_num;
        q[i] = split.q;
    }
    return {w, std::move(proper), den, std::move(poly), std::move(q)};
}

// Largest power of s appearing across the polynomial parts; nothing when the
// solution has no polynomial (impulsive) content at all.
inline std::optional<std::size_t> impulse_order(const PolynomialVector& poly_part) {
    int d = -1;
    for (const RationalPolynomial& p : poly_part)
        d = std::max(d, p.degree());
    if (d < 0)
        return std::nullopt;
    return static_cast<std::size_t>(d);
}

// Bridge from an unobserved impulsive solution to a rank-style witness:
// when C X(s) = 0 and the polynomial part X_P is nonzero, the pair
// (w - q, X_P) satisfies the witness equations. Re-verification failure
// would contradict the construction, hence internal_defect.
inline std::optional<ImpulseWitness> polynomial_witness_from_solution(const DescriptorSystem& sys,
                                                                      const FrequencySolution& sol) {
    if (!poly_vector_is_zero(matrix_apply(sys.C(), sol.proper_numerators())))
        return std::nullopt;
    if (!poly_vector_is_zero(matrix_apply(sys.C(), sol.polynomial_part())))
        return std::nullopt;
    const std::optional<std::size_t> order = impulse_order(sol.polynomial_part());
    if (!order)
        return std::nullopt;
    const std::size_t n = sys.n();
    RationalVector v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = sol.w()[i] - sol.q()[i];
    std::vector<RationalVector> coeffs(*order + 1, RationalVector(n, Rational(0)));
    for (std::size_t k = 0; k <= *order; ++k)
        for (std::size_t i = 0; i < n; ++i)
            coeffs[k][i] = (k % 2 == 0) ? sol.polynomial_part()[i].coeff(k)
                                        : Rational(-sol.polynomial_part()[i].coeff(k));
    ImpulseWitness w(std::move(v), std::move(coeffs));
    if (!verify_witness(sys, w))
        throw internal_defect("polynomial_witness_from_solution: constructed witness fails");
    return w;
}

} // namespace impob
