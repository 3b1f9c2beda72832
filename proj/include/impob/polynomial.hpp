#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "impob/errors.hpp"
#include "impob/rational.hpp"

namespace impob {

// Univariate polynomial over Rational, coefficients ascending by power.
// Normal form: no trailing zero coefficients; the zero polynomial stores
// nothing and reports degree -1.
class RationalPolynomial {
public:
    RationalPolynomial() = default;

    explicit RationalPolynomial(Rational constant) {
        if (constant != 0)
            c_.push_back(std::move(constant));
    }

    static RationalPolynomial from_coeffs(RationalVector ascending) {
        RationalPolynomial p;
        p.c_ = std::move(ascending);
        p.trim();
        return p;
    }

    static RationalPolynomial constant(long v) { return RationalPolynomial(Rational(v)); }

    static RationalPolynomial variable() {
        return from_coeffs({Rational(0), Rational(1)});
    }

    // -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    Rational coeff(std::size_t k) const {
        return k < c_.size() ? c_[k] : Rational(0);
    }

    const RationalVector& coeffs() const { return c_; }

    Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

    Rational evaluate(const Rational& x) const {
        Rational acc(0);
        for (std::size_t k = c_.size(); k-- > 0;)
            acc = acc * x + c_[k];
        return acc;
    }

    friend RationalPolynomial operator+(const RationalPolynomial& a, const RationalPolynomial& b) {
        RationalPolynomial out;
        out.c_.resize(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (std::size_t k = 0; k < out.c_.size(); ++k)
            out.c_[k] = a.coeff(k) + b.coeff(k);
        out.trim();
        return out;
    }

    friend RationalPolynomial operator-(const RationalPolynomial& a, const RationalPolynomial& b) {
        RationalPolynomial out;
        out.c_.resize(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (std::size_t k = 0; k < out.c_.size(); ++k)
            out.c_[k] = a.coeff(k) - b.coeff(k);
        out.trim();
        return out;
    }

    friend RationalPolynomial operator-(const RationalPolynomial& a) {
        return RationalPolynomial() - a;
    }

    friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
        if (a.is_zero() || b.is_zero())
            return {};
        RationalPolynomial out;
        out.c_.assign(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0)
                continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                out.c_[i + j] += a.c_[i] * b.c_[j];
        }
        out.trim();
        return out;
    }

    friend RationalPolynomial operator*(const Rational& s, const RationalPolynomial& a) {
        if (s == 0)
            return {};
        RationalPolynomial out = a;
        for (Rational& c : out.c_)
            c *= s;
        return out;
    }

    friend bool operator==(const RationalPolynomial& a, const RationalPolynomial& b) {
        return a.c_ == b.c_;
    }

    // Human-oriented rendering, highest power first: "s^2 - 1/2*s + 3".
    std::string str(std::string_view var = "s") const {
        if (is_zero())
            return "0";
        std::string out;
        for (std::size_t k = c_.size(); k-- > 0;) {
            const Rational& c = c_[k];
            if (c == 0)
                continue;
            const bool first = out.empty();
            const bool neg = c < 0;
            if (!first)
                out += neg ? " - " : " + ";
            else if (neg)
                out += "-";
            Rational mag = neg ? Rational(-c) : c;
            if (k == 0) {
                out += to_string(mag);
            } else {
                if (mag != 1)
                    out += to_string(mag) + "*";
                out += var;
                if (k > 1)
                    out += "^" + std::to_string(k);
            }
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0)
            c_.pop_back();
    }

    RationalVector c_;
};

struct PolyDivision {
    RationalPolynomial quotient;
    RationalPolynomial remainder;
};

// Euclidean division: num = quotient * den + remainder, deg(rem) < deg(den).
inline PolyDivision divmod(const RationalPolynomial& num, const RationalPolynomial& den) {
    if (den.is_zero())
        throw invalid_argument("divmod: division by zero polynomial");
    RationalVector q;
    RationalVector r = num.coeffs();
    const int dd = den.degree();
    const Rational lead = den.leading();
    while (static_cast<int>(r.size()) - 1 >= dd) {
        while (!r.empty() && r.back() == 0)
            r.pop_back();
        if (static_cast<int>(r.size()) - 1 < dd)
            break;
        const std::size_t shift = r.size() - 1 - static_cast<std::size_t>(dd);
        const Rational f = r.back() / lead;
        if (q.size() < shift + 1)
            q.resize(shift + 1, Rational(0));
        q[shift] = f;
        for (int k = 0; k <= dd; ++k)
            r[shift + static_cast<std::size_t>(k)] -= f * den.coeff(static_cast<std::size_t>(k));
    }
    return {RationalPolynomial::from_coeffs(std::move(q)),
            RationalPolynomial::from_coeffs(std::move(r))};
}

// Monic gcd; gcd(0, 0) = 0.
inline RationalPolynomial poly_gcd(RationalPolynomial a, RationalPolynomial b) {
    while (!b.is_zero()) {
        RationalPolynomial r = divmod(a, b).remainder;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero())
        return a;
    return (1 / a.leading()) * a;
}

using PolynomialVector = std::vector<RationalPolynomial>;

inline bool poly_vector_is_zero(const PolynomialVector& v) {
    for (const RationalPolynomial& p : v)
        if (!p.is_zero())
            return false;
    return true;
}

} // namespace impob
