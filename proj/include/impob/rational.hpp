#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "impob/errors.hpp"

namespace impob {

// Exact rational scalar. GMP keeps values canonical (den > 0, gcd(num,den)=1)
// under arithmetic; only string construction needs an explicit canonicalize.
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

inline Rational rational(long num, long den = 1) {
    if (den == 0)
        throw invalid_argument("rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "123", "-7", "3/4", "-3/4". Sign on the numerator only.
inline Rational rational_from_string(std::string_view s) {
    const auto fail = [&] {
        throw parse_error("not a rational literal: \"" + std::string(s) + "\"");
    };
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+'))
        ++i;
    std::size_t digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        ++i;
        ++digits;
    }
    if (digits == 0)
        fail();
    if (i != s.size()) {
        if (s[i] != '/')
            fail();
        ++i;
        std::size_t den_digits = 0;
        bool den_nonzero = false;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            if (s[i] != '0')
                den_nonzero = true;
            ++i;
            ++den_digits;
        }
        if (den_digits == 0 || i != s.size())
            fail();
        if (!den_nonzero)
            throw parse_error("zero denominator in \"" + std::string(s) + "\"");
    }
    // mpq_set_str has no use for an explicit plus sign.
    if (s.front() == '+')
        s.remove_prefix(1);
    Rational q(std::string(s), 10);
    q.canonicalize();
    return q;
}

// "p/q", or just "p" when the denominator is 1.
inline std::string to_string(const Rational& q) {
    return q.get_str();
}

inline bool vector_is_zero(const RationalVector& v) {
    for (const Rational& x : v)
        if (x != 0)
            return false;
    return true;
}

} // namespace impob
