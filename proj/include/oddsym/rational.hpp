#pragma once

/**
 * @file rational.hpp
 * @brief Exact rational scalars (GMP) and a few helpers around them.
 */

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "oddsym/errors.hpp"

namespace oddsym {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Renders as `p` or `p/q`.
inline std::string to_string(const Rational& r) {
    return r.get_str();
}

inline Rational parse_rational(const std::string& text) {
    Rational r;
    if (text.empty() || r.set_str(text, 10) != 0) {
        throw ParseError("not a rational number: '" + text + "'");
    }
    if (r.get_den() == 0) throw ParseError("zero denominator in '" + text + "'");
    r.canonicalize();
    return r;
}

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

inline Rational factorial(unsigned n) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

/// n!/(n-k)!
inline Rational falling_factorial(unsigned n, unsigned k) {
    Integer f = 1;
    for (unsigned i = 0; i < k; ++i) f *= (n - i);
    return Rational(f);
}

inline Rational binomial(unsigned n, unsigned k) {
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Rational(b);
}

inline Rational ipow(const Rational& base, unsigned e) {
    Rational r = 1;
    for (unsigned i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace oddsym
