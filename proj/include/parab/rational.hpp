#pragma once

/**
 * @file rational.hpp
 * @brief Exact rational arithmetic helpers on top of GMP's mpq_class.
 *
 * Every number in this project is an exact rational; there are no floats
 * and no tolerances anywhere.  This header adds the small amount of glue
 * the rest of the code needs: canonical "p/q" text form, parsing, and a
 * few combinatorial helpers (factorials, binomials, integer powers).
 */

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace parab {

using Rat = mpq_class;

/// Canonical text form: "p" for integers, "p/q" otherwise (q > 0, reduced).
inline std::string rat_str(const Rat& x) {
    Rat c = x;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

/// Parse "p" or "p/q"; returns std::nullopt on malformed input.
inline std::optional<Rat> rat_parse(const std::string& s) {
    if (s.empty()) return std::nullopt;
    // validate: optional '-', digits, optional '/', digits
    std::size_t i = 0;
    auto digits = [&](std::size_t from) {
        std::size_t j = from;
        while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
        return j;
    };
    if (s[i] == '-' || s[i] == '+') ++i;
    std::size_t j = digits(i);
    if (j == i) return std::nullopt;
    if (j == s.size()) {
        Rat r(s, 10);
        r.canonicalize();
        return r;
    }
    if (s[j] != '/') return std::nullopt;
    std::size_t k = digits(j + 1);
    if (k != s.size() || k == j + 1) return std::nullopt;
    Rat r(s, 10);
    if (r.get_den() == 0) return std::nullopt;
    r.canonicalize();
    return r;
}

inline Rat rat_factorial(unsigned n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rat(f);
}

inline Rat rat_binomial(long n, long k) {
    if (k < 0) return 0;
    // generalized binomial: n may be negative
    Rat acc = 1;
    for (long i = 0; i < k; ++i) acc *= Rat(n - i, k - i);
    acc.canonicalize();
    return acc;
}

inline Rat rat_pow(const Rat& x, unsigned e) {
    Rat acc = 1;
    Rat b = x;
    unsigned n = e;
    while (n) {
        if (n & 1u) acc *= b;
        b *= b;
        n >>= 1u;
    }
    acc.canonicalize();
    return acc;
}

/// floor division for plain machine integers (used by mod-r index juggling).
inline long floor_div(long a, long b) {
    long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
inline long pos_mod(long a, long b) { return a - b * floor_div(a, b); }

}  // namespace parab
