#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

#include "errors.hpp"

namespace lrn {

using Int = mpz_class;

inline Int pow(const Int& base, unsigned long exp) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

inline Int pow(unsigned long base, unsigned long exp) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

inline std::string to_dec(const Int& v) { return v.get_str(10); }

inline Int from_dec(std::string_view s) {
    Int r;
    std::string tmp(s);
    if (tmp.empty() || r.set_str(tmp, 10) != 0) {
        throw FormatError("not a decimal integer: '" + tmp + "'");
    }
    return r;
}

inline int sign(const Int& v) { return sgn(v); }

inline bool fits_long(const Int& v) { return v.fits_slong_p(); }

inline long to_long(const Int& v) {
    if (!v.fits_slong_p()) throw FormatError("integer does not fit in 64 bits: " + to_dec(v));
    return v.get_si();
}

// Exact n-th root of v (v >= 0), if one exists.
inline std::optional<Int> exact_root(const Int& v, unsigned long n) {
    if (v < 0) return std::nullopt;
    Int r;
    if (mpz_root(r.get_mpz_t(), v.get_mpz_t(), n) != 0) return r;
    return std::nullopt;
}

/// Writes y = root^exponent with root not itself a perfect power.
/// y = 1 is reported as (1, 1).
struct PowerBase {
    Int root;
    unsigned long exponent = 1;
};

inline PowerBase power_base(const Int& y) {
    if (y <= 1) return {y, 1};
    const auto bits = mpz_sizeinbase(y.get_mpz_t(), 2);
    for (unsigned long e = bits; e >= 2; --e) {
        if (auto r = exact_root(y, e)) return {*r, e};
    }
    return {y, 1};
}

/// p-adic valuation: returns (v, u) with value = p^v * u and p not dividing u.
inline std::pair<unsigned long, Int> remove_factor(const Int& value, unsigned long p) {
    if (value == 0) return {0, value};
    Int u;
    Int pp = p;
    const auto v = mpz_remove(u.get_mpz_t(), value.get_mpz_t(), pp.get_mpz_t());
    return {v, u};
}

inline Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline bool is_odd(const Int& v) { return mpz_odd_p(v.get_mpz_t()) != 0; }

inline bool divides(const Int& d, const Int& v) {
    return d != 0 && mpz_divisible_p(v.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline bool is_prime_ul(unsigned long n) {
    if (n < 2) return false;
    for (unsigned long d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

inline unsigned long smallest_prime_factor(unsigned long n) {
    for (unsigned long d = 2; d * d <= n; ++d) {
        if (n % d == 0) return d;
    }
    return n;
}

}  // namespace lrn
