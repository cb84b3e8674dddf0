#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <ostream>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"

namespace lrn {

/// A prime p = 3 (mod 4), the ramified prime of Q(sqrt(-p)).
///
/// Certified primes are the ones for which Q(sqrt(-p)) has class number one
/// and the complete classification applies. Permissive primes are allowed for
/// brute-force exploration only.
class RamifiedPrime {
public:
    static constexpr std::array<unsigned long, 6> kCertified{3, 7, 11, 43, 67, 163};

    static bool is_certified_value(unsigned long p) {
        return std::find(kCertified.begin(), kCertified.end(), p) != kCertified.end();
    }

    static RamifiedPrime certified(unsigned long p) {
        if (!is_certified_value(p)) {
            throw UncertifiedPrimeError("p = " + std::to_string(p) +
                                        " is not one of the certified primes 3, 7, 11, 43, 67, 163");
        }
        return RamifiedPrime(p, true);
    }

    static RamifiedPrime permissive(unsigned long p) {
        if (!is_prime_ul(p) || p % 4 != 3) {
            throw NotRamifiedError("p = " + std::to_string(p) + " is not a prime congruent to 3 mod 4");
        }
        return RamifiedPrime(p, is_certified_value(p));
    }

    unsigned long value() const noexcept { return p_; }
    bool is_certified() const noexcept { return certified_; }

    friend bool operator==(const RamifiedPrime& a, const RamifiedPrime& b) noexcept { return a.p_ == b.p_; }
    friend auto operator<=>(const RamifiedPrime& a, const RamifiedPrime& b) noexcept { return a.p_ <=> b.p_; }

private:
    RamifiedPrime(unsigned long p, bool certified) : p_(p), certified_(certified) {}

    unsigned long p_;
    bool certified_;
};

/// Element (a + b*sqrt(-p))/2 of the ring of integers of Q(sqrt(-p)).
/// Stores the doubled coordinates (a, b); a and b always share parity.
class QuadInt {
public:
    static QuadInt make(const RamifiedPrime& p, Int a, Int b) {
        if (is_odd(a) != is_odd(b)) {
            throw ParityError("(" + to_dec(a) + " + " + to_dec(b) + "*sqrt(-" + std::to_string(p.value()) +
                              "))/2 is not integral: a and b differ in parity");
        }
        return QuadInt(p, std::move(a), std::move(b));
    }

    static QuadInt rational(const RamifiedPrime& p, const Int& n) { return QuadInt(p, 2 * n, 0); }
    static QuadInt one(const RamifiedPrime& p) { return rational(p, 1); }
    static QuadInt zero(const RamifiedPrime& p) { return rational(p, 0); }

    const RamifiedPrime& prime() const noexcept { return p_; }
    const Int& a() const noexcept { return a_; }
    const Int& b() const noexcept { return b_; }
    bool is_rational() const { return b_ == 0; }

    friend bool operator==(const QuadInt& x, const QuadInt& y) {
        return x.p_ == y.p_ && x.a_ == y.a_ && x.b_ == y.b_;
    }

    QuadInt operator-() const { return QuadInt(p_, -a_, -b_); }

    friend QuadInt operator+(const QuadInt& x, const QuadInt& y) {
        same_field(x, y);
        return QuadInt(x.p_, x.a_ + y.a_, x.b_ + y.b_);
    }

    friend QuadInt operator-(const QuadInt& x, const QuadInt& y) {
        same_field(x, y);
        return QuadInt(x.p_, x.a_ - y.a_, x.b_ - y.b_);
    }

    friend QuadInt operator*(const QuadInt& x, const QuadInt& y) {
        same_field(x, y);
        const unsigned long p = x.p_.value();
        Int re = x.a_ * y.a_ - p * (x.b_ * y.b_);
        Int im = x.a_ * y.b_ + y.a_ * x.b_;
        // Both numerators are even because a1 = b1 and a2 = b2 (mod 2), p odd.
        mpz_divexact_ui(re.get_mpz_t(), re.get_mpz_t(), 2);
        mpz_divexact_ui(im.get_mpz_t(), im.get_mpz_t(), 2);
        return QuadInt(x.p_, std::move(re), std::move(im));
    }

    QuadInt& operator*=(const QuadInt& y) { return *this = *this * y; }

    std::string to_string() const {
        const Int mag = abs(b_);
        return "(" + to_dec(a_) + (b_ < 0 ? " - " : " + ") + to_dec(mag) + "*sqrt(-" + std::to_string(p_.value()) +
               "))/2";
    }

    friend std::ostream& operator<<(std::ostream& os, const QuadInt& z) { return os << z.to_string(); }

private:
    QuadInt(const RamifiedPrime& p, Int a, Int b) : p_(p), a_(std::move(a)), b_(std::move(b)) {}

    static void same_field(const QuadInt& x, const QuadInt& y) {
        if (!(x.p_ == y.p_)) {
            throw MixedFieldError("operands live in Q(sqrt(-" + std::to_string(x.p_.value()) + ")) and Q(sqrt(-" +
                                  std::to_string(y.p_.value()) + "))");
        }
    }

    RamifiedPrime p_;
    Int a_;
    Int b_;
};

inline QuadInt qi_make(const RamifiedPrime& p, const Int& a, const Int& b) { return QuadInt::make(p, a, b); }

inline QuadInt qi_mul(const QuadInt& x, const QuadInt& y) { return x * y; }

inline QuadInt qi_conj(const QuadInt& x) { return QuadInt::make(x.prime(), x.a(), -x.b()); }

/// (a^2 + p b^2) / 4.
inline Int qi_norm(const QuadInt& x) {
    Int n = x.a() * x.a() + x.prime().value() * (x.b() * x.b());
    mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), 4);
    return n;
}

inline QuadInt qi_pow(QuadInt base, unsigned long e) {
    QuadInt acc = QuadInt::one(base.prime());
    while (e > 0) {
        if (e & 1u) acc *= base;
        e >>= 1u;
        if (e > 0) base *= base;
    }
    return acc;
}

/// Units of the ring of integers: +-1, +-w, +-w^2 for p = 3, +-1 otherwise.
inline std::vector<QuadInt> qi_units(const RamifiedPrime& p) {
    std::vector<QuadInt> units{QuadInt::make(p, 2, 0), QuadInt::make(p, -2, 0)};
    if (p.value() == 3) {
        // w = (-1 + sqrt(-3))/2, w^2 = (-1 - sqrt(-3))/2
        units.push_back(QuadInt::make(p, -1, 1));
        units.push_back(QuadInt::make(p, 1, -1));
        units.push_back(QuadInt::make(p, -1, -1));
        units.push_back(QuadInt::make(p, 1, 1));
    }
    return units;
}

}  // namespace lrn
