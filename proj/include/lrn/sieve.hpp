#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "quadint.hpp"

namespace lrn {

/// The equation shape a congruence rule reads modulo its modulus.
enum class EquationForm {
    MinusFour,  // -4 = 3a^2 - p^(2k+1)
    PlusFour,   //  4 = 3a^2 - p^(2k+1)
    EvenSplit,  // y^t = (p^(2k+1) + 1)/4 with t even, i.e. the right side is a square
    UnitCube,   // Im(u * (a + b sqrt(-3))^3) = 8 * 3^k, u in {+-w, +-w^2}, k >= 1
};

inline const char* to_string(EquationForm f) {
    switch (f) {
        case EquationForm::MinusFour: return "minus-four";
        case EquationForm::PlusFour: return "plus-four";
        case EquationForm::EvenSplit: return "even-split";
        case EquationForm::UnitCube: return "unit-cube";
    }
    return "?";
}

/// A modular obstruction. The rule is data: read the equation modulo
/// `modulus`, reduce to "square = target (mod reduced_modulus)" and observe
/// that target is not a quadratic residue.
struct CongruenceRule {
    std::string id;
    std::vector<unsigned long> primes;
    EquationForm form;
    unsigned long modulus;
    unsigned long reduced_modulus;
    unsigned long target;
    std::string statement;

    bool applies_to(unsigned long p) const { return std::find(primes.begin(), primes.end(), p) != primes.end(); }
};

inline std::set<unsigned long> quadratic_residues(unsigned long m) {
    if (m < 2) throw ScopeError("quadratic_residues needs m >= 2");
    std::set<unsigned long> r;
    for (unsigned long x = 0; x < m; ++x) r.insert((x * x) % m);
    return r;
}

inline const std::vector<CongruenceRule>& congruence_rules() {
    static const std::vector<CongruenceRule> rules{
        {"R163", {163}, EquationForm::MinusFour, 9, 3, 2, "-4 = 3a^2 - 163^(2k+1) (mod 9)  =>  a^2 = 2 (mod 3)"},
        {"R67", {67}, EquationForm::MinusFour, 11, 11, 10, "-4 = 3a^2 - 67^(2k+1) (mod 11)  =>  a^2 = 10 (mod 11)"},
        {"R43", {43}, EquationForm::MinusFour, 11, 11, 2, "-4 = 3a^2 - 43^(2k+1) (mod 11)  =>  a^2 = 2 (mod 11)"},
        {"R11", {11}, EquationForm::PlusFour, 8, 8, 5, "4 = 3a^2 - 11^(2k+1) (mod 8)  =>  a^2 = 5 (mod 8)"},
        {"R3E", {7, 43, 67, 163}, EquationForm::EvenSplit, 3, 3, 2,
         "y^t = (p^(2k+1) + 1)/4 = 2 (mod 3), p = 1 (mod 3)  =>  t odd"},
        {"R5E", {11}, EquationForm::EvenSplit, 5, 5, 3, "y^t = (11^(2k+1) + 1)/4 = 3 (mod 5)  =>  t odd"},
        {"R3U", {3}, EquationForm::UnitCube, 3, 3, 0,
         "Im(u (a + b sqrt(-3))^3) = 0 (mod 3), u != +-1  =>  3 | a  =>  3 | y, contradicting gcd(3, x) = 1"},
    };
    return rules;
}

inline const CongruenceRule* find_rule(const std::string& id) {
    for (const auto& r : congruence_rules()) {
        if (r.id == id) return &r;
    }
    return nullptr;
}

inline const CongruenceRule& rule_by_id(const std::string& id) {
    if (const auto* r = find_rule(id)) return *r;
    throw RuleScopeError("unknown congruence rule '" + id + "'");
}

namespace detail {

inline unsigned long powmod(unsigned long b, unsigned long e, unsigned long m) {
    unsigned long r = 1 % m;
    b %= m;
    while (e > 0) {
        if (e & 1u) r = r * b % m;
        b = b * b % m;
        e >>= 1u;
    }
    return r;
}

inline std::optional<unsigned long> inverse_mod(unsigned long v, unsigned long m) {
    for (unsigned long x = 1; x < m; ++x) {
        if ((v % m) * x % m == 1) return x;
    }
    return std::nullopt;
}

// Smallest period of k -> p^(2k+1) mod m (p coprime to m).
inline unsigned long exponent_period(unsigned long p, unsigned long m) {
    const unsigned long sq = p % m * (p % m) % m;
    unsigned long v = sq;
    for (unsigned long t = 1; t <= m; ++t) {
        if (v == 1 % m) return t;
        v = v * sq % m;
    }
    return m;
}

// 2 * Im(u * (a + b sqrt(-3))^3) for a unit with doubled coordinates (c, d).
inline long unit_cube_imag(long c, long d, long a, long b) {
    const long A = a * a * a - 9 * a * b * b;
    const long B = 3 * a * a * b - 3 * b * b * b;
    return c * B + d * A;
}

inline long mod_floor(long v, long m) { return ((v % m) + m) % m; }

}  // namespace detail

/// Residue the reduced square must hit for this k, or nullopt when the
/// reading modulo `modulus` is already contradictory before reduction.
inline std::optional<unsigned long> rule_target(const CongruenceRule& rule, unsigned long p, unsigned long k) {
    const unsigned long M = rule.modulus;
    const unsigned long pk = detail::powmod(p, 2 * k + 1, M);
    switch (rule.form) {
        case EquationForm::MinusFour:
        case EquationForm::PlusFour: {
            // 3a^2 = p^(2k+1) + 4 * sign
            const long sgn = rule.form == EquationForm::PlusFour ? 1 : -1;
            const unsigned long c = static_cast<unsigned long>(detail::mod_floor(static_cast<long>(pk) + 4 * sgn,
                                                                                 static_cast<long>(M)));
            if (M % 3 == 0) {
                if (c % 3 != 0) return std::nullopt;
                return (c / 3) % rule.reduced_modulus;
            }
            const auto inv3 = detail::inverse_mod(3, M);
            return c * *inv3 % M;
        }
        case EquationForm::EvenSplit: {
            const auto inv4 = detail::inverse_mod(4, M);
            return (pk + 1) % M * *inv4 % M;
        }
        case EquationForm::UnitCube:
            return 0;
    }
    return std::nullopt;
}

/// True iff the rule shows the equation of `form` has no solution for this
/// (p, k), using the stored reduction and the quadratic-residue set.
inline bool rule_eliminates(const CongruenceRule& rule, const RamifiedPrime& p, unsigned long k, EquationForm form) {
    if (!rule.applies_to(p.value()) || rule.form != form) {
        throw RuleScopeError("rule " + rule.id + " does not apply to p = " + std::to_string(p.value()) + ", form " +
                             to_string(form));
    }
    if (rule.form == EquationForm::UnitCube) {
        if (k == 0) return false;
        // For every non-real unit: Im = 0 (mod 3) forces a = 0 (mod 3).
        for (const auto& u : qi_units(p)) {
            if (u.is_rational()) continue;
            const long c = u.a().get_si();
            const long d = u.b().get_si();
            for (long a = 0; a < 3; ++a) {
                for (long b = 0; b < 3; ++b) {
                    if (detail::mod_floor(detail::unit_cube_imag(c, d, a, b), 3) == 0 && a % 3 != 0) return false;
                }
            }
        }
        return true;
    }
    const auto target = rule_target(rule, p.value(), k);
    if (!target) return true;
    return quadratic_residues(rule.reduced_modulus).count(*target) == 0;
}

inline bool rule_eliminates(const CongruenceRule& rule, const RamifiedPrime& p, unsigned long k) {
    return rule_eliminates(rule, p, k, rule.form);
}

/// Independent check by full residue enumeration: every a (and b) modulo the
/// rule's modulus, every k over a full period of p^(2k+1). True iff no residue
/// combination satisfies the unreduced equation.
inline bool rule_validates_by_enumeration(const CongruenceRule& rule) {
    const long M = static_cast<long>(rule.modulus);
    for (const unsigned long p : rule.primes) {
        if (rule.form == EquationForm::UnitCube) {
            // 8 * 3^k = 0 (mod 3) for k >= 1; 4y = a^2 + 3b^2 must stay prime to 3.
            const auto prime = RamifiedPrime::permissive(p);
            for (const auto& u : qi_units(prime)) {
                if (u.is_rational()) continue;
                for (long a = 0; a < M; ++a) {
                    for (long b = 0; b < M; ++b) {
                        const bool eq = detail::mod_floor(detail::unit_cube_imag(u.a().get_si(), u.b().get_si(), a, b), M) == 0;
                        const bool norm_prime_to_3 = detail::mod_floor(a * a + 3 * b * b, 3) != 0;
                        if (eq && norm_prime_to_3) return false;
                    }
                }
            }
            continue;
        }
        const unsigned long period = detail::exponent_period(p, rule.modulus);
        for (unsigned long k = 0; k < period; ++k) {
            const long pk = static_cast<long>(detail::powmod(p, 2 * k + 1, rule.modulus));
            for (long a = 0; a < M; ++a) {
                long lhs = 0;
                long rhs = 0;
                switch (rule.form) {
                    case EquationForm::MinusFour:
                        lhs = -4;
                        rhs = 3 * a * a - pk;
                        break;
                    case EquationForm::PlusFour:
                        lhs = 4;
                        rhs = 3 * a * a - pk;
                        break;
                    case EquationForm::EvenSplit:
                        // 4 w^2 = p^(2k+1) + 1 with w = y^(t/2)
                        lhs = 4 * a * a;
                        rhs = pk + 1;
                        break;
                    case EquationForm::UnitCube:
                        break;
                }
                if (detail::mod_floor(lhs - rhs, M) == 0) return false;
            }
        }
    }
    return true;
}

enum class Sign { Plus, Minus };

inline const char* to_string(Sign s) { return s == Sign::Plus ? "plus" : "minus"; }

/// Which sign of +-4 = 3a^2 - p^(2k+1) survives reduction modulo 3.
inline Sign sign_selection(const RamifiedPrime& p) {
    if (p.value() == 3) throw ScopeError("sign selection modulo 3 is undefined for p = 3");
    bool survives[2] = {false, false};  // plus, minus
    for (int s = 0; s < 2; ++s) {
        const long lhs = s == 0 ? 4 : -4;
        for (unsigned long k = 0; k < 2; ++k) {
            const long pk = static_cast<long>(detail::powmod(p.value(), 2 * k + 1, 3));
            for (long a = 0; a < 3; ++a) {
                if (detail::mod_floor(lhs - (3 * a * a - pk), 3) == 0) survives[s] = true;
            }
        }
    }
    if (survives[0] == survives[1]) throw ScopeError("mod 3 does not select a unique sign");
    return survives[0] ? Sign::Plus : Sign::Minus;
}

}  // namespace lrn
