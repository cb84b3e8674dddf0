#pragma once

#include <string>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"
#include "quadint.hpp"

namespace lrn {

/// Lucas pair (alpha, conj(alpha)) with trace P = alpha + conj(alpha) and
/// norm Q = alpha * conj(alpha).
struct LucasPair {
    QuadInt alpha;
    Int trace;
    Int norm;

    /// (alpha - conj(alpha))^2 = P^2 - 4Q = -p b^2.
    Int discriminant() const { return trace * trace - 4 * norm; }
};

struct LucasTerm {
    unsigned long index = 0;
    Int value;
};

namespace detail {

inline bool ratio_is_root_of_unity(const QuadInt& alpha) {
    // alpha / conj(alpha) has modulus one; in a quadratic field a root of
    // unity has order dividing 4 or 6, so k <= 12 suffices.
    const QuadInt beta = qi_conj(alpha);
    QuadInt ak = alpha;
    QuadInt bk = beta;
    for (int k = 1; k <= 12; ++k) {
        if (ak == bk) return true;
        ak *= alpha;
        bk *= beta;
    }
    return false;
}

}  // namespace detail

/// True iff (alpha, conj(alpha)) is a Lucas pair: trace and norm are non-zero
/// coprime integers and alpha/conj(alpha) is not a root of unity.
inline bool lucas_pair_valid(const QuadInt& alpha) {
    if (alpha.is_rational()) {
        throw RationalElementError("alpha = " + alpha.to_string() + " is rational; it has no Lucas sequence");
    }
    const Int& trace = alpha.a();
    const Int norm = qi_norm(alpha);
    if (trace == 0 || norm == 0) return false;
    if (gcd(trace, norm) != 1) return false;
    return !detail::ratio_is_root_of_unity(alpha);
}

inline LucasPair make_lucas_pair(const QuadInt& alpha) {
    if (!lucas_pair_valid(alpha)) {
        throw InvalidLucasPairError(alpha.to_string() + " does not generate a Lucas pair");
    }
    return LucasPair{alpha, alpha.a(), qi_norm(alpha)};
}

/// u_0 .. u_n by u_m = P u_{m-1} - Q u_{m-2}.
inline std::vector<Int> lucas_terms(const LucasPair& pair, unsigned long n) {
    std::vector<Int> u(n + 1);
    u[0] = 0;
    if (n >= 1) u[1] = 1;
    for (unsigned long m = 2; m <= n; ++m) u[m] = pair.trace * u[m - 1] - pair.norm * u[m - 2];
    return u;
}

inline LucasTerm lucas_term(const LucasPair& pair, unsigned long n) {
    return LucasTerm{n, lucas_terms(pair, n).back()};
}

/// Companion sequence v_n = alpha^n + conj(alpha)^n, v_0 = 2, v_1 = P.
inline Int companion_term(const LucasPair& pair, unsigned long n) {
    Int prev = 2;
    Int cur = pair.trace;
    if (n == 0) return prev;
    for (unsigned long m = 2; m <= n; ++m) {
        Int next = pair.trace * cur - pair.norm * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

/// Trial division up to this bound before a probable-prime test on the cofactor.
inline constexpr unsigned long kTrialDivisionBound = 1'000'000;

struct Factorization {
    std::vector<Int> primes;  // distinct, ascending
    Int unresolved = 1;       // composite cofactor left unfactored, 1 if none
    bool complete() const { return unresolved == 1; }
};

inline Factorization factor_distinct(Int v) {
    Factorization f;
    v = abs(v);
    if (v <= 1) return f;
    for (unsigned long d = 2; d <= kTrialDivisionBound; d += (d == 2 ? 1 : 2)) {
        if (Int(d) * d > v) break;
        if (mpz_divisible_ui_p(v.get_mpz_t(), d)) {
            f.primes.emplace_back(d);
            while (mpz_divisible_ui_p(v.get_mpz_t(), d)) mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), d);
        }
    }
    if (v > 1) {
        if (mpz_probab_prime_p(v.get_mpz_t(), 40) > 0) {
            f.primes.push_back(v);
        } else {
            f.unresolved = v;
        }
    }
    return f;
}

struct PrimitiveDivisorReport {
    std::vector<Int> primitive;  // primitive prime divisors of u_n
    bool factorization_incomplete = false;
    Int unresolved = 1;
};

/// Primes dividing u_n but not (alpha - conj alpha)^2 * u_2 * ... * u_{n-1}.
inline PrimitiveDivisorReport primitive_divisor_check(const LucasPair& pair, unsigned long n) {
    if (n < 2) throw UnsupportedIndexError("primitive divisors are defined for n >= 2");
    const auto u = lucas_terms(pair, n);
    const auto fac = factor_distinct(u[n]);
    PrimitiveDivisorReport report;
    report.factorization_incomplete = !fac.complete();
    report.unresolved = fac.unresolved;
    const Int disc = pair.discriminant();
    for (const Int& ell : fac.primes) {
        bool earlier = divides(ell, disc);
        for (unsigned long m = 2; m < n && !earlier; ++m) earlier = divides(ell, u[m]);
        if (!earlier) report.primitive.push_back(ell);
    }
    return report;
}

enum class ExceptionMode { OddExponent, DoubledIndex };

/// A Lucas pair ((a + b sqrt(-p))/2) whose term of index q (odd-exponent
/// mode) or 2q (doubled-index mode) has no primitive divisor.
struct DefectEntry {
    unsigned long q = 0;
    long a = 0;
    long b = 0;
    unsigned long p = 0;
    ExceptionMode mode = ExceptionMode::OddExponent;
    std::string label;

    unsigned long checked_index() const { return mode == ExceptionMode::OddExponent ? q : 2 * q; }
    friend bool operator==(const DefectEntry&, const DefectEntry&) = default;
};

struct RejectedEntry {
    DefectEntry entry;
    std::string reason;
};

/// The defect table restricted to the certified primes, validated once on first use.
struct ExceptionTable {
    std::vector<DefectEntry> accepted;
    std::vector<RejectedEntry> rejected;
};

inline std::vector<DefectEntry> raw_defect_entries() {
    using M = ExceptionMode;
    return {
        {5, 1, 1, 7, M::OddExponent, "odd/q=5/(1+sqrt(-7))/2"},
        {5, 1, 1, 11, M::OddExponent, "odd/q=5/(1+sqrt(-11))/2"},
        {7, 1, 1, 7, M::OddExponent, "odd/q=7/(1+sqrt(-7))/2"},
        {13, 1, 1, 7, M::OddExponent, "odd/q=13/(1+sqrt(-7))/2"},
        {4, 1, 1, 7, M::DoubledIndex, "doubled/n=4/(1+sqrt(-7))/2"},
        {5, 1, 1, 11, M::DoubledIndex, "doubled/n=5/(1+sqrt(-11))/2"},
        {5, 5, 1, 3, M::DoubledIndex, "doubled/n=5/(5+sqrt(-3))/2"},
    };
}

inline std::string validate_defect_entry(const DefectEntry& e) {
    const auto p = RamifiedPrime::permissive(e.p);
    const QuadInt alpha = QuadInt::make(p, e.a, e.b);
    if (!lucas_pair_valid(alpha)) return "not a Lucas pair";
    const auto pair = make_lucas_pair(alpha);
    const auto idx = e.checked_index();
    const auto report = primitive_divisor_check(pair, idx);
    if (report.factorization_incomplete) return "factorization of u_" + std::to_string(idx) + " incomplete";
    if (!report.primitive.empty()) {
        std::string s = "u_" + std::to_string(idx) + " = " + to_dec(lucas_term(pair, idx).value) +
                        " has primitive divisor(s):";
        for (const auto& ell : report.primitive) s += " " + to_dec(ell);
        return s;
    }
    return {};
}

inline ExceptionTable build_exception_table() {
    ExceptionTable table;
    for (const auto& e : raw_defect_entries()) {
        auto reason = validate_defect_entry(e);
        if (reason.empty()) {
            table.accepted.push_back(e);
        } else {
            table.rejected.push_back({e, std::move(reason)});
        }
    }
    return table;
}

inline const ExceptionTable& exception_table() {
    static const ExceptionTable table = build_exception_table();
    return table;
}

/// How an exception lookup is backed.
enum class ExceptionCoverage {
    Tabulated,      // entries listed explicitly
    ParametricQ3,   // q = 3: infinitely many defective pairs, handled by direct descent
    TheoremEmpty,   // q > 13 prime: no defective Lucas pairs (primitive-divisor theorem)
};

struct ExceptionLookup {
    std::vector<DefectEntry> entries;
    ExceptionCoverage coverage = ExceptionCoverage::Tabulated;
};

inline ExceptionLookup bhv_exceptions(unsigned long q, ExceptionMode mode) {
    if (q < 2) throw UnsupportedIndexError("exception lookup needs an index q >= 2");
    ExceptionLookup out;
    if (mode == ExceptionMode::OddExponent) {
        if (q == 3) {
            out.coverage = ExceptionCoverage::ParametricQ3;
            return out;
        }
        if (q > 13) {
            out.coverage = ExceptionCoverage::TheoremEmpty;
            return out;
        }
    }
    for (const auto& e : exception_table().accepted) {
        if (e.mode == mode && e.q == q) out.entries.push_back(e);
    }
    return out;
}

}  // namespace lrn
