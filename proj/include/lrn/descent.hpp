#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"
#include "lucas.hpp"
#include "poly.hpp"
#include "quadint.hpp"
#include "sieve.hpp"
#include "solution.hpp"

namespace lrn {

/// Largest exponent handled by computation; beyond it emptiness for y >= 2
/// comes from the primitive-divisor theorem.
inline constexpr unsigned long kLargestDefectiveExponent = 13;

/// Imaginary-part equation of (x + p^k sqrt(-p))/2 = u ((a + b sqrt(-p))/2)^q
/// for fixed b and unit u = (c + d sqrt(-p))/2. With
/// (a + b sqrt(-p))^q = A + B sqrt(-p) it reads c B + d A = 2^q p^k; `poly`
/// is that difference as a polynomial in a, halved when u is rational.
struct ImagPartEquation {
    RamifiedPrime p;
    unsigned long q;
    unsigned long k;
    Int b;
    QuadInt unit;
    IntPoly poly;
};

namespace detail {

inline Int binomial(unsigned long n, unsigned long k) {
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// (a + b sqrt(-p))^q = A + B sqrt(-p) with a the variable and b fixed.
inline std::pair<IntPoly, IntPoly> binomial_parts_in_a(unsigned long p, unsigned long q, const Int& b) {
    std::vector<Int> A(q + 1, Int(0));
    std::vector<Int> B(q + 1, Int(0));
    const Int mp = -Int(p);
    for (unsigned long j = 0; j <= q; ++j) {
        const Int term = binomial(q, j) * pow(b, j) * pow(mp, j / 2);
        if (j % 2 == 0) {
            A[q - j] = term;
        } else {
            B[q - j] = term;
        }
    }
    return {IntPoly(std::move(A)), IntPoly(std::move(B))};
}

// Same expansion with a fixed and b the variable.
inline std::pair<IntPoly, IntPoly> binomial_parts_in_b(unsigned long p, unsigned long q, const Int& a) {
    std::vector<Int> A(q + 1, Int(0));
    std::vector<Int> B(q + 1, Int(0));
    const Int mp = -Int(p);
    for (unsigned long j = 0; j <= q; ++j) {
        const Int term = binomial(q, j) * pow(a, q - j) * pow(mp, j / 2);
        if (j % 2 == 0) {
            A[j] = term;
        } else {
            B[j] = term;
        }
    }
    return {IntPoly(std::move(A)), IntPoly(std::move(B))};
}

inline void require_odd_prime(unsigned long q) {
    if (q < 3 || !is_prime_ul(q)) throw UnsupportedIndexError("exponent q = " + std::to_string(q) + " is not an odd prime");
}

}  // namespace detail

inline ImagPartEquation imag_part_equation(const RamifiedPrime& p, unsigned long q, unsigned long k, const Int& b,
                                           const QuadInt& unit) {
    detail::require_odd_prime(q);
    const auto [A, B] = detail::binomial_parts_in_a(p.value(), q, b);
    IntPoly f = unit.a() * B + unit.b() * A + IntPoly({-(pow(2, q) * pow(p.value(), k))});
    if (unit.is_rational()) {
        std::vector<Int> c = f.coeffs();
        for (auto& v : c) mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), 2);
        f = IntPoly(std::move(c));
    }
    return ImagPartEquation{p, q, k, b, unit, std::move(f)};
}

/// Integer roots a of the equation with a = b (mod 2), ascending.
inline std::vector<Int> imag_roots(const ImagPartEquation& eq) {
    std::vector<Int> out;
    for (auto& a : integer_roots(eq.poly)) {
        if (is_odd(a) == is_odd(eq.b)) out.push_back(std::move(a));
    }
    return out;
}

/// Real part x = (a^3 - 3pab^2)/4 of ((a + b sqrt(-p))/2)^3.
inline Int q3_real_part(unsigned long p, const Int& a, const Int& b) {
    Int v = a * a * a - 3 * Int(p) * a * b * b;
    mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), 4);
    return v;
}

/// Integral points of a Mordell curve Y^2 = X^3 + c, used where a unit
/// branch has no divisibility bound.
struct MordellCurve {
    std::string id;
    long c;
    std::vector<std::pair<long, long>> points;  // (X, Y) with Y >= 0
};

/// x^2 + 3 = 4y^3 maps to Y^2 = X^3 - 48 via (X, Y) = (4y, 4x).
inline const MordellCurve& mordell_q3_k0() {
    static const MordellCurve curve{"mordell:Y^2=X^3-48", -48, {{4, 4}, {28, 148}}};
    return curve;
}

/// 3Z^2 + 1 = 4W^3 maps to Y^2 = X^3 - 432 via (X, Y) = (12W, 36Z).
inline const MordellCurve& mordell_p3_real() {
    static const MordellCurve curve{"mordell:Y^2=X^3-432", -432, {{12, 36}}};
    return curve;
}

inline constexpr const char* kPrimitiveDivisorTheorem = "primitive-divisor:q>13";
inline constexpr const char* kSignModThree = "sign-mod-3";

enum class BranchBasis {
    ExactRoots,         // polynomial roots found exactly, complete by divisibility
    SignModThree,       // the +-4 sign is impossible modulo 3
    CongruenceRule,     // a sieve rule eliminates the branch
    UnitRule,           // R3U removes the non-real p = 3 units for k >= 1
    Mordell,            // complete by the integral points of a Mordell curve
    PrimitiveDivisor,   // q > 13, no defective Lucas pair
    TrivialNorm,        // y = 1 forces x^2 = 4 - p^(2k+1)
};

inline const char* to_string(BranchBasis b) {
    switch (b) {
        case BranchBasis::ExactRoots: return "exact-roots";
        case BranchBasis::SignModThree: return "sign-mod-3";
        case BranchBasis::CongruenceRule: return "congruence-rule";
        case BranchBasis::UnitRule: return "unit-rule";
        case BranchBasis::Mordell: return "mordell-curve";
        case BranchBasis::PrimitiveDivisor: return "primitive-divisor-theorem";
        case BranchBasis::TrivialNorm: return "trivial-norm";
    }
    return "?";
}

struct DescentBranch {
    std::optional<QuadInt> unit;
    std::optional<Int> b;   // fixed coordinate (b for the imaginary part, a for the real part)
    BranchBasis basis = BranchBasis::ExactRoots;
    std::string citation;   // rule id or theorem id, empty for exact roots
    std::vector<Int> roots;
    std::vector<Solution> solutions;
};

struct Witness {
    Solution solution;
    QuadInt alpha;
    QuadInt unit;
};

struct DescentResult {
    unsigned long p = 0;
    unsigned long k = 0;
    unsigned long q = 0;
    std::vector<Solution> solutions;
    std::vector<Witness> witnesses;
    std::vector<DescentBranch> branches;
};

struct DescentOptions {
    bool all_units = false;            // also run u = -1 for p != 3
    bool compute_beyond_bhv = false;   // run the descent for q > 13 instead of citing the theorem
};

namespace detail {

inline std::optional<Solution> trivial_norm_solution(unsigned long p, unsigned long k, unsigned long n) {
    if (p == 3 && k == 0) return Solution{3, 1, 1, 0, n};
    return std::nullopt;
}

// Classifies a q = 3 branch with rational unit u and |b| = p^k, where the
// equation is 3a^2 - p^(2k+1) = +-4 with the sign of u*b.
inline void annotate_q3_top(DescentBranch& br, const RamifiedPrime& p, unsigned long k) {
    const EquationForm form = sgn(*br.b) * sgn(br.unit->a()) > 0 ? EquationForm::PlusFour : EquationForm::MinusFour;
    const Sign surviving = sign_selection(p);
    if ((form == EquationForm::PlusFour) != (surviving == Sign::Plus)) {
        br.basis = BranchBasis::SignModThree;
        br.citation = kSignModThree;
        return;
    }
    for (const auto& rule : congruence_rules()) {
        if (rule.applies_to(p.value()) && rule.form == form && rule_eliminates(rule, p, k, form)) {
            br.basis = BranchBasis::CongruenceRule;
            br.citation = rule.id;
            return;
        }
    }
}

inline void run_imag_branch(DescentResult& res, const RamifiedPrime& p, const QuadInt& unit, const Int& b,
                            DescentBranch& br) {
    const auto eq = imag_part_equation(p, res.q, res.k, b, unit);
    br.roots = imag_roots(eq);
    const Int pk = pow(p.value(), res.k);
    for (const auto& a : br.roots) {
        const QuadInt alpha = QuadInt::make(p, a, b);
        const QuadInt v = unit * qi_pow(alpha, res.q);
        if (v.b() != pk) throw std::logic_error("descent root does not reproduce p^k: " + v.to_string());
        Solution s{p.value(), abs(v.a()), qi_norm(alpha), res.k, res.q};
        if (s.x == 0 || !verify_solution(s) || divides(Int(p.value()), s.x)) continue;
        br.solutions.push_back(s);
        res.witnesses.push_back({s, alpha, unit});
    }
}

}  // namespace detail

/// Primitive solutions (gcd(p, x) = 1) of x^2 + p^(2k+1) = 4y^q for an odd
/// prime q, with a record of how each branch was settled. y = 1 is included.
inline DescentResult solve_fixed_exponent(const RamifiedPrime& p, unsigned long k, unsigned long q,
                                          const DescentOptions& opt = {}) {
    detail::require_odd_prime(q);
    DescentResult res{p.value(), k, q, {}, {}, {}};

    if (q > kLargestDefectiveExponent && !opt.compute_beyond_bhv) {
        DescentBranch br;
        br.basis = BranchBasis::PrimitiveDivisor;
        br.citation = kPrimitiveDivisorTheorem;
        res.branches.push_back(br);
        if (auto s = detail::trivial_norm_solution(p.value(), k, q)) {
            DescentBranch triv;
            triv.basis = BranchBasis::TrivialNorm;
            triv.solutions.push_back(*s);
            res.branches.push_back(triv);
            res.solutions.push_back(*s);
        }
        return res;
    }

    for (const auto& unit : qi_units(p)) {
        if (unit.is_rational()) {
            if (unit.a() < 0 && !opt.all_units) continue;
            for (unsigned long t = 0; t <= k; ++t) {
                for (const int sgn : {1, -1}) {
                    DescentBranch br;
                    br.unit = unit;
                    br.b = sgn * pow(p.value(), t);
                    detail::run_imag_branch(res, p, unit, *br.b, br);
                    if (q == 3 && t == k && p.value() != 3) detail::annotate_q3_top(br, p, k);
                    if (br.basis != BranchBasis::ExactRoots && !br.solutions.empty()) {
                        throw std::logic_error("branch eliminated by " + br.citation + " has solutions");
                    }
                    res.branches.push_back(std::move(br));
                }
            }
            continue;
        }
        // Non-real units exist only for p = 3; for q prime to 6 they are q-th
        // powers and get absorbed into alpha.
        if (q != 3) continue;
        DescentBranch br;
        br.unit = unit;
        if (k >= 1) {
            const auto& rule = rule_by_id("R3U");
            if (!rule_eliminates(rule, p, k)) throw std::logic_error("R3U failed to eliminate a unit branch");
            br.basis = BranchBasis::UnitRule;
            br.citation = rule.id;
            res.branches.push_back(std::move(br));
            continue;
        }
        // k = 0: the curve's integral points bound everything; b = +-1 is
        // where they sit.
        br.basis = BranchBasis::Mordell;
        br.citation = mordell_q3_k0().id;
        for (const int sgn : {1, -1}) {
            DescentBranch sub = br;
            sub.b = Int(sgn);
            detail::run_imag_branch(res, p, unit, *sub.b, sub);
            res.branches.push_back(std::move(sub));
        }
    }

    for (const auto& br : res.branches) {
        res.solutions.insert(res.solutions.end(), br.solutions.begin(), br.solutions.end());
    }
    normalize(res.solutions);

    if (p.value() == 3 && q == 3 && k == 0) {
        std::vector<Solution> expected;
        for (const auto& [X, Y] : mordell_q3_k0().points) expected.push_back({3, Int(Y / 4), Int(X / 4), 0, 3});
        normalize(expected);
        if (expected != res.solutions) throw std::logic_error("descent disagrees with the integral points of Y^2 = X^3 - 48");
    }
    return res;
}

/// Solutions of x^2 + p = 4y^3 with y >= 2.
inline std::vector<Solution> solve_q3_k0(const RamifiedPrime& p) {
    std::vector<Solution> out;
    for (const auto& s : solve_fixed_exponent(p, 0, 3).solutions) {
        if (s.y >= 2) out.push_back(s);
    }
    return out;
}

/// All (a, k) with a >= 0, k <= bound_k and 3a^2 + 4 = p^(2k+1). Only p = 7
/// is in scope; the expected answer is the single pair (1, 0).
inline std::vector<std::pair<Int, unsigned long>> bs01_uniqueness_check(const RamifiedPrime& p, unsigned long bound_k) {
    if (p.value() != 7) throw ScopeError("3a^2 + 4 = p^(2k+1) is checked for p = 7 only");
    std::vector<std::pair<Int, unsigned long>> out;
    for (unsigned long k = 0; k <= bound_k; ++k) {
        Int r = pow(7, 2 * k + 1) - 4;
        if (!mpz_divisible_ui_p(r.get_mpz_t(), 3)) continue;
        mpz_divexact_ui(r.get_mpz_t(), r.get_mpz_t(), 3);
        if (auto a = exact_root(r, 2)) out.emplace_back(*a, k);
    }
    return out;
}

/// Solutions (Z, W), Z >= 1, of pZ^2 + 1 = 4W^q for an odd prime q.
struct RealPartResult {
    unsigned long p = 0;
    unsigned long q = 0;
    std::vector<std::pair<Int, Int>> solutions;   // sorted by (W, Z)
    std::vector<DescentBranch> branches;
};

/// (1 + Z sqrt(-p))/2 = u alpha^q. For rational u the real part forces
/// a | 2^(q-1) with a odd, so a = +-1 and the imaginary part is free; the
/// non-real p = 3, q = 3 units are settled by a Mordell curve.
inline RealPartResult real_part_descent(const RamifiedPrime& p, unsigned long q) {
    detail::require_odd_prime(q);
    RealPartResult res{p.value(), q, {}, {}};
    const Int target = pow(2, q - 1);
    for (const int a : {1, -1}) {
        DescentBranch br;
        br.unit = QuadInt::one(p);
        br.b = Int(a);
        const auto [A, B] = detail::binomial_parts_in_b(p.value(), q, Int(a));
        const IntPoly f = A + IntPoly({-target});
        for (auto& b : integer_roots(f)) {
            if (!is_odd(b)) continue;
            br.roots.push_back(b);
            const QuadInt alpha = QuadInt::make(p, Int(a), b);
            const QuadInt v = qi_pow(alpha, q);
            if (v.a() != 1) throw std::logic_error("real-part root does not reproduce 1: " + v.to_string());
            const Int Z = abs(v.b());
            const Int W = qi_norm(alpha);
            if (Z == 0 || p.value() * Z * Z + 1 != 4 * pow(W, q)) continue;
            res.solutions.emplace_back(Z, W);
        }
        res.branches.push_back(std::move(br));
    }
    if (p.value() == 3 && q == 3) {
        DescentBranch br;
        br.basis = BranchBasis::Mordell;
        br.citation = mordell_p3_real().id;
        for (const auto& [X, Y] : mordell_p3_real().points) res.solutions.emplace_back(Int(Y / 36), Int(X / 12));
        res.branches.push_back(std::move(br));
    }
    std::sort(res.solutions.begin(), res.solutions.end(),
              [](const auto& l, const auto& r) { return l.second != r.second ? l.second < r.second : l.first < r.first; });
    res.solutions.erase(std::unique(res.solutions.begin(), res.solutions.end()), res.solutions.end());
    return res;
}

}  // namespace lrn
