#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"
#include "quadint.hpp"
#include "solution.hpp"

namespace lrn {

enum class FamilyId { N1, N2, S3a, S3b, S5a, S5b, S7, S13, P3MULT, P3ODD, DEGEN, Unknown };

using Params = std::map<std::string, long>;

struct FamilyInfo {
    FamilyId id;
    const char* name;
    std::vector<std::string> params;
    const char* form;   // closed form (x, y, p, k, n)
    bool tabulated;     // part of the classical solution table
};

inline const std::vector<FamilyInfo>& family_catalog() {
    static const std::vector<FamilyInfo> catalog{
        {FamilyId::N1, "N1", {"p", "k", "t"}, "(2t+1, t^2+t+(1+p^(2k+1))/4, p, k, 1)", false},
        {FamilyId::N2, "N2", {"p", "k", "t"}, "(p^t (p^(2(k-t)+1)-1)/2, p^t (p^(2(k-t)+1)+1)/4, p, k, 2), t <= k", true},
        {FamilyId::S3a, "S3a", {"r"}, "(37*3^(3r), 7*3^(2r), 3, 3r, 3)", true},
        {FamilyId::S3b, "S3b", {"r"}, "(5*7^(3r), 2*7^(2r), 7, 3r, 3)", true},
        {FamilyId::S5a, "S5a", {"r"}, "(11*7^(5r), 2*7^(2r), 7, 5r, 5)", true},
        {FamilyId::S5b, "S5b", {"r"}, "(31*11^(5r), 3*11^(2r), 11, 5r, 5)", true},
        {FamilyId::S7, "S7", {"r"}, "(13*7^(7r), 2*7^(2r), 7, 7r+1, 7)", true},
        {FamilyId::S13, "S13", {"r"}, "(181*7^(13r), 2*7^(2r), 7, 13r, 13)", true},
        {FamilyId::P3MULT, "P3MULT", {"r", "s"}, "(3^(r+1), 3^((2r+1)/(3s)), 3, r, 3s), 3s | 2r+1", true},
        {FamilyId::P3ODD, "P3ODD", {"r", "n"}, "(3^(r+1), 3^((2r+1)/n), 3, r, n), n | 2r+1, n >= 5, 3 !| n", false},
        {FamilyId::DEGEN, "DEGEN", {"n"}, "(1, 1, 3, 0, n)", false},
    };
    return catalog;
}

inline const FamilyInfo& family_info(FamilyId id) {
    for (const auto& f : family_catalog()) {
        if (f.id == id) return f;
    }
    throw ConstraintError("no catalog entry for this family");
}

inline std::string to_string(FamilyId id) {
    if (id == FamilyId::Unknown) return "Unknown";
    return family_info(id).name;
}

inline FamilyId family_from_string(const std::string& name) {
    for (const auto& f : family_catalog()) {
        if (name == f.name) return f.id;
    }
    if (name == "Unknown") return FamilyId::Unknown;
    throw ConstraintError("unknown family id '" + name + "'");
}

/// Sporadic base solution (gcd(p, x) = 1, odd prime exponent) and its
/// scaling: x -> x p^(q r), y -> y p^(2r), k -> k + q r.
struct SporadicBase {
    FamilyId id;
    unsigned long p;
    long x;
    long y;
    unsigned long k;
    unsigned long q;
};

inline const std::vector<SporadicBase>& sporadic_bases() {
    static const std::vector<SporadicBase> bases{
        {FamilyId::S3a, 3, 37, 7, 0, 3},  {FamilyId::S3b, 7, 5, 2, 0, 3},   {FamilyId::S5a, 7, 11, 2, 0, 5},
        {FamilyId::S5b, 11, 31, 3, 0, 5}, {FamilyId::S7, 7, 13, 2, 1, 7},   {FamilyId::S13, 7, 181, 2, 0, 13},
    };
    return bases;
}

inline const SporadicBase* sporadic_base(FamilyId id) {
    for (const auto& b : sporadic_bases()) {
        if (b.id == id) return &b;
    }
    return nullptr;
}

namespace detail {

inline long require(const Params& params, const std::string& key) {
    const auto it = params.find(key);
    if (it == params.end()) throw ConstraintError("missing parameter '" + key + "'");
    if (it->second < 0) throw ConstraintError("parameter '" + key + "' must be non-negative");
    return it->second;
}

inline unsigned long certified_p(const Params& params) {
    const long p = require(params, "p");
    if (!RamifiedPrime::is_certified_value(static_cast<unsigned long>(p))) {
        throw ConstraintError("p = " + std::to_string(p) + " is not a certified prime");
    }
    return static_cast<unsigned long>(p);
}

inline void reject_unknown_keys(FamilyId id, const Params& params) {
    const auto& names = family_info(id).params;
    for (const auto& [key, value] : params) {
        if (std::find(names.begin(), names.end(), key) == names.end()) {
            throw ConstraintError("family " + to_string(id) + " has no parameter '" + key + "'");
        }
    }
}

inline Solution build_unchecked(FamilyId id, const Params& params) {
    reject_unknown_keys(id, params);
    switch (id) {
        case FamilyId::N1: {
            const auto p = certified_p(params);
            const auto k = static_cast<unsigned long>(require(params, "k"));
            const Int t = require(params, "t");
            Int c = pow(p, 2 * k + 1) + 1;
            mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), 4);
            return {p, 2 * t + 1, t * t + t + c, k, 1};
        }
        case FamilyId::N2: {
            const auto p = certified_p(params);
            const auto k = static_cast<unsigned long>(require(params, "k"));
            const auto t = static_cast<unsigned long>(require(params, "t"));
            if (t > k) throw ConstraintError("N2 needs t <= k");
            const Int P = pow(p, 2 * (k - t) + 1);
            Int x = P - 1;
            Int y = P + 1;
            mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), 2);
            mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), 4);
            const Int pt = pow(p, t);
            return {p, pt * x, pt * y, k, 2};
        }
        case FamilyId::S3a:
        case FamilyId::S3b:
        case FamilyId::S5a:
        case FamilyId::S5b:
        case FamilyId::S7:
        case FamilyId::S13: {
            const auto& b = *sporadic_base(id);
            const auto r = static_cast<unsigned long>(require(params, "r"));
            return {b.p, Int(b.x) * pow(b.p, b.q * r), Int(b.y) * pow(b.p, 2 * r), b.k + b.q * r, b.q};
        }
        case FamilyId::P3MULT: {
            const auto r = static_cast<unsigned long>(require(params, "r"));
            const auto s = static_cast<unsigned long>(require(params, "s"));
            if (s == 0 || (2 * r + 1) % (3 * s) != 0) throw ConstraintError("P3MULT needs s >= 1 and 3s | 2r+1");
            return {3, pow(3, r + 1), pow(3, (2 * r + 1) / (3 * s)), r, 3 * s};
        }
        case FamilyId::P3ODD: {
            const auto r = static_cast<unsigned long>(require(params, "r"));
            const auto n = static_cast<unsigned long>(require(params, "n"));
            if (n < 5 || n % 2 == 0 || n % 3 == 0 || (2 * r + 1) % n != 0) {
                throw ConstraintError("P3ODD needs n | 2r+1 with n >= 5 and 3 not dividing n");
            }
            return {3, pow(3, r + 1), pow(3, (2 * r + 1) / n), r, n};
        }
        case FamilyId::DEGEN: {
            const auto n = static_cast<unsigned long>(require(params, "n"));
            if (n < 2) throw ConstraintError("DEGEN needs n >= 2");
            return {3, 1, 1, 0, n};
        }
        case FamilyId::Unknown:
            break;
    }
    throw ConstraintError("cannot generate instances of family Unknown");
}

}  // namespace detail

/// One instance of a family. Every instance is checked against the defining
/// identity; a failure is a data bug and raises IdentityError.
inline Solution family_instance(FamilyId id, const Params& params) {
    Solution s = detail::build_unchecked(id, params);
    if (!verify_solution(s)) {
        throw IdentityError("family " + to_string(id) + " produced a non-solution " + s.to_string());
    }
    return s;
}

/// The first `count` instances in lexicographic order of the free
/// parameters. Fixing every parameter yields that single instance; otherwise
/// only leading parameters (p, k for N1; p or p,k for N2) may be fixed.
inline std::vector<Solution> family_generate(FamilyId id, const Params& fixed, std::size_t count) {
    detail::reject_unknown_keys(id, fixed);
    const auto& names = family_info(id).params;
    if (fixed.size() == names.size()) return {family_instance(id, fixed)};

    auto only = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [key, v] : fixed) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || key == a;
            if (!ok) throw ConstraintError("parameter '" + key + "' cannot be fixed while enumerating " + to_string(id));
        }
    };

    std::vector<Solution> out;
    auto emit = [&](const Params& ps) {
        out.push_back(family_instance(id, ps));
        return out.size() >= count;
    };
    if (count == 0) return out;

    switch (id) {
        case FamilyId::N1: {
            only({"p", "k"});
            Params ps = fixed;
            detail::certified_p(ps);
            detail::require(ps, "k");
            for (long t = 0;; ++t) {
                ps["t"] = t;
                if (emit(ps)) break;
            }
            break;
        }
        case FamilyId::N2: {
            only({"p", "k"});
            Params ps = fixed;
            detail::certified_p(ps);
            const bool k_fixed = fixed.count("k") != 0;
            for (long k = k_fixed ? fixed.at("k") : 0;; ++k) {
                ps["k"] = k;
                bool done = false;
                for (long t = 0; t <= k && !done; ++t) {
                    ps["t"] = t;
                    done = emit(ps);
                }
                if (done || k_fixed) break;
            }
            break;
        }
        case FamilyId::P3MULT: {
            only({});
            for (long r = 0;; ++r) {
                bool done = false;
                for (long s = 1; 3 * s <= 2 * r + 1 && !done; ++s) {
                    if ((2 * r + 1) % (3 * s) == 0) done = emit({{"r", r}, {"s", s}});
                }
                if (done) break;
            }
            break;
        }
        case FamilyId::P3ODD: {
            only({});
            for (long r = 0;; ++r) {
                bool done = false;
                for (long n = 5; n <= 2 * r + 1 && !done; n += 2) {
                    if (n % 3 != 0 && (2 * r + 1) % n == 0) done = emit({{"r", r}, {"n", n}});
                }
                if (done) break;
            }
            break;
        }
        case FamilyId::DEGEN: {
            only({});
            for (long n = 2;; ++n) {
                if (emit({{"n", n}})) break;
            }
            break;
        }
        case FamilyId::Unknown:
            throw ConstraintError("cannot generate instances of family Unknown");
        default: {
            only({});
            for (long r = 0;; ++r) {
                if (emit({{"r", r}})) break;
            }
            break;
        }
    }
    return out;
}

/// All tuples (x, Y, k, N) sharing x, k and the value y^n = Y^N, with
/// 2 <= N <= n_max. For y = 1 that is every N in range.
inline std::vector<Solution> power_class(const Solution& s, unsigned long n_max) {
    std::vector<Solution> out;
    if (s.y == 1) {
        for (unsigned long m = 2; m <= n_max; ++m) out.push_back({s.p, s.x, 1, s.k, m});
        return out;
    }
    const auto base = power_base(s.y);
    const unsigned long total = base.exponent * s.n;
    for (unsigned long m = 2; m <= std::min(total, n_max); ++m) {
        if (total % m == 0) out.push_back({s.p, s.x, pow(base.root, total / m), s.k, m});
    }
    return out;
}

struct Classification {
    FamilyId family = FamilyId::Unknown;
    Params params;
    /// The family instance the solution was matched through; differs from
    /// the input only when matched via its power class.
    std::optional<Solution> via;

    bool lifted() const { return via.has_value(); }
};

namespace detail {

inline std::optional<Classification> match_direct(const Solution& s) {
    auto attempt = [&](FamilyId id, const Params& ps) -> std::optional<Classification> {
        try {
            if (build_unchecked(id, ps) == s) return Classification{id, ps, std::nullopt};
        } catch (const ConstraintError&) {
        }
        return std::nullopt;
    };
    const long p = static_cast<long>(s.p);
    const long k = static_cast<long>(s.k);
    if (s.y == 1 && s.p == 3 && s.k == 0 && s.x == 1 && s.n >= 2) return Classification{FamilyId::DEGEN, {{"n", static_cast<long>(s.n)}}, std::nullopt};
    if (s.n == 1 && RamifiedPrime::is_certified_value(s.p) && is_odd(s.x)) {
        const Int t = (s.x - 1) / 2;
        if (t.fits_slong_p()) {
            if (auto c = attempt(FamilyId::N1, {{"p", p}, {"k", k}, {"t", t.get_si()}})) return c;
        }
    }
    if (s.n == 2 && RamifiedPrime::is_certified_value(s.p)) {
        const auto t = static_cast<long>(remove_factor(s.x, s.p).first);
        if (auto c = attempt(FamilyId::N2, {{"p", p}, {"k", k}, {"t", t}})) return c;
    }
    for (const auto& b : sporadic_bases()) {
        if (b.p != s.p || b.q != s.n || s.k < b.k || (s.k - b.k) % b.q != 0) continue;
        if (auto c = attempt(b.id, {{"r", static_cast<long>((s.k - b.k) / b.q)}})) return c;
    }
    if (s.p == 3 && s.n % 3 == 0) {
        if (auto c = attempt(FamilyId::P3MULT, {{"r", k}, {"s", static_cast<long>(s.n / 3)}})) return c;
    }
    if (s.p == 3) {
        if (auto c = attempt(FamilyId::P3ODD, {{"r", k}, {"n", static_cast<long>(s.n)}})) return c;
    }
    return std::nullopt;
}

}  // namespace detail

/// Identifies the family that generates s, directly or through its power
/// class (x, Y, k, N) with Y^N = y^n. Unknown means no family matched, which
/// would contradict the classification and is reported as such.
inline Classification classify_solution(const Solution& s) {
    if (!verify_solution(s)) throw NotASolutionError(s.to_string() + " does not satisfy x^2 + p^(2k+1) = 4y^n");
    if (auto c = detail::match_direct(s)) return *c;
    if (s.n >= 2) {
        const auto base = power_base(s.y);
        for (const auto& member : power_class(s, base.exponent * s.n)) {
            if (member == s) continue;
            if (auto c = detail::match_direct(member)) {
                c->via = member;
                return *c;
            }
        }
    }
    return Classification{};
}

/// Every family instance (N1 excluded) with the power-class expansion,
/// restricted to y <= y_max, 2 <= n <= n_max and k <= k_max.
inline std::vector<Solution> family_expansion(const RamifiedPrime& prime, const Int& y_max, unsigned long n_max,
                                              unsigned long k_max) {
    const unsigned long p = prime.value();
    // Any member of a power class satisfies p^(2k+1) < 4 y^n <= 4 y_max^n_max.
    const Int ceiling = 4 * pow(y_max, n_max);
    unsigned long k_cap = 0;
    while (k_cap < k_max && pow(p, 2 * (k_cap + 1) + 1) < ceiling) ++k_cap;

    std::vector<Solution> seeds;
    const long pl = static_cast<long>(p);
    for (unsigned long k = 0; k <= k_cap; ++k) {
        for (unsigned long t = 0; t <= k; ++t) {
            seeds.push_back(family_instance(FamilyId::N2, {{"p", pl}, {"k", static_cast<long>(k)}, {"t", static_cast<long>(t)}}));
        }
    }
    for (const auto& b : sporadic_bases()) {
        if (b.p != p) continue;
        for (unsigned long r = 0; b.k + b.q * r <= k_cap; ++r) {
            seeds.push_back(family_instance(b.id, {{"r", static_cast<long>(r)}}));
        }
    }
    if (p == 3) {
        for (unsigned long r = 0; r <= k_cap; ++r) {
            for (unsigned long n = 3; n <= 2 * r + 1; n += 2) {
                if ((2 * r + 1) % n != 0) continue;
                const long rl = static_cast<long>(r);
                seeds.push_back(n % 3 == 0 ? family_instance(FamilyId::P3MULT, {{"r", rl}, {"s", static_cast<long>(n / 3)}})
                                           : family_instance(FamilyId::P3ODD, {{"r", rl}, {"n", static_cast<long>(n)}}));
            }
        }
        seeds.push_back(family_instance(FamilyId::DEGEN, {{"n", 2}}));
    }

    std::vector<Solution> out;
    for (const auto& seed : seeds) {
        // The power class of a seed can reach exponents above its own n.
        const auto base = power_base(seed.y);
        const unsigned long reach = seed.y == 1 ? n_max : base.exponent * seed.n;
        for (auto& m : power_class(seed, reach)) {
            if (m.n <= n_max && m.y <= y_max && m.k <= k_max) out.push_back(std::move(m));
        }
    }
    normalize(out);
    return out;
}

/// Rows of the classical solution table, either exactly as printed or with
/// the three misprinted rows corrected.
enum class TableVariant { Literal, Corrected };

struct TableRow {
    std::string label;
    FamilyId family;
    std::function<Solution(const Params&)> generate;
};

struct TableInstance {
    std::string row;
    Params params;
    Solution solution;
};

inline std::vector<TableRow> table_rows(TableVariant variant) {
    auto family_row = [](FamilyId id) {
        return TableRow{to_string(id), id, [id](const Params& ps) { return detail::build_unchecked(id, ps); }};
    };
    std::vector<TableRow> rows{family_row(FamilyId::N2), family_row(FamilyId::S3a), family_row(FamilyId::S3b),
                               family_row(FamilyId::S5a), family_row(FamilyId::S5b), family_row(FamilyId::S7),
                               family_row(FamilyId::S13), family_row(FamilyId::P3MULT)};
    if (variant == TableVariant::Corrected) return rows;
    for (auto& row : rows) {
        switch (row.family) {
            case FamilyId::S3a:  // y printed as 7 * 2^(2r)
                row.generate = [](const Params& ps) {
                    const auto r = static_cast<unsigned long>(detail::require(ps, "r"));
                    return Solution{3, 37 * pow(3, 3 * r), 7 * pow(2, 2 * r), 3 * r, 3};
                };
                break;
            case FamilyId::S5b:  // y printed as 2 * 11^(2r)
                row.generate = [](const Params& ps) {
                    const auto r = static_cast<unsigned long>(detail::require(ps, "r"));
                    return Solution{11, 31 * pow(11, 5 * r), 2 * pow(11, 2 * r), 5 * r, 5};
                };
                break;
            case FamilyId::S13:  // bases printed as 13 instead of 7
                row.generate = [](const Params& ps) {
                    const auto r = static_cast<unsigned long>(detail::require(ps, "r"));
                    return Solution{7, 181 * pow(13, 13 * r), 2 * pow(13, 2 * r), 13 * r, 13};
                };
                break;
            default:
                break;
        }
    }
    return rows;
}

/// Instances of every table row with all parameters (r, s, t and k for the
/// n = 2 row) at most `max_param`; the n = 2 row runs over every certified p.
inline std::vector<TableInstance> table_instances(TableVariant variant, long max_param) {
    std::vector<TableInstance> out;
    for (const auto& row : table_rows(variant)) {
        std::vector<Params> grid;
        switch (row.family) {
            case FamilyId::N2:
                for (const auto p : RamifiedPrime::kCertified) {
                    for (long k = 0; k <= max_param; ++k) {
                        for (long t = 0; t <= k; ++t) grid.push_back({{"p", static_cast<long>(p)}, {"k", k}, {"t", t}});
                    }
                }
                break;
            case FamilyId::P3MULT:
                for (long r = 0; r <= max_param; ++r) {
                    for (long s = 1; s <= max_param; ++s) {
                        if ((2 * r + 1) % (3 * s) == 0) grid.push_back({{"r", r}, {"s", s}});
                    }
                }
                break;
            default:
                for (long r = 0; r <= max_param; ++r) grid.push_back({{"r", r}});
                break;
        }
        for (auto& ps : grid) out.push_back({row.label, ps, row.generate(ps)});
    }
    return out;
}

/// The six primitive odd-exponent base solutions.
inline std::vector<Solution> sporadic_solutions() {
    std::vector<Solution> out;
    for (const auto& b : sporadic_bases()) out.push_back({b.p, b.x, b.y, b.k, b.q});
    return out;
}

}  // namespace lrn
