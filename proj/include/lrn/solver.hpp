#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bigint.hpp"
#include "descent.hpp"
#include "errors.hpp"
#include "families.hpp"
#include "json_io.hpp"
#include "lucas.hpp"
#include "quadint.hpp"
#include "sieve.hpp"
#include "solution.hpp"

namespace lrn {

/// Primitive solutions with n = 2t even: (2y^t - x)(2y^t + x) = p^(2k+1)
/// with coprime factors gives x = (p^(2k+1) - 1)/2, y^t = (p^(2k+1) + 1)/4.
inline std::vector<Solution> solve_even_n(const RamifiedPrime& p, unsigned long k, unsigned long n) {
    if (n < 2 || n % 2 != 0) throw UnsupportedIndexError("solve_even_n needs an even n >= 2");
    const Int P = pow(p.value(), 2 * k + 1);
    Int x = P - 1;
    Int w = P + 1;
    mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), 2);
    mpz_divexact_ui(w.get_mpz_t(), w.get_mpz_t(), 4);
    if (auto y = exact_root(w, n / 2)) return {Solution{p.value(), x, *y, k, n}};
    return {};
}

/// A rule showing y^t = (p^(2k+1) + 1)/4 has no solution with t even.
inline std::optional<std::string> even_n_rule(const RamifiedPrime& p, unsigned long k, unsigned long n) {
    if ((n / 2) % 2 != 0) return std::nullopt;
    for (const auto& rule : congruence_rules()) {
        if (rule.form == EquationForm::EvenSplit && rule.applies_to(p.value()) && rule_eliminates(rule, p, k)) {
            return rule.id;
        }
    }
    return std::nullopt;
}

/// The same cell through descent: an odd prime q | n turns y^n into
/// (y^(n/q))^q; with no odd factor n is a power of 2 and n = 2 applies.
inline std::vector<Solution> even_n_via_descent(const RamifiedPrime& p, unsigned long k, unsigned long n) {
    if (n < 2 || n % 2 != 0) throw UnsupportedIndexError("even_n_via_descent needs an even n >= 2");
    unsigned long odd = n;
    while (odd % 2 == 0) odd /= 2;
    std::vector<Solution> out;
    if (odd == 1) {
        for (const auto& s : solve_even_n(p, k, 2)) {
            if (auto y = exact_root(s.y, n / 2)) out.push_back({s.p, s.x, *y, k, n});
        }
        return out;
    }
    const unsigned long q = smallest_prime_factor(odd);
    DescentOptions opt;
    opt.compute_beyond_bhv = true;
    for (const auto& s : solve_fixed_exponent(p, k, q, opt).solutions) {
        if (auto y = exact_root(s.y, n / q)) out.push_back({s.p, s.x, *y, k, n});
    }
    normalize(out);
    return out;
}

enum class SubproblemKind { Primitive, PowerOfY, PowerOfP };

inline const char* to_string(SubproblemKind k) {
    switch (k) {
        case SubproblemKind::Primitive: return "primitive";
        case SubproblemKind::PowerOfY: return "valuation-a";
        case SubproblemKind::PowerOfP: return "valuation-b";
    }
    return "?";
}

/// x = p^s X, y = p^t Y with p not dividing XY. The minimum of
/// {2s, 2k+1, tn} is attained twice:
///   primitive    s = t = 0;
///   valuation-a  tn = 2k+1 < 2s, giving pZ^2 + 1 = 4Y^n with x = p^(k+1) Z;
///   valuation-b  2s = tn < 2k+1, giving X^2 + p^(2(k-s)+1) = 4Y^n.
struct Subproblem {
    SubproblemKind kind;
    unsigned long s = 0;   // unused for valuation-a, where s > k is free
    unsigned long t = 0;
    unsigned long reduced_k = 0;
    unsigned long n = 0;
};

inline std::vector<Subproblem> strip_valuations(const RamifiedPrime&, unsigned long k, unsigned long n) {
    if (n < 2) throw UnsupportedIndexError("valuation stripping needs n >= 2");
    std::vector<Subproblem> out{{SubproblemKind::Primitive, 0, 0, k, n}};
    if (n % 2 == 1 && (2 * k + 1) % n == 0) out.push_back({SubproblemKind::PowerOfY, 0, (2 * k + 1) / n, 0, n});
    for (unsigned long s = 1; s <= k; ++s) {
        if ((2 * s) % n == 0) out.push_back({SubproblemKind::PowerOfP, s, 2 * s / n, k - s, n});
    }
    return out;
}

inline constexpr unsigned long kDefaultKMax = 6;
inline constexpr unsigned long kDefaultNMax = 30;
/// Instances of the n = 1 family emitted per k when requested.
inline constexpr unsigned long kN1InstancesPerK = 5;

namespace detail {

inline Json pair_json(const Solution& s) { return Json::array({to_dec(s.x), to_dec(s.y)}); }

inline Json ints_json(const std::vector<Int>& v) {
    Json arr = Json::array();
    for (const auto& x : v) arr.push_back(to_dec(x));
    return arr;
}

inline Json branch_json(const DescentBranch& br) {
    Json j;
    j["unit"] = br.unit ? "(" + to_dec(br.unit->a()) + "," + to_dec(br.unit->b()) + ")" : std::string("-");
    j["fixed"] = br.b ? to_dec(*br.b) : std::string("-");
    j["basis"] = to_string(br.basis);
    j["citation"] = br.citation;
    j["roots"] = ints_json(br.roots);
    Json sols = Json::array();
    for (const auto& s : br.solutions) sols.push_back(pair_json(s));
    j["solutions"] = sols;
    return j;
}

}  // namespace detail

/// Memoized computations shared by the cells of one run or replay.
class SolverContext {
public:
    explicit SolverContext(RamifiedPrime p) : p_(p) {}

    const RamifiedPrime& prime() const { return p_; }

    const DescentResult& descent(unsigned long k, unsigned long q) {
        auto it = descent_.find({k, q});
        if (it == descent_.end()) it = descent_.emplace(std::make_pair(k, q), solve_fixed_exponent(p_, k, q)).first;
        return it->second;
    }

    const RealPartResult& real_part(unsigned long q) {
        auto it = real_.find(q);
        if (it == real_.end()) it = real_.emplace(q, real_part_descent(p_, q)).first;
        return it->second;
    }

    /// Primitive solutions of the (k, n) cell together with its JSON record.
    const std::pair<std::vector<Solution>, Json>& primitive(unsigned long k, unsigned long n) {
        auto it = primitive_.find({k, n});
        if (it == primitive_.end()) it = primitive_.emplace(std::make_pair(k, n), compute_primitive(k, n)).first;
        return it->second;
    }

private:
    std::pair<std::vector<Solution>, Json> compute_primitive(unsigned long k, unsigned long n) {
        Json rec;
        rec["case"] = "primitive";
        std::vector<Solution> sols;
        if (n % 2 == 0) {
            sols = solve_even_n(p_, k, n);
            rec["anchor"] = "even-exponent";
            rec["quote"] = "(2y^(n/2) - x)(2y^(n/2) + x) = p^(2k+1), x = (p^(2k+1) - 1)/2, y^(n/2) = (p^(2k+1) + 1)/4";
            const auto rule = even_n_rule(p_, k, n);
            rec["citation"] = rule ? *rule : std::string();
            if (rule && !sols.empty()) throw std::logic_error("rule " + *rule + " contradicts an even-n solution");
            const auto cross = even_n_via_descent(p_, k, n);
            if (cross != sols) throw std::logic_error("even-n factorization and descent disagree");
            rec["descent_crosscheck"] = "agree";
        } else {
            const unsigned long q = smallest_prime_factor(n);
            const auto& d = descent(k, q);
            if (q == n) {
                rec["anchor"] = q > kLargestDefectiveExponent ? "odd-prime-large" : "odd-prime-descent";
                rec["quote"] = "(x + p^k sqrt(-p))/2 = u ((a + b sqrt(-p))/2)^q";
                sols = d.solutions;
            } else {
                rec["anchor"] = "odd-composite";
                rec["quote"] = "y^n = (y^(n/q))^q with q the least prime factor of n";
                for (const auto& s : d.solutions) {
                    if (auto y = exact_root(s.y, n / q)) sols.push_back({s.p, s.x, *y, k, n});
                }
            }
            rec["q"] = q;
            if (q <= kLargestDefectiveExponent && q != 3) {
                Json ex = Json::array();
                for (const auto& e : bhv_exceptions(q, ExceptionMode::OddExponent).entries) {
                    if (e.p == p_.value()) ex.push_back(e.label);
                }
                rec["exceptions"] = ex;
            }
            Json branches = Json::array();
            for (const auto& br : d.branches) branches.push_back(detail::branch_json(br));
            rec["branches"] = branches;
        }
        normalize(sols);
        Json found = Json::array();
        for (const auto& s : sols) found.push_back(detail::pair_json(s));
        rec["solutions"] = found;
        return {sols, rec};
    }

    RamifiedPrime p_;
    std::map<std::pair<unsigned long, unsigned long>, DescentResult> descent_;
    std::map<unsigned long, RealPartResult> real_;
    std::map<std::pair<unsigned long, unsigned long>, std::pair<std::vector<Solution>, Json>> primitive_;
};

struct CellResult {
    std::vector<Solution> solutions;
    Json step;
};

/// Solves one (k, n) cell, n >= 2, and records it as a certificate step.
inline CellResult solve_cell(SolverContext& ctx, unsigned long k, unsigned long n) {
    const RamifiedPrime& p = ctx.prime();
    const unsigned long pv = p.value();
    std::vector<Solution> all;
    Json cases = Json::array();
    bool theorem = false;
    bool rule = false;

    for (const auto& sub : strip_valuations(p, k, n)) {
        switch (sub.kind) {
            case SubproblemKind::Primitive: {
                const auto& [sols, rec] = ctx.primitive(k, n);
                all.insert(all.end(), sols.begin(), sols.end());
                cases.push_back(rec);
                break;
            }
            case SubproblemKind::PowerOfY: {
                const unsigned long q = smallest_prime_factor(n);
                const auto& rp = ctx.real_part(q);
                Json rec;
                rec["case"] = to_string(sub.kind);
                rec["anchor"] = "valuation-power-of-y";
                rec["quote"] = "pZ^2 + 1 = 4Y^n, x = p^(k+1) Z, y = p^t Y, tn = 2k+1";
                rec["t"] = sub.t;
                rec["q"] = q;
                Json zw = Json::array();
                Json found = Json::array();
                for (const auto& [Z, W] : rp.solutions) {
                    zw.push_back(Json::array({to_dec(Z), to_dec(W)}));
                    if (auto Y = exact_root(W, n / q)) {
                        Solution s{pv, pow(pv, k + 1) * Z, pow(pv, sub.t) * *Y, k, n};
                        if (!verify_solution(s)) throw std::logic_error("valuation-a lift failed: " + s.to_string());
                        all.push_back(s);
                        found.push_back(detail::pair_json(s));
                    }
                }
                rec["real_part_solutions"] = zw;
                Json branches = Json::array();
                for (const auto& br : rp.branches) branches.push_back(detail::branch_json(br));
                rec["branches"] = branches;
                if (n % 3 != 0) {
                    // u_2n / u_n = v_n = +-1 for the doubled-index defect pairs.
                    Json di = Json::array();
                    for (const auto& e : bhv_exceptions(n, ExceptionMode::DoubledIndex).entries) {
                        if (e.p != pv) continue;
                        const auto pair = make_lucas_pair(QuadInt::make(p, e.a, e.b));
                        const Int v = companion_term(pair, n);
                        di.push_back({{"entry", e.label}, {"v_n", to_dec(v)}, {"unit_quotient", abs(v) == 1}});
                    }
                    rec["doubled_index"] = di;
                }
                rec["solutions"] = found;
                cases.push_back(rec);
                break;
            }
            case SubproblemKind::PowerOfP: {
                const auto& [base, brec] = ctx.primitive(sub.reduced_k, n);
                Json rec;
                rec["case"] = to_string(sub.kind);
                rec["anchor"] = "valuation-power-of-p";
                rec["quote"] = "X^2 + p^(2(k-s)+1) = 4Y^n, x = p^s X, y = p^t Y, 2s = tn";
                rec["s"] = sub.s;
                rec["t"] = sub.t;
                rec["reduced_k"] = sub.reduced_k;
                Json found = Json::array();
                for (const auto& b : base) {
                    Solution s{pv, pow(pv, sub.s) * b.x, pow(pv, sub.t) * b.y, k, n};
                    if (!verify_solution(s)) throw std::logic_error("valuation-b lift failed: " + s.to_string());
                    all.push_back(s);
                    found.push_back(detail::pair_json(s));
                }
                rec["solutions"] = found;
                cases.push_back(rec);
                break;
            }
        }
    }

    for (const auto& c : cases) {
        if (c.contains("branches")) {
            for (const auto& br : c.at("branches")) {
                const auto& basis = br.at("basis").get_ref<const std::string&>();
                theorem = theorem || basis == to_string(BranchBasis::PrimitiveDivisor);
                rule = rule || basis == to_string(BranchBasis::CongruenceRule) ||
                       basis == to_string(BranchBasis::SignModThree) || basis == to_string(BranchBasis::UnitRule);
            }
        }
        if (c.contains("citation") && !c.at("citation").get_ref<const std::string&>().empty()) rule = true;
    }

    normalize(all);
    Json step;
    step["id"] = "k=" + std::to_string(k) + ",n=" + std::to_string(n);
    step["anchor"] = "cell";
    step["quote"] = "x^2 + p^(2k+1) = 4y^n";
    step["params"] = {{"k", k}, {"n", n}};
    Json outcome;
    if (!all.empty()) {
        outcome["status"] = "solutions";
    } else if (theorem) {
        outcome["status"] = "theorem-empty";
    } else if (rule) {
        outcome["status"] = "eliminated-by-rule";
    } else {
        outcome["status"] = "exact-empty";
    }
    outcome["cases"] = cases;
    Json found = Json::array();
    for (const auto& s : all) found.push_back(detail::pair_json(s));
    outcome["solutions"] = found;
    step["outcome"] = outcome;
    return {all, step};
}

/// The n = 1 cell: first kN1InstancesPerK members of the x = 2t+1 family.
inline CellResult solve_n1_cell(const RamifiedPrime& p, unsigned long k) {
    const auto sols = family_generate(FamilyId::N1, {{"p", static_cast<long>(p.value())}, {"k", static_cast<long>(k)}},
                                      kN1InstancesPerK);
    Json step;
    step["id"] = "k=" + std::to_string(k) + ",n=1";
    step["anchor"] = "linear-family";
    step["quote"] = "x = 2t+1, y = t^2 + t + (1 + p^(2k+1))/4";
    step["params"] = {{"k", k}, {"n", 1ul}, {"count", kN1InstancesPerK}};
    Json found = Json::array();
    for (const auto& s : sols) found.push_back(detail::pair_json(s));
    step["outcome"] = {{"status", "solutions"}, {"solutions", found}};
    return {sols, step};
}

struct SolveBounds {
    unsigned long k_max = kDefaultKMax;
    unsigned long n_max = kDefaultNMax;
    bool include_n1 = false;
};

struct CompleteResult {
    std::vector<Solution> solutions;
    Json certificate;
};

inline Json bounds_json(const SolveBounds& b) {
    return {{"k_max", b.k_max}, {"n_max", b.n_max}, {"include_n1", b.include_n1}};
}

/// Every solution with k <= k_max and 2 <= n <= n_max (plus n = 1 members
/// when asked), with one certificate step per (k, n) cell.
inline CompleteResult solve_complete(const RamifiedPrime& p, const SolveBounds& bounds = {}) {
    if (!p.is_certified()) {
        throw UncertifiedPrimeError("complete solving needs a certified prime, got p = " + std::to_string(p.value()));
    }
    SolverContext ctx(p);
    CompleteResult res;
    Json steps = Json::array();
    for (unsigned long k = 0; k <= bounds.k_max; ++k) {
        if (bounds.include_n1) {
            auto cell = solve_n1_cell(p, k);
            res.solutions.insert(res.solutions.end(), cell.solutions.begin(), cell.solutions.end());
            steps.push_back(std::move(cell.step));
        }
        for (unsigned long n = 2; n <= bounds.n_max; ++n) {
            auto cell = solve_cell(ctx, k, n);
            res.solutions.insert(res.solutions.end(), cell.solutions.begin(), cell.solutions.end());
            steps.push_back(std::move(cell.step));
        }
    }
    normalize(res.solutions);
    res.certificate["p"] = p.value();
    res.certificate["bounds"] = bounds_json(bounds);
    res.certificate["steps"] = steps;
    res.certificate["solutions"] = solutions_to_json(res.solutions);
    return res;
}

inline CompleteResult solve_complete(unsigned long p, unsigned long k_max = kDefaultKMax,
                                     unsigned long n_max = kDefaultNMax, bool include_n1 = false) {
    return solve_complete(RamifiedPrime::certified(p), SolveBounds{k_max, n_max, include_n1});
}

struct ReplayReport {
    bool ok = true;
    std::optional<std::size_t> step_index;
    std::string step_id;
    std::string reason;
};

namespace detail {

inline ReplayReport replay_fail(std::string reason, std::optional<std::size_t> idx = std::nullopt, std::string id = {}) {
    return ReplayReport{false, idx, std::move(id), std::move(reason)};
}

inline void collect_citations(const Json& j, std::vector<std::string>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.key() == "citation" && it.value().is_string()) out.push_back(it.value().get<std::string>());
            collect_citations(it.value(), out);
        }
    } else if (j.is_array()) {
        for (const auto& v : j) collect_citations(v, out);
    }
}

inline bool known_citation(const std::string& c) {
    if (c.empty() || find_rule(c)) return true;
    return c == kSignModThree || c == kPrimitiveDivisorTheorem || c == mordell_q3_k0().id || c == mordell_p3_real().id;
}

inline std::optional<unsigned long> json_ulong(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_number_unsigned()) return std::nullopt;
    return j.at(key).get<unsigned long>();
}

}  // namespace detail

/// Re-runs every step (sieve rules, descent cells, exception lookups) and
/// checks cell coverage and the final solution list.
inline ReplayReport replay_certificate(const Json& cert) {
    using detail::replay_fail;
    try {
        if (!cert.is_object()) return replay_fail("certificate is not a JSON object");
        for (const char* key : {"p", "bounds", "steps", "solutions"}) {
            if (!cert.contains(key)) return replay_fail(std::string("certificate lacks '") + key + "'");
        }
        const auto pv = detail::json_ulong(cert, "p");
        if (!pv || !RamifiedPrime::is_certified_value(*pv)) return replay_fail("p is not a certified prime");
        const auto& b = cert.at("bounds");
        const auto k_max = detail::json_ulong(b, "k_max");
        const auto n_max = detail::json_ulong(b, "n_max");
        if (!k_max || !n_max || !b.contains("include_n1") || !b.at("include_n1").is_boolean() || b.size() != 3) {
            return replay_fail("malformed bounds");
        }
        const SolveBounds bounds{*k_max, *n_max, b.at("include_n1").get<bool>()};
        if (!cert.at("steps").is_array()) return replay_fail("steps must be an array");

        const auto p = RamifiedPrime::certified(*pv);
        SolverContext ctx(p);
        std::vector<Solution> union_sols;
        std::set<std::pair<unsigned long, unsigned long>> seen;
        const auto& steps = cert.at("steps");
        for (std::size_t i = 0; i < steps.size(); ++i) {
            const auto& step = steps[i];
            const std::string id = step.is_object() && step.contains("id") && step.at("id").is_string()
                                       ? step.at("id").get<std::string>()
                                       : std::string("?");
            std::vector<std::string> cites;
            detail::collect_citations(step, cites);
            for (const auto& c : cites) {
                if (!detail::known_citation(c)) return replay_fail("unknown rule id '" + c + "'", i, id);
            }
            const Json params = step.is_object() && step.contains("params") ? step.at("params") : Json();
            const auto k = detail::json_ulong(params, "k");
            const auto n = detail::json_ulong(params, "n");
            if (!k || !n) return replay_fail("step parameters missing", i, id);
            if (*k > bounds.k_max || *n > bounds.n_max || (*n == 1 && !bounds.include_n1) || *n == 0) {
                return replay_fail("step outside the certificate bounds", i, id);
            }
            if (!seen.insert({*k, *n}).second) return replay_fail("cell appears twice", i, id);
            const CellResult cell = *n == 1 ? solve_n1_cell(p, *k) : solve_cell(ctx, *k, *n);
            if (cell.step != step) return replay_fail("step does not replay", i, id);
            union_sols.insert(union_sols.end(), cell.solutions.begin(), cell.solutions.end());
        }
        for (unsigned long k = 0; k <= bounds.k_max; ++k) {
            for (unsigned long n = bounds.include_n1 ? 1 : 2; n <= bounds.n_max; ++n) {
                if (!seen.count({k, n})) {
                    return replay_fail("cell k=" + std::to_string(k) + ",n=" + std::to_string(n) + " is not covered");
                }
            }
        }
        normalize(union_sols);
        if (solutions_to_json(union_sols) != cert.at("solutions")) {
            return replay_fail("solution list differs from the union of the steps");
        }
    } catch (const std::exception& e) {
        return replay_fail(std::string("replay raised: ") + e.what());
    }
    return {};
}

/// Replays the certificate and checks that `sols` is exactly its solution set.
inline bool verify_certificate(const Json& cert, const std::vector<Solution>& sols) {
    if (!replay_certificate(cert).ok) return false;
    try {
        auto mine = sols;
        normalize(mine);
        return mine.size() == sols.size() && mine == solutions_from_json(cert.at("solutions"));
    } catch (const Error&) {
        return false;
    }
}

/// Throwing form: ReplayMismatch names the first divergent step.
inline void require_certificate(const Json& cert) {
    const auto r = replay_certificate(cert);
    if (!r.ok) {
        std::string msg = r.reason;
        if (r.step_index) msg = "step " + std::to_string(*r.step_index) + " (" + r.step_id + "): " + msg;
        throw ReplayMismatch(msg);
    }
}

}  // namespace lrn
