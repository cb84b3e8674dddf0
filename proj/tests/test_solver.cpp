#include <gtest/gtest.h>

#include "support.hpp"

using namespace lrn;

namespace {

RamifiedPrime P(unsigned long p) { return RamifiedPrime::certified(p); }

Solution S(unsigned long p, long x, long y, unsigned long k, unsigned long n) { return {p, x, y, k, n}; }

std::vector<Solution> sorted(std::vector<Solution> v) {
    normalize(v);
    return v;
}

const CompleteResult& default_run(unsigned long p) {
    static std::map<unsigned long, CompleteResult> cache;
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, solve_complete(P(p))).first;
    return it->second;
}

std::vector<std::string> citations(const Json& j) {
    std::vector<std::string> out;
    detail::collect_citations(j, out);
    return out;
}

bool cites(const Json& j, const std::string& id) {
    const auto c = citations(j);
    return std::find(c.begin(), c.end(), id) != c.end();
}

}  // namespace

TEST(SolveEvenN, Examples) {
    EXPECT_EQ(solve_even_n(P(3), 0, 2), (std::vector<Solution>{S(3, 1, 1, 0, 2)}));
    EXPECT_EQ(solve_even_n(P(7), 0, 2), (std::vector<Solution>{S(7, 3, 2, 0, 2)}));
    EXPECT_TRUE(solve_even_n(P(7), 0, 4).empty());
    EXPECT_EQ(solve_even_n(P(3), 0, 8), (std::vector<Solution>{S(3, 1, 1, 0, 8)}));
    EXPECT_THROW(solve_even_n(P(7), 0, 3), UnsupportedIndexError);
    EXPECT_THROW(solve_even_n(P(7), 0, 0), UnsupportedIndexError);
}

TEST(SolveEvenN, ResidueRules) {
    for (unsigned long k = 0; k <= 6; ++k) {
        for (const auto pv : {7ul, 43ul, 67ul, 163ul}) EXPECT_EQ(even_n_rule(P(pv), k, 4), std::optional<std::string>("R3E"));
        EXPECT_EQ(even_n_rule(P(11), k, 8), std::optional<std::string>("R5E"));
        EXPECT_FALSE(even_n_rule(P(7), k, 6).has_value());
        EXPECT_FALSE(even_n_rule(P(3), k, 4).has_value());
    }
}

TEST(SolveEvenN, DescentCrossCheck) {
    for (const auto pv : RamifiedPrime::kCertified) {
        for (unsigned long k = 0; k <= 6; ++k) {
            for (unsigned long n = 2; n <= 30; n += 2) {
                EXPECT_EQ(even_n_via_descent(P(pv), k, n), solve_even_n(P(pv), k, n)) << pv << " k=" << k << " n=" << n;
            }
        }
    }
}

TEST(StripValuations, SevenLiftOfSeptic) {
    // k = 8 = 7r + 1 with r = 1
    const auto subs = strip_valuations(P(7), 8, 7);
    bool found = false;
    for (const auto& sub : subs) {
        if (sub.kind == SubproblemKind::PowerOfP && sub.s == 7) {
            EXPECT_EQ(sub.t, 2u);
            EXPECT_EQ(sub.reduced_k, 1u);
            found = true;
        }
    }
    EXPECT_TRUE(found);
    SolverContext ctx(P(7));
    const auto cell = solve_cell(ctx, 8, 7);
    const Solution lifted{7, 13 * pow(7ul, 7), 2 * pow(7ul, 2), 8, 7};
    EXPECT_EQ(cell.solutions, (std::vector<Solution>{lifted}));
    EXPECT_EQ(lifted, family_instance(FamilyId::S7, {{"r", 1}}));
}

TEST(StripValuations, Shapes) {
    const auto subs = strip_valuations(P(3), 1, 3);
    ASSERT_EQ(subs.size(), 2u);
    EXPECT_EQ(subs[0].kind, SubproblemKind::Primitive);
    EXPECT_EQ(subs[1].kind, SubproblemKind::PowerOfY);
    EXPECT_EQ(subs[1].t, 1u);
    // even n never meets 2k+1 = tn
    for (unsigned long k = 0; k <= 10; ++k) {
        for (const auto& sub : strip_valuations(P(7), k, 4)) EXPECT_NE(sub.kind, SubproblemKind::PowerOfY);
    }
    EXPECT_THROW(strip_valuations(P(7), 0, 1), UnsupportedIndexError);
}

TEST(ValuationBranchA, ThreeGivesMultipleOfThreeFamily) {
    const auto rp = real_part_descent(P(3), 3);
    EXPECT_EQ(rp.solutions, (std::vector<std::pair<Int, Int>>{{1, 1}}));
    SolverContext ctx(P(3));
    const auto cell = solve_cell(ctx, 1, 3);
    EXPECT_EQ(cell.solutions, (std::vector<Solution>{S(3, 9, 3, 1, 3)}));
    EXPECT_EQ(classify_solution(S(3, 9, 3, 1, 3)).family, FamilyId::P3MULT);
    bool branch_a = false;
    for (const auto& c : cell.step.at("outcome").at("cases")) {
        if (c.at("case") == "valuation-a") {
            branch_a = true;
            EXPECT_EQ(c.at("solutions").size(), 1u);
        }
    }
    EXPECT_TRUE(branch_a);
}

TEST(ValuationBranchA, SevenContributesNothing) {
    for (const unsigned long q : {3ul, 5ul, 7ul, 11ul, 13ul}) EXPECT_TRUE(real_part_descent(P(7), q).solutions.empty());
    // the doubled-index defect pair of 7 sits at the even index 4, where tn = 2k+1 is impossible
    EXPECT_EQ(companion_term(make_lucas_pair(qi_make(P(7), 1, 1)), 4), 1);
    SolverContext ctx(P(7));
    for (unsigned long k = 0; k <= 6; ++k) {
        for (unsigned long n = 3; n <= 13; n += 2) {
            if ((2 * k + 1) % n != 0) continue;
            const auto cell = solve_cell(ctx, k, n);
            for (const auto& c : cell.step.at("outcome").at("cases")) {
                if (c.at("case") == "valuation-a") {
                    EXPECT_TRUE(c.at("solutions").empty()) << k << " " << n;
                }
            }
        }
    }
}

TEST(SolveComplete, SevenSmallBounds) {
    const auto res = solve_complete(7, 1, 13);
    EXPECT_EQ(res.solutions, sorted({S(7, 3, 2, 0, 2), S(7, 5, 2, 0, 3), S(7, 11, 2, 0, 5), S(7, 181, 2, 0, 13),
                                     S(7, 21, 14, 1, 2), S(7, 171, 86, 1, 2), S(7, 13, 2, 1, 7)}));
    EXPECT_TRUE(verify_certificate(res.certificate, res.solutions));
}

TEST(SolveComplete, FortyThreeOnlyQuadraticFamily) {
    const auto res = solve_complete(43, 3, 13);
    for (const auto& s : res.solutions) EXPECT_EQ(classify_solution(s).family, FamilyId::N2) << s;
    EXPECT_EQ(res.solutions.size(), 10u);  // t <= k <= 3
    EXPECT_TRUE(cites(res.certificate, "R43"));
    for (const auto& step : res.certificate.at("steps")) {
        const auto& rec = step.at("outcome").at("cases").at(0);
        if (rec.contains("exceptions")) {
            EXPECT_TRUE(rec.at("exceptions").empty());
        }
    }
    const auto wide = solve_complete(43, 1, 19);
    EXPECT_TRUE(cites(wide.certificate, kPrimitiveDivisorTheorem));
}

TEST(SolveComplete, ThreeSmallBounds) {
    const auto res = solve_complete(3, 1, 3);
    EXPECT_EQ(res.solutions, sorted({S(3, 1, 1, 0, 2), S(3, 1, 1, 0, 3), S(3, 37, 7, 0, 3), S(3, 9, 3, 1, 3),
                                     S(3, 3, 3, 1, 2), S(3, 13, 7, 1, 2)}));
}

TEST(SolveComplete, LinearFamilyOnRequest) {
    const auto res = solve_complete(7, 1, 3, true);
    std::size_t n1 = 0;
    for (const auto& s : res.solutions) n1 += s.n == 1;
    EXPECT_EQ(n1, 2 * kN1InstancesPerK);
    EXPECT_TRUE(verify_certificate(res.certificate, res.solutions));
}

TEST(SolveComplete, UncertifiedPrimeRejected) {
    EXPECT_THROW(solve_complete(RamifiedPrime::permissive(19)), UncertifiedPrimeError);
    EXPECT_THROW(solve_complete(19ul), UncertifiedPrimeError);
}

TEST(SolverProperty, EqualsOracle) {
    for (const auto pv : RamifiedPrime::kCertified) {
        const auto& res = default_run(pv);
        const auto oracle = brute_search(P(pv), {2000, kDefaultNMax, kDefaultKMax}, 4);
        const auto mine = testing_support::restrict(res.solutions, [](const Solution& s) { return s.y <= 2000; });
        EXPECT_EQ(mine, oracle) << pv;
    }
}

TEST(SolverProperty, EverySolutionClassifies) {
    for (const auto pv : RamifiedPrime::kCertified) {
        for (const auto& s : default_run(pv).solutions) {
            EXPECT_TRUE(verify_solution(s));
            const auto c = classify_solution(s);
            EXPECT_NE(c.family, FamilyId::Unknown) << s;
        }
    }
}

TEST(SolverProperty, PrimitiveOddSetIsSporadicBases) {
    std::vector<Solution> all;
    for (const auto pv : RamifiedPrime::kCertified) {
        for (const auto& s : filter_primitive(default_run(pv).solutions)) {
            if (s.y >= 2 && s.n >= 3) all.push_back(s);
        }
    }
    EXPECT_EQ(sorted(all), sorted(sporadic_solutions()));
}

TEST(SolverProperty, CellCoverage) {
    for (const auto pv : RamifiedPrime::kCertified) {
        std::set<std::string> ids;
        const auto& steps = default_run(pv).certificate.at("steps");
        for (const auto& step : steps) EXPECT_TRUE(ids.insert(step.at("id").get<std::string>()).second);
        EXPECT_EQ(steps.size(), (kDefaultKMax + 1) * (kDefaultNMax - 1));
        for (unsigned long k = 0; k <= kDefaultKMax; ++k) {
            for (unsigned long n = 2; n <= kDefaultNMax; ++n) {
                EXPECT_TRUE(ids.count("k=" + std::to_string(k) + ",n=" + std::to_string(n))) << pv;
            }
        }
    }
}

TEST(SolverProperty, Monotone) {
    for (const auto pv : RamifiedPrime::kCertified) {
        const auto small = solve_complete(pv, 3, 15).solutions;
        const auto& big = default_run(pv).solutions;
        EXPECT_TRUE(std::includes(big.begin(), big.end(), small.begin(), small.end())) << pv;
    }
}

TEST(SolverProperty, FamiliesSeen) {
    std::set<FamilyId> seen;
    for (const auto pv : RamifiedPrime::kCertified) {
        for (const auto& s : default_run(pv).solutions) seen.insert(classify_solution(s).family);
    }
    EXPECT_EQ(seen, (std::set<FamilyId>{FamilyId::N2, FamilyId::S3a, FamilyId::S3b, FamilyId::S5a, FamilyId::S5b,
                                        FamilyId::S7, FamilyId::S13, FamilyId::P3MULT, FamilyId::P3ODD, FamilyId::DEGEN}));
}

TEST(Certificate, FreshRunReplays) {
    for (const auto pv : RamifiedPrime::kCertified) {
        const auto& res = default_run(pv);
        EXPECT_TRUE(replay_certificate(res.certificate).ok) << pv << ": " << replay_certificate(res.certificate).reason;
        EXPECT_TRUE(verify_certificate(res.certificate, res.solutions));
        EXPECT_NO_THROW(require_certificate(res.certificate));
    }
}

TEST(Certificate, DeletedTopLevelSolutionFails) {
    auto res = solve_complete(7, 1, 13);
    res.certificate.at("solutions").erase(0);
    EXPECT_FALSE(verify_certificate(res.certificate, res.solutions));
    EXPECT_THROW(require_certificate(res.certificate), ReplayMismatch);
}

TEST(Certificate, DeletedStepSolutionNamesStep) {
    auto res = solve_complete(7, 1, 13);
    auto& steps = res.certificate.at("steps");
    std::size_t target = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (steps[i].at("id") == "k=0,n=13") target = i;
    }
    steps[target].at("outcome").at("solutions").erase(0);
    const auto rep = replay_certificate(res.certificate);
    EXPECT_FALSE(rep.ok);
    ASSERT_TRUE(rep.step_index.has_value());
    EXPECT_EQ(*rep.step_index, target);
    EXPECT_EQ(rep.step_id, "k=0,n=13");
    try {
        require_certificate(res.certificate);
        FAIL() << "expected ReplayMismatch";
    } catch (const ReplayMismatch& e) {
        EXPECT_NE(std::string(e.what()).find("k=0,n=13"), std::string::npos);
    }
}

TEST(Certificate, ForgedRuleIdFails) {
    auto res = solve_complete(43, 1, 5);
    bool forged = false;
    for (auto& step : res.certificate.at("steps")) {
        for (auto& c : step.at("outcome").at("cases")) {
            if (!c.contains("branches")) continue;
            for (auto& br : c.at("branches")) {
                if (br.at("citation") == "R43" && !forged) {
                    br.at("citation") = "R44";
                    forged = true;
                }
            }
        }
    }
    ASSERT_TRUE(forged);
    const auto rep = replay_certificate(res.certificate);
    EXPECT_FALSE(rep.ok);
    EXPECT_NE(rep.reason.find("unknown rule id"), std::string::npos);
    EXPECT_FALSE(verify_certificate(res.certificate, res.solutions));
}

TEST(Certificate, WrongSolutionListFails) {
    const auto res = solve_complete(7, 1, 13);
    auto fewer = res.solutions;
    fewer.pop_back();
    EXPECT_FALSE(verify_certificate(res.certificate, fewer));
}

TEST(Certificate, MissingCellFails) {
    auto res = solve_complete(11, 1, 6);
    res.certificate.at("steps").erase(3);
    EXPECT_FALSE(replay_certificate(res.certificate).ok);
}
