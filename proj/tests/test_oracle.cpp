#include <gtest/gtest.h>

#include "support.hpp"

using namespace lrn;

namespace {

RamifiedPrime P(unsigned long p) { return RamifiedPrime::certified(p); }

Solution S(unsigned long p, long x, long y, unsigned long k, unsigned long n) { return {p, x, y, k, n}; }

bool contains(const std::vector<Solution>& v, const Solution& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

}  // namespace

TEST(IntegerSqrt, Examples) {
    auto r = integer_sqrt(32768);
    EXPECT_EQ(r.root, 181);
    EXPECT_FALSE(r.exact);
    r = integer_sqrt(32761);
    EXPECT_EQ(r.root, 181);
    EXPECT_TRUE(r.exact);
    r = integer_sqrt(0);
    EXPECT_EQ(r.root, 0);
    EXPECT_TRUE(r.exact);
    EXPECT_THROW(integer_sqrt(-1), NegativeInputError);
}

TEST(IntegerSqrtProperty, MatchesGmpSqrtrem) {
    for (int i = 0; i < 3000; ++i) {
        const unsigned bits = static_cast<unsigned>(testing_support::random_small(1, 700));
        Int v = abs(testing_support::random_int(bits));
        // squares and their neighbours are the interesting cases
        if (i % 3 == 0) v = v * v;
        if (i % 3 == 1) v = v * v + 1;
        if (i % 3 == 2 && v > 0) v = v * v - 1;
        Int root;
        Int rem;
        mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), v.get_mpz_t());
        const auto got = integer_sqrt(v);
        EXPECT_EQ(got.root, root) << v;
        EXPECT_EQ(got.exact, rem == 0) << v;
    }
}

TEST(SquareFilters, NeverRejectSquares) {
    for (long a = 0; a < 20000; ++a) EXPECT_TRUE(detail::may_be_square(Int(a) * a)) << a;
}

TEST(BruteSearch, SevenSmallBox) {
    const auto v = brute_search(P(7), {100, 15, std::nullopt});
    std::vector<Solution> y2;
    for (const auto& s : v) {
        if (s.y == 2) y2.push_back(s);
    }
    EXPECT_EQ(y2, (std::vector<Solution>{S(7, 3, 2, 0, 2), S(7, 5, 2, 0, 3), S(7, 11, 2, 0, 5), S(7, 181, 2, 0, 13),
                                         S(7, 13, 2, 1, 7)}));
    EXPECT_TRUE(contains(v, S(7, 21, 14, 1, 2)));
    EXPECT_TRUE(contains(v, S(7, 171, 86, 1, 2)));
    for (const auto& s : v) {
        EXPECT_TRUE(verify_solution(s)) << s;
        EXPECT_NE(classify_solution(s).family, FamilyId::Unknown) << s;
    }
}

TEST(BruteSearch, ElevenFindsSporadic) {
    EXPECT_TRUE(contains(brute_search(P(11), {50, 10, std::nullopt}), S(11, 31, 3, 0, 5)));
}

TEST(BruteSearch, SixtySevenHasNoPrimitiveOddSolutions) {
    const auto v = filter_primitive(brute_search(P(67), {500, 20, 3}));
    EXPECT_TRUE(testing_support::restrict(v, [](const Solution& s) { return s.n >= 3; }).empty());
}

TEST(BruteSearch, BoundsRespected) {
    const auto v = brute_search(P(3), {300, 12, 2});
    for (const auto& s : v) {
        EXPECT_LE(s.y, 300);
        EXPECT_LE(s.n, 12u);
        EXPECT_GE(s.n, 2u);
        EXPECT_LE(s.k, 2u);
    }
    EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
    EXPECT_THROW(brute_search(P(3), {0, 12, 2}), ScopeError);
    EXPECT_THROW(brute_search(P(3), {10, 1, 2}), ScopeError);
}

TEST(BruteSearch, PermissivePrimeExplores) {
    // 81 + 19 = 4 * 5^2
    const auto v = brute_search(RamifiedPrime::permissive(19), {50, 6, 1});
    EXPECT_TRUE(contains(v, S(19, 9, 5, 0, 2)));
    // n = 1 lies outside the search
    EXPECT_FALSE(contains(v, S(19, 3, 7, 0, 1)));
}

TEST(BruteSearchProperty, WorkerCountDeterminism) {
    for (const auto pv : RamifiedPrime::kCertified) {
        const SearchBounds b{700, 20, std::nullopt};
        const auto one = brute_search(P(pv), b, 1);
        for (const unsigned w : {2u, 3u, 8u}) EXPECT_EQ(brute_search(P(pv), b, w), one) << pv << " workers=" << w;
    }
}

TEST(BruteSearchProperty, EvenPowerOfPGivesNothing) {
    for (const auto pv : RamifiedPrime::kCertified) {
        EXPECT_TRUE(brute_search_even_power(P(pv), {1000, 16, std::nullopt}).empty()) << pv;
    }
}

TEST(BruteSearchProperty, EqualsFamilyExpansion) {
    for (const auto pv : RamifiedPrime::kCertified) {
        const auto oracle = brute_search(P(pv), {600, 24, std::nullopt}, 4);
        EXPECT_EQ(oracle, family_expansion(P(pv), 600, 24, 1000)) << pv;
    }
}

TEST(FilterPrimitive, Examples) {
    EXPECT_EQ(filter_primitive({S(7, 3, 2, 0, 2), S(7, 5, 2, 0, 3)}), (std::vector<Solution>{S(7, 5, 2, 0, 3)}));
    EXPECT_TRUE(filter_primitive({S(3, 999, 63, 3, 3)}).empty());
    EXPECT_TRUE(filter_primitive({}).empty());
}
