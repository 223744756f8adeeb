#include "obp/harness.hpp"
#include "obp/learn.hpp"

#include <gtest/gtest.h>

using namespace obp;

TEST(Learn, SmallerSideMoves)
{
    Configuration c = Configuration::balanced(2, 4, 8);
    CostLedger L;
    LearnState s(8, 4, Rational(1, 4));
    EXPECT_EQ(s.capacity(), 5);
    s.step(Request{0, 1, 1}, c, L);
    EXPECT_EQ(L.migration, 0);
    s.step(Request{1, 4, 2}, c, L);
    EXPECT_EQ(c.server_of(4), 0);
    EXPECT_EQ(L.migration, 1);
    EXPECT_EQ(L.category(CostCategory::learn), 1);
    EXPECT_EQ(L.communication, 0);
    EXPECT_TRUE(s.colocated(c));
}

TEST(Learn, EvictsWholeComponentsWhenFull)
{
    // k = 2, capacity 3: join {0,1} and {2,3} on one side forces evictions.
    Configuration c = Configuration::balanced(3, 2, 6);
    CostLedger L;
    LearnState s(6, 2, Rational(1, 2));
    s.step(Request{0, 2, 1}, c, L);
    s.step(Request{2, 3, 2}, c, L);
    EXPECT_TRUE(s.colocated(c));
    for (int l : c.loads()) {
        EXPECT_LE(l, 3);
    }
    EXPECT_EQ(L.communication, 0);
    EXPECT_EQ(s.total_cost(), L.category(CostCategory::learn));
}

TEST(Learn, ComponentBeyondCapacityIsAModelViolation)
{
    Configuration c = Configuration::balanced(2, 2, 4);
    CostLedger L;
    LearnState s(4, 2, Rational(0));
    s.step(Request{0, 2, 1}, c, L);
    EXPECT_THROW(s.step(Request{2, 3, 2}, c, L), ModelViolation);
}

TEST(Learn, RandomRestrictedInputsStayColocated)
{
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const int ell = 2 + static_cast<int>(seed % 3);
        const int k = 4 + static_cast<int>(seed % 5);
        const int n = ell * k;
        Configuration c = Configuration::balanced(ell, k, n);
        CostLedger L;
        LearnState s(n, k, Rational(1, 4));
        for (const Request& r : random_learning_sequence(ell, k, n, 80, seed)) {
            s.step(r, c, L);
            ASSERT_TRUE(s.colocated(c)) << "seed " << seed;
            for (int l : c.loads()) {
                ASSERT_LE(l, s.capacity());
            }
        }
        EXPECT_EQ(L.communication, 0);
        EXPECT_EQ(L.migration, L.category(CostCategory::learn));
    }
}
