#include "obp/oracles.hpp"
#include "oracle_checks.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace obp;

namespace {

RequestSequence random_sigma(std::mt19937_64& rng, int n, int len)
{
    RequestSequence s;
    for (int t = 1; t <= len; ++t) {
        const int a = static_cast<int>(rng() % n);
        int b = static_cast<int>(rng() % (n - 1));
        b += b >= a;
        s.push_back(Request{a, b, t});
    }
    return s;
}

} // namespace

TEST(Oracles, EmptySequenceCostsNothing)
{
    const ProblemSpec spec{2, 2, 4, Rational(0), Rational(1)};
    const Configuration c = Configuration::balanced(2, 2, 4);
    EXPECT_EQ(exact_static_opt(spec, c, {}).cost, 0);
    EXPECT_EQ(exact_dynamic_opt(spec, c, {}), 0);
}

TEST(Oracles, SingleCrossRequestWithUnitCapacity)
{
    const ProblemSpec spec{2, 1, 2, Rational(0), Rational(1)};
    const Configuration c = Configuration::balanced(2, 1, 2);
    const RequestSequence s{Request{0, 1, 1}};
    EXPECT_EQ(exact_static_opt(spec, c, s).cost, 1);
    EXPECT_EQ(exact_dynamic_opt(spec, c, s), 1);
}

TEST(Oracles, RepeatedPairIsWorthASwap)
{
    // p1 on server 0 and q1 on server 1; five requests: two migrations beat five messages.
    const ProblemSpec spec{2, 2, 4, Rational(0), Rational(1)};
    const Configuration c = Configuration::balanced(2, 2, 4);
    RequestSequence s;
    for (int t = 1; t <= 5; ++t) {
        s.push_back(Request{0, 2, t});
    }
    const OracleResult st = exact_static_opt(spec, c, s);
    EXPECT_EQ(st.cost, 2);
    EXPECT_EQ(st.placement.server_of(0), st.placement.server_of(2));
    EXPECT_EQ(exact_dynamic_opt(spec, c, s), 2);
}

TEST(Oracles, MatchBruteForceOnTinyInputs)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 150; ++trial) {
        const int ell = 2 + static_cast<int>(rng() % 2);
        const int k = 1 + static_cast<int>(rng() % 3);
        const int n = std::max(2, ell * k - static_cast<int>(rng() % 2));
        if (ell * k < n || n > 8) {
            continue;
        }
        const ProblemSpec spec{ell, k, n, Rational(0), Rational(1)};
        const Configuration c = Configuration::balanced(ell, k, n);
        const RequestSequence s = random_sigma(rng, n, static_cast<int>(rng() % 9));
        const std::int64_t bs = check::brute_static(ell, k, c.homes(), s);
        const std::int64_t bd = check::brute_dynamic(ell, k, c.homes(), s);
        const OracleResult st = exact_static_opt(spec, c, s);
        ASSERT_EQ(st.cost, bs) << "trial " << trial;
        ASSERT_EQ(exact_dynamic_opt(spec, c, s), bd) << "trial " << trial;
        EXPECT_LE(bd, bs);
        for (int l : st.placement.loads()) {
            EXPECT_LE(l, k);
        }
        const OracleResult g = greedy_static_baseline(spec, c, s);
        EXPECT_GE(g.cost, bs);
        for (int l : g.placement.loads()) {
            EXPECT_LE(l, k);
        }
    }
}

TEST(Oracles, TrackerMatchesBatchAndForks)
{
    std::mt19937_64 rng(5);
    const ProblemSpec spec{2, 3, 6, Rational(0), Rational(1)};
    const Configuration c = Configuration::balanced(2, 3, 6);
    const RequestSequence s = random_sigma(rng, 6, 12);
    DynamicOptTracker dp(spec, c, kDefaultOracleBudget);
    EXPECT_EQ(dp.states(), 64);
    RequestSequence prefix;
    for (const Request& r : s) {
        DynamicOptTracker fork = dp;
        dp.step(r);
        prefix.push_back(r);
        EXPECT_EQ(dp.value(), exact_dynamic_opt(spec, c, prefix));
        EXPECT_LE(fork.value(), dp.value());
    }
}

TEST(Oracles, ScaleErrorBeyondBudget)
{
    const ProblemSpec spec{4, 8, 32, Rational(0), Rational(1)};
    const Configuration c = Configuration::balanced(4, 8, 32);
    EXPECT_THROW(exact_static_opt(spec, c, {Request{0, 9, 1}}), ScaleError);
    EXPECT_THROW(exact_dynamic_opt(spec, c, {Request{0, 9, 1}}), ScaleError);
    EXPECT_NO_THROW(greedy_static_baseline(spec, c, {Request{0, 9, 1}}));
}
