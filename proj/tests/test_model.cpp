#include "obp/model.hpp"
#include "obp/rational.hpp"
#include "oracle_checks.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace obp;

TEST(Rational, ParsesFractionsAndDecimals)
{
    EXPECT_EQ(Rational::parse("1/8"), Rational(1, 8));
    EXPECT_EQ(Rational::parse("0.125"), Rational(1, 8));
    EXPECT_EQ(Rational::parse("2"), Rational(2));
    EXPECT_EQ(Rational::parse("6/4"), Rational(3, 2));
    EXPECT_THROW(Rational::parse("1/0"), Error);
    EXPECT_THROW(Rational::parse("abc"), Error);
}

TEST(Rational, FloorMul)
{
    EXPECT_EQ((Rational(1) + Rational(1, 8)).floor_mul(16), 18);
    EXPECT_EQ((Rational(2) + Rational(1, 8)).floor_mul(3), 6);
    EXPECT_EQ(Rational(1, 3).floor_mul(2), 0);
}

TEST(Rational, ToStringRoundTrips)
{
    for (auto r : {Rational(1, 8), Rational(1, 3), Rational(5, 2), Rational(0), Rational(7)}) {
        EXPECT_EQ(Rational::parse(r.to_string()), r) << r.to_string();
    }
}

TEST(ProblemSpec, Validation)
{
    EXPECT_NO_THROW((ProblemSpec{2, 4, 8, Rational(1, 8), Rational(1)}.validate()));
    EXPECT_THROW((ProblemSpec{2, 4, 9, Rational(0), Rational(1)}.validate()), InstanceError);
    EXPECT_THROW((ProblemSpec{0, 4, 1, Rational(0), Rational(1)}.validate()), InstanceError);
    EXPECT_THROW((ProblemSpec{2, 4, 8, Rational(-1, 2), Rational(1)}.validate()), InstanceError);
    EXPECT_THROW((ProblemSpec{2, 4, 8, Rational(0), Rational(1, 2)}.validate()), InstanceError);
    EXPECT_EQ((ProblemSpec{2, 16, 32, Rational(1, 8), Rational(17, 8)}.max_load()), 34);
}

TEST(Configuration, BalancedLayout)
{
    Configuration c = Configuration::balanced(3, 4, 10);
    EXPECT_EQ(c.num_servers(), 3);
    EXPECT_EQ(c.num_processes(), 10);
    EXPECT_EQ(c.server_of(0), 0);
    EXPECT_EQ(c.server_of(4), 1);
    EXPECT_EQ(c.server_of(9), 2);
    EXPECT_EQ(c.loads(), (std::vector<int>{4, 4, 2}));
    EXPECT_EQ(c.home_of(9), 2);
}

TEST(Configuration, MigrateChargesOnlyRealMoves)
{
    Configuration c = Configuration::balanced(2, 2, 4);
    CostLedger L;
    migrate(c, 0, 0, L);
    EXPECT_EQ(L.migration, 0);
    migrate(c, 0, 1, L);
    EXPECT_EQ(L.migration, 1);
    EXPECT_EQ(c.server_of(0), 1);
    EXPECT_EQ(c.home_of(0), 0);
    EXPECT_EQ(c.load(1), 3);
    EXPECT_THROW(migrate(c, 7, 0, L), InstanceError);
    EXPECT_THROW(migrate(c, 0, 5, L), InstanceError);
}

TEST(Configuration, ServeRequest)
{
    Configuration c = Configuration::balanced(2, 2, 4);
    CostLedger L;
    serve_request(c, Request{0, 1, 1}, L);
    EXPECT_EQ(L.communication, 0);
    serve_request(c, Request{0, 2, 2}, L);
    EXPECT_EQ(L.communication, 1);
    EXPECT_THROW(serve_request(c, Request{1, 1, 3}, L), InstanceError);
    EXPECT_THROW(serve_request(c, Request{1, 9, 3}, L), InstanceError);
}

TEST(Configuration, LoadReport)
{
    ProblemSpec spec{2, 2, 4, Rational(0), Rational(1)};
    Configuration c = Configuration::balanced(2, 2, 4);
    EXPECT_FALSE(check_load(c, spec).violation());
    c.place(0, 1);
    const LoadReport rep = check_load(c, spec);
    EXPECT_TRUE(rep.violation());
    EXPECT_EQ(rep.max_load(), 3);
    EXPECT_EQ(rep.overloaded, std::vector<ServerId>{1});
}

TEST(CostLedger, Categories)
{
    CostLedger L;
    L.add(CostCategory::flow, 3);
    L.add(CostCategory::mono, 2);
    L.add(CostCategory::schedule, 5);
    L.add(CostCategory::learn, 7);
    EXPECT_EQ(L.category(CostCategory::flow), 3);
    EXPECT_EQ(L.cluster_cost(), 5);
    EXPECT_EQ(std::string(to_string(CostCategory::large)), "large");
    L.migration = 4;
    L.communication = 6;
    EXPECT_EQ(L.total(), 10);
}

TEST(DemandGraph, MergeReport)
{
    DemandGraph g(5);
    MergeReport m = g.record_request(Request{0, 1, 1});
    EXPECT_TRUE(m.merged);
    EXPECT_EQ(m.size_a, 1);
    EXPECT_EQ(m.size_b, 1);
    g.record_request(Request{1, 2, 2});
    m = g.record_request(Request{3, 0, 3});
    EXPECT_TRUE(m.merged);
    EXPECT_EQ(m.size_a, 1);
    EXPECT_EQ(m.size_b, 3);
    EXPECT_EQ(g.size(2), 4);
    m = g.record_request(Request{2, 3, 4});
    EXPECT_FALSE(m.merged);
    EXPECT_TRUE(g.same(0, 3));
    EXPECT_FALSE(g.same(0, 4));
    EXPECT_EQ(g.edges().size(), 4u);
}

TEST(DemandGraph, MatchesBfsOnRandomStreams)
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 30);
        DemandGraph g(n);
        std::vector<std::pair<int, int>> edges;
        const int m = static_cast<int>(rng() % (2 * n));
        for (int t = 1; t <= m; ++t) {
            int a = static_cast<int>(rng() % n);
            int b = static_cast<int>(rng() % (n - 1));
            b += b >= a;
            g.record_request(Request{a, b, t});
            edges.emplace_back(a, b);
        }
        const auto label = check::bfs_components(n, edges);
        for (int a = 0; a < n; ++a) {
            int size = 0;
            for (int b = 0; b < n; ++b) {
                EXPECT_EQ(g.same(a, b), label[a] == label[b]);
                size += label[a] == label[b];
            }
            EXPECT_EQ(g.size(a), size);
            EXPECT_EQ(static_cast<int>(g.members(a).size()), size);
        }
    }
}
