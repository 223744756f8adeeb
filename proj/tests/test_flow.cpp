#include "obp/flow.hpp"
#include "flow_script.hpp"
#include "oracle_checks.hpp"

#include <gtest/gtest.h>

using namespace obp;

namespace {

// Two colors, three processes each: 0,1,2 on server 0 and 3,4,5 on server 1.
struct Two {
    std::vector<ServerId> home{0, 0, 0, 1, 1, 1};
    TimeExpandedGraph g{2, home};
    FlowInstance inst;
    int t = 0;

    explicit Two(int z = 10) : inst({InitialPiece{0, 0, {0, 1, 2}}, InitialPiece{1, 1, {3, 4, 5}}}, 2, z, home) {}

    FlowEvent req(ProcessId a, ProcessId b)
    {
        const Request r{a, b, ++t};
        g.append_request(r, inst.scope());
        return inst.handle_request(r, g);
    }
};

} // namespace

TEST(Flow, ConstructionValidates)
{
    std::vector<ServerId> home{0, 1};
    EXPECT_THROW(FlowInstance({InitialPiece{0, 0, {1}}}, 5, 3, home), InstanceError);
    EXPECT_THROW(FlowInstance({InitialPiece{0, 0, {0}}, InitialPiece{1, 0, {}}}, 5, 3, home), InstanceError);
    EXPECT_THROW(FlowInstance({InitialPiece{0, 0, {0}}}, 5, 0, home), InstanceError);
    FlowInstance ok({InitialPiece{0, 0, {0}}, InitialPiece{1, 1, {1}}}, 5, 3, home);
    EXPECT_EQ(ok.scope_size(), 2u);
    EXPECT_EQ(ok.free_count(), 0);
    EXPECT_TRUE(ok.special().members.empty());
}

TEST(Flow, SamePieceIsIgnored)
{
    Two s;
    const FlowEvent ev = s.req(0, 1);
    EXPECT_EQ(ev.kind, FlowEventKind::ignored);
    EXPECT_EQ(ev.cost, 0);
    EXPECT_EQ(s.inst.update_cost(), 0);
}

TEST(Flow, CrossColorCreatesPath)
{
    Two s;
    const FlowEvent ev = s.req(0, 3);
    EXPECT_EQ(ev.kind, FlowEventKind::path_created);
    EXPECT_EQ(s.inst.certificate().lower_bound(), 1);
    EXPECT_EQ(s.inst.free_count(), 2);
    EXPECT_TRUE(s.inst.is_free(0));
    EXPECT_TRUE(s.inst.is_free(3));
    EXPECT_TRUE(s.inst.piece_of(0).special());
    EXPECT_TRUE(s.inst.piece_of(3).special());
    EXPECT_EQ(ev.cost, 2);
    const TegPath& p = s.inst.certificate().paths().front();
    EXPECT_EQ(p.source, s.g.server_node(0));
    EXPECT_EQ(p.target, s.g.server_node(1));
    EXPECT_TRUE(check::paths_feasible(s.g, s.inst.certificate().paths()));
}

TEST(Flow, SpecialEndpointIsAbsorbed)
{
    Two s;
    s.req(0, 3);
    const FlowEvent ev = s.req(0, 1);
    EXPECT_EQ(ev.kind, FlowEventKind::absorbed);
    EXPECT_EQ(ev.cost, 1);
    EXPECT_EQ(s.inst.piece_of(0).uid, 0);
    EXPECT_TRUE(s.inst.is_free(0));
    EXPECT_EQ(s.inst.piece(0).free_count, 1);
    EXPECT_EQ(check::witness_violation(s.inst, 0, s.g), "");
    EXPECT_EQ(check::witness_violation(s.inst, 1, s.g), "");
}

TEST(Flow, SpecialSpecialIsIgnored)
{
    Two s;
    s.req(0, 3);
    EXPECT_EQ(s.req(0, 3).kind, FlowEventKind::ignored);
}

TEST(Flow, WitnessUndefinedInSpecialPiece)
{
    Two s;
    s.req(0, 3);
    EXPECT_THROW(s.inst.witness_path(0, s.g), UndefinedWitnessError);
    EXPECT_NO_THROW(s.inst.witness_path(1, s.g));
}

TEST(Flow, TerminatesAtZ)
{
    Two s(2);
    s.req(1, 4);
    EXPECT_TRUE(s.inst.terminated());
    const Request r{1, 2, ++s.t};
    s.g.append_request(r, s.inst.scope());
    EXPECT_THROW(s.inst.handle_request(r, s.g), LifecycleError);
}

TEST(Flow, ScopeAndSequencingErrors)
{
    std::vector<ServerId> home{0, 1, 0};
    TimeExpandedGraph g(2, home);
    FlowInstance inst({InitialPiece{0, 0, {0}}, InitialPiece{1, 1, {1}}}, 2, 5, home);
    const Request out{0, 2, 1};
    g.append_request(out, inst.scope());
    EXPECT_THROW(inst.handle_request(out, g), ScopeError);
    const Request stale{0, 1, 1};
    g.append_request(Request{0, 1, 2}, inst.scope());
    EXPECT_THROW(inst.handle_request(stale, g), SequencingError);
}

TEST(Flow, MergeKeepsLargerPieceAndRejectsOverlap)
{
    std::vector<ServerId> home{0, 0, 0, 1};
    FlowInstance a({InitialPiece{0, 0, {0, 1}}}, 10, 5, home);
    FlowInstance b({InitialPiece{2, 0, {2}}, InitialPiece{3, 1, {3}}}, 11, 5, home);
    InstanceMergeReport rep;
    FlowInstance m = FlowInstance::merge(a, b, &rep);
    EXPECT_EQ(m.scope_size(), 4u);
    EXPECT_EQ(m.piece_of(2).uid, 0);
    EXPECT_EQ(m.piece_of(3).uid, 3);
    EXPECT_EQ(rep.adopted_pieces, std::vector<int>{3});
    ASSERT_FALSE(rep.piece_merges.empty());
    EXPECT_EQ(rep.piece_merges.front().surviving_uid, 0);
    EXPECT_EQ(rep.piece_merges.front().absorbed_size, 1);
    EXPECT_THROW(FlowInstance::merge(m, a), ScopeError);
}

TEST(Flow, AuditIsCleanOnScriptedRun)
{
    Two s;
    s.req(0, 3);
    s.req(1, 0);
    s.req(4, 3);
    s.req(2, 5);
    EXPECT_TRUE(s.inst.audit(s.g, true).empty());
    check::ScriptStats st;
    check::check_instance(s.inst, s.g, st, "scripted");
    EXPECT_TRUE(st.failures.empty()) << st.failures.front();
}

TEST(Flow, IndependentChecksCatchCorruptedCertificate)
{
    Two s;
    s.req(0, 3);
    s.inst.certificate_mut().force_add_unchecked(s.inst.certificate().paths().front());
    check::ScriptStats st;
    check::check_instance(s.inst, s.g, st, "corrupt");
    EXPECT_FALSE(st.failures.empty());
}

TEST(Flow, RandomScriptsHoldEveryInvariant)
{
    std::int64_t paths = 0;
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        const check::ScriptStats st = check::run_flow_script(seed);
        ASSERT_TRUE(st.failures.empty()) << st.failures.front();
        paths += st.paths;
    }
    EXPECT_GT(paths, 100);
}
