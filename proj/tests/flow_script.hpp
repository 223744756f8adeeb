#pragma once

// Randomized scripted FLOW runs with the independent checks applied after
// every event. Shared by the unit tests and the acceptance binary.

#include "obp/flow.hpp"
#include "obp/teg.hpp"
#include "oracle_checks.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace obp::check {

struct ScriptStats {
    std::int64_t events = 0;
    std::int64_t paths = 0;
    std::int64_t witness_checks = 0;
    std::vector<std::string> failures;
};

/// Everything the event-level properties demand, recomputed from public state.
inline void check_instance(const FlowInstance& inst, TimeExpandedGraph& g, ScriptStats& st, const std::string& tag)
{
    auto fail = [&](const std::string& m) {
        if (st.failures.size() < 20) {
            st.failures.push_back(tag + ": " + m);
        }
    };
    std::int64_t free_seen = 0;
    for (ProcessId p : inst.scope()) {
        free_seen += inst.is_free(p);
    }
    const std::int64_t F = free_seen;
    const std::int64_t paths = static_cast<std::int64_t>(inst.certificate().size());
    if (F != inst.free_count()) {
        fail("reported free count disagrees with a recount");
    }
    if (F != 2 * paths) {
        fail("|F| = " + std::to_string(F) + " but 2|P| = " + std::to_string(2 * paths));
    }
    const std::int64_t x = inst.special().size();
    if (inst.update_cost() > F * F - x) {
        fail("update cost " + std::to_string(inst.update_cost()) + " above |F|^2 - |X| = " + std::to_string(F * F - x));
    }
    if (!inst.certificate().verify_feasible(g) || !paths_feasible(g, inst.certificate().paths())) {
        fail("certificate infeasible");
    }
    for (ProcessId p : inst.special().members) {
        if (!inst.is_free(p)) {
            fail("linked process " + std::to_string(p) + " in the special piece");
        }
    }
    for (const auto& [uid, pc] : inst.pieces()) {
        if (pc.special()) {
            continue;
        }
        for (ProcessId p : pc.members) {
            ++st.witness_checks;
            const std::string v = witness_violation(inst, p, g);
            if (!v.empty()) {
                fail("witness of " + std::to_string(p) + ": " + v);
            }
        }
    }
    if (inst.terminated() != (F >= inst.z())) {
        fail("termination flag out of sync");
    }
}

/// One random instance, optionally built from two disjoint halves that merge
/// partway through. Requests stay inside the current scope.
inline ScriptStats run_flow_script(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
    const int ell = pick(2, 4);
    std::vector<ServerId> home;
    std::vector<std::vector<ProcessId>> by_color(ell);
    for (int c = 0; c < ell; ++c) {
        const int m = pick(1, 5);
        for (int j = 0; j < m; ++j) {
            by_color[c].push_back(static_cast<ProcessId>(home.size()));
            home.push_back(c);
        }
    }
    const int n = static_cast<int>(home.size());
    const int z = pick(1, 2 * n);
    const bool split = rng() % 2 == 0;
    TimeExpandedGraph g(ell, home);
    ScriptStats st;

    // Halves: even-indexed members per color in one, odd in the other.
    auto layout = [&](int parity) {
        std::vector<InitialPiece> out;
        for (int c = 0; c < ell; ++c) {
            InitialPiece ip{parity * ell + c, c, {}};
            for (std::size_t j = 0; j < by_color[c].size(); ++j) {
                if (!split || static_cast<int>(j % 2) == parity) {
                    ip.members.push_back(by_color[c][j]);
                }
            }
            out.push_back(ip);
        }
        return out;
    };
    std::vector<FlowInstance> parts;
    parts.emplace_back(layout(0), 2 * ell, z, home);
    if (split) {
        parts.emplace_back(layout(1), 2 * ell + 1, z, home);
    }
    const int steps = pick(1, 60);
    const int merge_at = split ? pick(1, steps) : -1;
    for (int t = 1; t <= steps; ++t) {
        if (t == merge_at && parts.size() == 2) {
            parts[0] = FlowInstance::merge(std::move(parts[0]), std::move(parts[1]));
            parts.pop_back();
            check_instance(parts[0], g, st, "seed " + std::to_string(seed) + " after merge");
        }
        const std::size_t which = rng() % parts.size();
        FlowInstance& inst = parts[which];
        if (inst.terminated()) {
            break;
        }
        const auto scope = inst.scope();
        if (scope.size() < 2) {
            break;
        }
        const ProcessId a = scope[rng() % scope.size()];
        ProcessId b = a;
        while (b == a) {
            b = scope[rng() % scope.size()];
        }
        const Request r{a, b, t};
        g.append_request(r, scope);
        const FlowEvent ev = inst.handle_request(r, g);
        ++st.events;
        st.paths += ev.kind == FlowEventKind::path_created;
        check_instance(inst, g, st, "seed " + std::to_string(seed) + " t=" + std::to_string(t));
    }
    return st;
}

} // namespace obp::check
