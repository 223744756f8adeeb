#pragma once

#include "obp/errors.hpp"
#include "obp/model.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace obp {

/// Standard-learning-model scheduler: every demand component always sits on
/// a single server, loads stay within floor((1+eps)k).
///
/// On a bridging request the smaller component joins the larger one's server
/// (ties: b's side moves). If the target then overflows, other whole
/// components leave it, smallest first, each to the least-loaded other server.
/// When that gets stuck, all components are re-placed from scratch.
class LearnState {
public:
    LearnState() = default;
    LearnState(int n, int k, Rational epsilon) : graph_(n), capacity_((Rational(1) + epsilon).floor_mul(k)) {}

    const DemandGraph& graph() const { return graph_; }
    std::int64_t capacity() const { return capacity_; }
    std::int64_t total_cost() const { return cost_; }
    /// Times the eviction rule failed and every component was re-placed.
    int repacks() const { return repacks_; }

    void step(const Request& r, Configuration& config, CostLedger& ledger)
    {
        check_request(config, r);
        const MergeReport m = graph_.record_request(r);
        if (m.merged) {
            const ServerId sa = config.server_of(r.a);
            const ServerId sb = config.server_of(r.b);
            if (sa != sb) {
                const bool move_a = m.size_a < m.size_b;
                const ServerId target = move_a ? sb : sa;
                const ProcessId mover = move_a ? r.a : r.b;
                // The merged component's members are all listed under the new
                // root; move only those that are not yet on the target.
                for (ProcessId p : graph_.members(mover)) {
                    move(config, p, target, ledger);
                }
                make_room(config, target, graph_.find(r.a), ledger);
            }
        }
        const std::int64_t before = ledger.communication;
        serve_request(config, r, ledger);
        if (ledger.communication != before) {
            throw ModelViolation("learning scheduler served a split request");
        }
    }

    /// True iff every component is on one server.
    bool colocated(const Configuration& config) const
    {
        for (int root : graph_.roots()) {
            const auto& mem = graph_.members(root);
            for (ProcessId p : mem) {
                if (config.server_of(p) != config.server_of(mem.front())) {
                    return false;
                }
            }
        }
        return true;
    }

private:
    void move(Configuration& config, ProcessId p, ServerId s, CostLedger& ledger)
    {
        if (config.server_of(p) == s) {
            return;
        }
        migrate(config, p, s, ledger);
        ledger.add(CostCategory::learn, 1);
        ++cost_;
    }

    struct Component {
        int root;
        int size;
        ServerId at;
    };

    std::vector<Component> components(const Configuration& config) const
    {
        std::vector<Component> out;
        for (int root : graph_.roots()) {
            const auto& mem = graph_.members(root);
            out.push_back(Component{root, static_cast<int>(mem.size()), plurality(config, mem)});
        }
        return out;
    }

    static ServerId plurality(const Configuration& config, const std::vector<ProcessId>& procs)
    {
        std::vector<int> count(config.num_servers(), 0);
        for (ProcessId p : procs) {
            ++count[config.server_of(p)];
        }
        return static_cast<ServerId>(std::max_element(count.begin(), count.end()) - count.begin());
    }

    void make_room(Configuration& config, ServerId target, int keep_root, CostLedger& ledger)
    {
        if (config.load(target) <= capacity_) {
            return;
        }
        // Smallest other components leave first, each to the least-loaded
        // other server. Planned on a copy of the loads; applied only if the
        // whole plan fits.
        std::vector<Component> others;
        for (const Component& c : components(config)) {
            if (c.root != keep_root && c.at == target) {
                others.push_back(c);
            }
        }
        std::sort(others.begin(), others.end(), [](const Component& x, const Component& y) {
            return x.size != y.size ? x.size < y.size : x.root < y.root;
        });
        std::vector<std::int64_t> load(config.loads().begin(), config.loads().end());
        std::vector<std::pair<int, ServerId>> plan;
        for (const Component& c : others) {
            if (load[target] <= capacity_) {
                break;
            }
            ServerId dest = -1;
            for (ServerId s = 0; s < config.num_servers(); ++s) {
                if (s != target && (dest < 0 || load[s] < load[dest])) {
                    dest = s;
                }
            }
            if (dest < 0 || load[dest] + c.size > capacity_) {
                plan.clear();
                break;
            }
            load[dest] += c.size;
            load[target] -= c.size;
            plan.emplace_back(c.root, dest);
        }
        if (!plan.empty() && load[target] <= capacity_) {
            for (const auto& [root, dest] : plan) {
                for (ProcessId p : graph_.members(root)) {
                    move(config, p, dest, ledger);
                }
            }
            return;
        }
        repack(config, ledger);
    }

    /// Places every component whole, largest first, trying its current
    /// server before the others. Bounded backtracking.
    void repack(Configuration& config, CostLedger& ledger)
    {
        std::vector<Component> comps = components(config);
        std::sort(comps.begin(), comps.end(), [](const Component& x, const Component& y) {
            return x.size != y.size ? x.size > y.size : x.root < y.root;
        });
        const int ell = config.num_servers();
        std::vector<std::int64_t> load(ell, 0);
        std::vector<ServerId> where(comps.size(), -1);
        std::int64_t nodes = 0;
        auto rec = [&](auto&& self, std::size_t i) -> bool {
            if (i == comps.size()) {
                return true;
            }
            if (++nodes > kRepackNodeLimit) {
                return false;
            }
            for (int j = 0; j < ell; ++j) {
                const ServerId s = j == 0 ? comps[i].at : (j <= comps[i].at ? j - 1 : j);
                if (load[s] + comps[i].size > capacity_) {
                    continue;
                }
                load[s] += comps[i].size;
                where[i] = s;
                if (self(self, i + 1)) {
                    return true;
                }
                load[s] -= comps[i].size;
            }
            return false;
        };
        if (!rec(rec, 0)) {
            throw ModelViolation("components do not fit on the servers");
        }
        for (std::size_t i = 0; i < comps.size(); ++i) {
            for (ProcessId p : graph_.members(comps[i].root)) {
                move(config, p, where[i], ledger);
            }
        }
        ++repacks_;
    }

    static constexpr std::int64_t kRepackNodeLimit = 2'000'000;

    DemandGraph graph_;
    std::int64_t capacity_ = 0;
    std::int64_t cost_ = 0;
    int repacks_ = 0;
};

} // namespace obp
