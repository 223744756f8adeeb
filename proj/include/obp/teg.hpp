#pragma once

#include "obp/errors.hpp"
#include "obp/model.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

namespace obp {

using NodeId = int;
using EdgeId = int;

struct TegNode {
    ProcessId process = -1; ///< -1 for a server node
    int time = 0;           ///< server id for server nodes
    bool is_server() const { return process < 0; }
};

enum class EdgeKind : std::uint8_t { migration, communication };

struct TegEdge {
    EdgeKind kind = EdgeKind::migration;
    ProcessId process = -1; ///< migration edges only
    int time = 0;
    ProcessId a = -1; ///< communication endpoints
    ProcessId b = -1;
    NodeId u = -1;
    NodeId v = -1;

    NodeId other(NodeId x) const { return x == u ? v : u; }
};

/// Edge list plus its oriented endpoints; the edges are listed from source to target.
struct TegPath {
    std::vector<EdgeId> edges;
    NodeId source = -1;
    NodeId target = -1;
};

/// Time-expanded request graph. Server nodes come first. Process-time nodes
/// p^t (t >= 1) and the migration edges (p^{t-1}, p^t) are created on demand
/// but always as a contiguous prefix per process, so every id is stable.
class TimeExpandedGraph {
public:
    TimeExpandedGraph() = default;
    TimeExpandedGraph(int ell, std::vector<ServerId> home) : ell_(ell), home_(std::move(home)), chain_(home_.size())
    {
        if (ell <= 0) {
            throw InstanceError("need at least one server");
        }
        for (ServerId s : home_) {
            if (s < 0 || s >= ell) {
                throw InstanceError("home server out of range");
            }
        }
        for (int s = 0; s < ell; ++s) {
            nodes_.push_back(TegNode{-1, s});
        }
    }

    int num_servers() const { return ell_; }
    int num_processes() const { return static_cast<int>(home_.size()); }
    int horizon() const { return horizon_; }
    ServerId home(ProcessId p) const { return home_.at(check(p)); }

    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    std::size_t num_process_time_nodes() const { return nodes_.size() - static_cast<std::size_t>(ell_); }
    std::size_t num_migration_edges() const { return edges_.size() - comm_.size(); }
    std::size_t num_communication_edges() const { return comm_.size(); }

    NodeId server_node(ServerId s) const
    {
        if (s < 0 || s >= ell_) {
            throw InstanceError("server id out of range");
        }
        return s;
    }

    /// Latest layer materialized for p (0 when only the alias p^0 exists).
    int materialized(ProcessId p) const { return static_cast<int>(chain_.at(check(p)).size()); }

    /// Creates p^1..p^t and their migration edges where missing.
    void ensure(ProcessId p, int t)
    {
        check(p);
        if (t > horizon_) {
            throw SequencingError("layer " + std::to_string(t) + " beyond horizon " + std::to_string(horizon_));
        }
        auto& chain = chain_[p];
        while (static_cast<int>(chain.size()) < t) {
            const int layer = static_cast<int>(chain.size()) + 1;
            const NodeId prev = chain.empty() ? home_[p] : chain.back().node;
            const NodeId node = static_cast<NodeId>(nodes_.size());
            nodes_.push_back(TegNode{p, layer});
            const EdgeId e = static_cast<EdgeId>(edges_.size());
            edges_.push_back(TegEdge{EdgeKind::migration, p, layer, -1, -1, prev, node});
            chain.push_back(ChainEntry{node, e});
        }
    }

    /// Node p^t; p^0 is the server node of p's home.
    NodeId node(ProcessId p, int t) const
    {
        check(p);
        if (t == 0) {
            return home_[p];
        }
        const auto& chain = chain_[p];
        if (t < 0 || t > static_cast<int>(chain.size())) {
            throw InstanceError("node p^t not materialized");
        }
        return chain[t - 1].node;
    }

    NodeId node(ProcessId p, int t)
    {
        if (t > 0) {
            ensure(p, t);
        }
        return static_cast<const TimeExpandedGraph&>(*this).node(p, t);
    }

    /// Edge (p^{t-1}, p^t), created if needed.
    EdgeId migration_edge(ProcessId p, int t)
    {
        if (t < 1) {
            throw InstanceError("migration layers start at 1");
        }
        ensure(p, t);
        return chain_[p][t - 1].edge;
    }

    EdgeId migration_edge(ProcessId p, int t) const
    {
        check(p);
        if (t < 1 || t > static_cast<int>(chain_[p].size())) {
            throw InstanceError("migration edge not materialized");
        }
        return chain_[p][t - 1].edge;
    }

    EdgeId communication_edge(int t) const
    {
        if (t < 1 || t > horizon_) {
            throw InstanceError("no request at time " + std::to_string(t));
        }
        return comm_[t - 1];
    }

    const TegNode& node_info(NodeId v) const
    {
        if (v < 0 || v >= static_cast<NodeId>(nodes_.size())) {
            throw InstanceError("unknown node id");
        }
        return nodes_[v];
    }

    const TegEdge& edge(EdgeId e) const
    {
        if (e < 0 || e >= static_cast<EdgeId>(edges_.size())) {
            throw InstanceError("unknown edge id " + std::to_string(e));
        }
        return edges_[e];
    }

    bool has_edge(EdgeId e) const { return e >= 0 && e < static_cast<EdgeId>(edges_.size()); }

    /// Opens layer r.time, materializes it for the scope and both endpoints,
    /// and adds the communication edge. Returns the ids created.
    std::vector<EdgeId> append_request(const Request& r, const std::vector<ProcessId>& scope)
    {
        if (r.time != horizon_ + 1) {
            throw SequencingError("request time " + std::to_string(r.time) + " but horizon is " +
                                  std::to_string(horizon_));
        }
        check(r.a);
        check(r.b);
        if (r.a == r.b) {
            throw InstanceError("request endpoints must differ");
        }
        std::vector<EdgeId> created;
        const auto before = static_cast<EdgeId>(edges_.size());
        ++horizon_;
        for (ProcessId p : scope) {
            ensure(p, horizon_);
        }
        ensure(r.a, horizon_);
        ensure(r.b, horizon_);
        const EdgeId e = static_cast<EdgeId>(edges_.size());
        edges_.push_back(TegEdge{EdgeKind::communication, -1, horizon_, r.a, r.b, chain_[r.a].back().node,
                                 chain_[r.b].back().node});
        comm_.push_back(e);
        for (EdgeId id = before; id < static_cast<EdgeId>(edges_.size()); ++id) {
            created.push_back(id);
        }
        return created;
    }

    /// True iff the path is simple and joins two distinct server nodes with
    /// no server node in its interior.
    bool is_valid_server_path(const TegPath& path) const
    {
        for (EdgeId e : path.edges) {
            edge(e);
        }
        if (path.source < 0 || path.target < 0 || path.source == path.target) {
            return false;
        }
        if (!node_info(path.source).is_server() || !node_info(path.target).is_server()) {
            return false;
        }
        std::vector<NodeId> walk;
        if (!trace(path, walk)) {
            return false;
        }
        for (std::size_t i = 1; i + 1 < walk.size(); ++i) {
            if (nodes_[walk[i]].is_server()) {
                return false;
            }
        }
        return true;
    }

    /// Follows the path from its source. Fills the visited node sequence and
    /// reports false on a broken chain, a repeated node/edge, or a wrong end.
    bool trace(const TegPath& path, std::vector<NodeId>& walk) const
    {
        walk.clear();
        walk.push_back(path.source);
        std::unordered_set<NodeId> seen{path.source};
        std::unordered_set<EdgeId> used;
        NodeId at = path.source;
        for (EdgeId e : path.edges) {
            const TegEdge& info = edge(e);
            if (!used.insert(e).second) {
                return false;
            }
            if (info.u != at && info.v != at) {
                return false;
            }
            at = info.other(at);
            if (!seen.insert(at).second) {
                return false;
            }
            walk.push_back(at);
        }
        return at == path.target;
    }

    /// One line per edge: "MIG p t" or "COM t a b".
    void dump(std::ostream& os) const
    {
        for (const TegEdge& e : edges_) {
            if (e.kind == EdgeKind::migration) {
                os << "MIG " << e.process << ' ' << e.time << '\n';
            } else {
                os << "COM " << e.time << ' ' << e.a << ' ' << e.b << '\n';
            }
        }
    }

private:
    struct ChainEntry {
        NodeId node;
        EdgeId edge;
    };

    ProcessId check(ProcessId p) const
    {
        if (p < 0 || p >= num_processes()) {
            throw InstanceError("process id " + std::to_string(p) + " out of range");
        }
        return p;
    }

    int ell_ = 0;
    int horizon_ = 0;
    std::vector<ServerId> home_;
    std::vector<TegNode> nodes_;
    std::vector<TegEdge> edges_;
    std::vector<EdgeId> comm_;
    std::vector<std::vector<ChainEntry>> chain_;
};

inline bool pairwise_edge_disjoint(const std::vector<TegPath>& paths)
{
    std::unordered_set<EdgeId> used;
    for (const TegPath& p : paths) {
        for (EdgeId e : p.edges) {
            if (!used.insert(e).second) {
                return false;
            }
        }
    }
    return true;
}

inline TegPath reversed(const TegPath& p)
{
    return TegPath{std::vector<EdgeId>(p.edges.rbegin(), p.edges.rend()), p.target, p.source};
}

} // namespace obp
