#pragma once

#include "obp/errors.hpp"
#include "obp/teg.hpp"

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace obp {

/// Edge-disjoint server-to-server paths; each carries one unit of dual flow,
/// so the path count lower-bounds the dynamic optimum.
class PathSet {
public:
    void add_path(TegPath path, const TimeExpandedGraph& g)
    {
        if (!g.is_valid_server_path(path)) {
            throw ShapeError("not a simple server-to-server path");
        }
        for (EdgeId e : path.edges) {
            if (used_.count(e) != 0) {
                throw OverlapError("edge " + std::to_string(e) + " already carries a path");
            }
        }
        used_.insert(path.edges.begin(), path.edges.end());
        paths_.push_back(std::move(path));
    }

    /// Union with another certificate built over disjoint processes.
    void absorb(PathSet&& other)
    {
        for (EdgeId e : other.used_) {
            if (used_.count(e) != 0) {
                throw OverlapError("certificates share edge " + std::to_string(e));
            }
        }
        used_.insert(other.used_.begin(), other.used_.end());
        for (auto& p : other.paths_) {
            paths_.push_back(std::move(p));
        }
        other.paths_.clear();
        other.used_.clear();
    }

    std::int64_t lower_bound() const { return static_cast<std::int64_t>(paths_.size()); }
    std::size_t size() const { return paths_.size(); }
    bool empty() const { return paths_.empty(); }
    const std::vector<TegPath>& paths() const { return paths_; }
    bool uses(EdgeId e) const { return used_.count(e) != 0; }

    /// Recounts congestion from the stored edge lists, ignoring the cached set.
    bool verify_feasible(const TimeExpandedGraph& g) const
    {
        std::unordered_map<EdgeId, int> congestion;
        for (const TegPath& p : paths_) {
            for (EdgeId e : p.edges) {
                if (!g.has_edge(e) || ++congestion[e] > 1) {
                    return false;
                }
            }
            if (!g.is_valid_server_path(p)) {
                return false;
            }
        }
        return true;
    }

    /// Test hook: appends a path with no checks at all.
    void force_add_unchecked(TegPath path)
    {
        used_.insert(path.edges.begin(), path.edges.end());
        paths_.push_back(std::move(path));
    }

private:
    std::vector<TegPath> paths_;
    std::unordered_set<EdgeId> used_;
};

} // namespace obp
