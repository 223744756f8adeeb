#pragma once

#include "obp/errors.hpp"
#include "obp/rational.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace obp {

using ProcessId = int;
using ServerId = int;

/// Instance dimensions: ell servers of capacity k hosting n processes, with the
/// online side allowed floor(augmentation * k) processes per server.
struct ProblemSpec {
    int ell = 0;
    int k = 0;
    int n = 0;
    Rational epsilon{0};
    Rational augmentation{1};

    void validate() const
    {
        if (ell <= 0 || k <= 0 || n <= 0) {
            throw InstanceError("ell, k and n must be positive");
        }
        if (static_cast<std::int64_t>(n) > static_cast<std::int64_t>(ell) * k) {
            throw InstanceError("n exceeds ell*k");
        }
        if (epsilon < Rational(0)) {
            throw InstanceError("epsilon must be nonnegative");
        }
        if (augmentation < Rational(1)) {
            throw InstanceError("augmentation factor must be at least 1");
        }
    }

    std::int64_t max_load() const { return augmentation.floor_mul(k); }
};

struct Request {
    ProcessId a = 0;
    ProcessId b = 0;
    int time = 0;

    friend bool operator==(const Request&, const Request&) = default;
};

using RequestSequence = std::vector<Request>;

/// Placement of every process plus its frozen home server.
class Configuration {
public:
    Configuration() = default;

    Configuration(int ell, std::vector<ServerId> home) : home_(std::move(home)), placement_(home_), loads_(ell, 0)
    {
        if (ell <= 0) {
            throw InstanceError("configuration needs at least one server");
        }
        for (ServerId s : home_) {
            if (s < 0 || s >= ell) {
                throw InstanceError("home server out of range");
            }
            ++loads_[s];
        }
    }

    /// Process p lives on server p / k: the standard initial layout.
    static Configuration balanced(int ell, int k, int n)
    {
        std::vector<ServerId> home(n);
        for (int p = 0; p < n; ++p) {
            home[p] = p / k;
        }
        return Configuration(ell, std::move(home));
    }

    int num_processes() const { return static_cast<int>(placement_.size()); }
    int num_servers() const { return static_cast<int>(loads_.size()); }

    ServerId server_of(ProcessId p) const { return placement_.at(check(p)); }
    ServerId home_of(ProcessId p) const { return home_.at(check(p)); }
    int load(ServerId s) const { return loads_.at(check_server(s)); }
    const std::vector<int>& loads() const { return loads_; }
    const std::vector<ServerId>& placement() const { return placement_; }
    const std::vector<ServerId>& homes() const { return home_; }

    /// Move without cost accounting; use migrate() for charged moves.
    void place(ProcessId p, ServerId s)
    {
        check(p);
        check_server(s);
        --loads_[placement_[p]];
        placement_[p] = s;
        ++loads_[s];
    }

    bool valid_process(ProcessId p) const { return p >= 0 && p < num_processes(); }
    bool valid_server(ServerId s) const { return s >= 0 && s < num_servers(); }

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    ProcessId check(ProcessId p) const
    {
        if (!valid_process(p)) {
            throw InstanceError("process id " + std::to_string(p) + " out of range");
        }
        return p;
    }
    ServerId check_server(ServerId s) const
    {
        if (!valid_server(s)) {
            throw InstanceError("server id " + std::to_string(s) + " out of range");
        }
        return s;
    }

    std::vector<ServerId> home_;
    std::vector<ServerId> placement_;
    std::vector<int> loads_;
};

enum class CostCategory : int { flow, large, merge, mono, schedule, learn, reset };
inline constexpr std::size_t kCostCategoryCount = 7;

constexpr std::string_view to_string(CostCategory c)
{
    switch (c) {
    case CostCategory::flow: return "flow";
    case CostCategory::large: return "large";
    case CostCategory::merge: return "merge";
    case CostCategory::mono: return "mono";
    case CostCategory::schedule: return "schedule";
    case CostCategory::learn: return "learn";
    case CostCategory::reset: return "reset";
    }
    return "?";
}

/// Separated migration and communication counters, plus per-category
/// accounting counters that the algorithms fill in.
struct CostLedger {
    std::int64_t migration = 0;
    std::int64_t communication = 0;
    std::array<std::int64_t, kCostCategoryCount> by_category{};

    std::int64_t total() const { return migration + communication; }
    std::int64_t category(CostCategory c) const { return by_category[static_cast<int>(c)]; }
    void add(CostCategory c, std::int64_t amount) { by_category[static_cast<int>(c)] += amount; }

    /// Clustering part of the (2+eps) algorithm's accounting.
    std::int64_t cluster_cost() const
    {
        return category(CostCategory::flow) + category(CostCategory::large) + category(CostCategory::merge) +
               category(CostCategory::mono);
    }

    friend bool operator==(const CostLedger&, const CostLedger&) = default;
};

inline void check_request(const Configuration& config, const Request& r)
{
    if (!config.valid_process(r.a) || !config.valid_process(r.b)) {
        throw InstanceError("request references unknown process");
    }
    if (r.a == r.b) {
        throw InstanceError("request endpoints must differ");
    }
}

/// Pays one unit of communication iff the endpoints sit on different servers.
inline void serve_request(const Configuration& config, const Request& r, CostLedger& ledger)
{
    check_request(config, r);
    if (config.server_of(r.a) != config.server_of(r.b)) {
        ++ledger.communication;
    }
}

/// Moves p to s, charging one migration if the server actually changes.
inline void migrate(Configuration& config, ProcessId p, ServerId s, CostLedger& ledger)
{
    if (!config.valid_server(s)) {
        throw InstanceError("server id " + std::to_string(s) + " out of range");
    }
    if (config.server_of(p) == s) {
        return;
    }
    config.place(p, s);
    ++ledger.migration;
}

struct LoadReport {
    std::vector<int> loads;
    std::int64_t limit = 0;
    std::vector<ServerId> overloaded;

    bool violation() const { return !overloaded.empty(); }
    int max_load() const { return loads.empty() ? 0 : *std::max_element(loads.begin(), loads.end()); }
};

inline LoadReport check_load(const Configuration& config, const ProblemSpec& spec)
{
    LoadReport report{config.loads(), spec.max_load(), {}};
    for (ServerId s = 0; s < config.num_servers(); ++s) {
        if (report.loads[s] > report.limit) {
            report.overloaded.push_back(s);
        }
    }
    return report;
}

struct MergeReport {
    bool merged = false;
    int root_a = -1;
    int root_b = -1;
    int size_a = 0;
    int size_b = 0;
    int root = -1; ///< root of the component holding both endpoints afterwards
};

/// Union-find view of the demand multigraph with explicit member lists.
class DemandGraph {
public:
    DemandGraph() = default;
    explicit DemandGraph(int n) : parent_(n), members_(n)
    {
        for (int p = 0; p < n; ++p) {
            parent_[p] = p;
            members_[p] = {p};
        }
        components_ = n;
    }

    int num_processes() const { return static_cast<int>(parent_.size()); }
    int num_components() const { return components_; }

    int find(ProcessId p) const
    {
        check(p);
        while (parent_[p] != p) {
            parent_[p] = parent_[parent_[p]];
            p = parent_[p];
        }
        return p;
    }

    int size(ProcessId p) const { return static_cast<int>(members_[find(p)].size()); }
    const std::vector<ProcessId>& members(ProcessId p) const { return members_[find(p)]; }
    bool same(ProcessId a, ProcessId b) const { return find(a) == find(b); }
    const std::vector<std::pair<ProcessId, ProcessId>>& edges() const { return edges_; }

    /// Adds the request's edge; the larger member list absorbs the smaller.
    MergeReport record_request(const Request& r)
    {
        check(r.a);
        check(r.b);
        if (r.a == r.b) {
            throw InstanceError("request endpoints must differ");
        }
        edges_.emplace_back(std::min(r.a, r.b), std::max(r.a, r.b));
        MergeReport report;
        report.root_a = find(r.a);
        report.root_b = find(r.b);
        report.size_a = static_cast<int>(members_[report.root_a].size());
        report.size_b = static_cast<int>(members_[report.root_b].size());
        if (report.root_a == report.root_b) {
            report.root = report.root_a;
            return report;
        }
        report.merged = true;
        int big = report.root_a;
        int small = report.root_b;
        if (members_[big].size() < members_[small].size()) {
            std::swap(big, small);
        }
        parent_[small] = big;
        auto& dst = members_[big];
        dst.insert(dst.end(), members_[small].begin(), members_[small].end());
        members_[small].clear();
        members_[small].shrink_to_fit();
        --components_;
        report.root = big;
        return report;
    }

    /// Roots of all components, ascending.
    std::vector<int> roots() const
    {
        std::vector<int> out;
        for (int p = 0; p < num_processes(); ++p) {
            if (parent_[p] == p) {
                out.push_back(p);
            }
        }
        return out;
    }

private:
    void check(ProcessId p) const
    {
        if (p < 0 || p >= num_processes()) {
            throw InstanceError("process id " + std::to_string(p) + " out of range");
        }
    }

    mutable std::vector<int> parent_;
    std::vector<std::vector<ProcessId>> members_;
    std::vector<std::pair<ProcessId, ProcessId>> edges_;
    int components_ = 0;
};

} // namespace obp
