#pragma once

#include "obp/errors.hpp"
#include "obp/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace obp {

inline constexpr std::int64_t kDefaultOracleBudget = 10'000'000;

struct OracleResult {
    Configuration placement;
    std::int64_t cost = 0;
};

namespace detail {

/// ell^n, or -1 once it passes `limit`.
inline std::int64_t state_count(int ell, int n, std::int64_t limit)
{
    std::int64_t c = 1;
    for (int i = 0; i < n; ++i) {
        if (c > limit / ell) {
            return -1;
        }
        c *= ell;
    }
    return c;
}

/// Request multiplicities per unordered pair.
inline std::map<std::pair<int, int>, std::int64_t> pair_weights(const RequestSequence& sigma)
{
    std::map<std::pair<int, int>, std::int64_t> w;
    for (const Request& r : sigma) {
        ++w[{std::min(r.a, r.b), std::max(r.a, r.b)}];
    }
    return w;
}

} // namespace detail

/// Best fixed placement (capacity k), one switch from `initial`, by depth-first
/// enumeration with a running-cost cutoff.
inline OracleResult exact_static_opt(const ProblemSpec& spec, const Configuration& initial,
                                     const RequestSequence& sigma, std::int64_t budget = kDefaultOracleBudget)
{
    const int n = initial.num_processes();
    const int ell = initial.num_servers();
    if (detail::state_count(ell, n, budget) < 0) {
        throw ScaleError("static enumeration exceeds the budget");
    }
    for (const Request& r : sigma) {
        check_request(initial, r);
    }
    // Neighbour lists towards lower ids, so a pair is charged once both are placed.
    std::vector<std::vector<std::pair<int, std::int64_t>>> lower(n);
    for (const auto& [pr, w] : detail::pair_weights(sigma)) {
        lower[pr.second].emplace_back(pr.first, w);
    }
    std::vector<int> cur(n, 0);
    std::vector<int> load(ell, 0);
    std::vector<int> best_pl = initial.placement();
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    auto rec = [&](auto&& self, int i, std::int64_t cost) -> void {
        if (cost >= best) {
            return;
        }
        if (i == n) {
            best = cost;
            best_pl = cur;
            return;
        }
        // Try the initial server first so ties keep processes at home.
        const int home = initial.server_of(i);
        for (int step = 0; step < ell; ++step) {
            const int s = step == 0 ? home : (step <= home ? step - 1 : step);
            if (load[s] >= spec.k) {
                continue;
            }
            std::int64_t add = s != home;
            for (auto [j, w] : lower[i]) {
                add += cur[j] != s ? w : 0;
            }
            ++load[s];
            cur[i] = s;
            self(self, i + 1, cost + add);
            --load[s];
        }
    };
    rec(rec, 0, 0);
    if (best == std::numeric_limits<std::int64_t>::max()) {
        throw InstanceError("no placement within capacity");
    }
    Configuration pl = initial;
    for (ProcessId p = 0; p < n; ++p) {
        pl.place(p, best_pl[p]);
    }
    return OracleResult{pl, best};
}

/// Dynamic optimum as an incremental layered shortest path over all
/// capacity-feasible configurations. Migrations precede serving in each
/// step; the min-plus step with the Hamming metric runs one coordinate at a
/// time. Copyable, so prefix-sharing sweeps can fork it.
class DynamicOptTracker {
public:
    DynamicOptTracker(const ProblemSpec& spec, const Configuration& initial, std::int64_t state_budget = kDefaultOracleBudget)
        : n_(initial.num_processes()), ell_(initial.num_servers()), initial_(initial)
    {
        states_ = detail::state_count(ell_, n_, state_budget);
        if (states_ < 0) {
            throw ScaleError("dynamic state space exceeds the budget");
        }
        stride_.assign(n_ + 1, 1);
        for (int i = 0; i < n_; ++i) {
            stride_[i + 1] = stride_[i] * ell_;
        }
        auto feasible = std::make_shared<std::vector<char>>(states_, 1);
        std::vector<int> load(ell_);
        for (std::int64_t x = 0; x < states_; ++x) {
            std::fill(load.begin(), load.end(), 0);
            for (int i = 0; i < n_; ++i) {
                if (++load[digit(x, i)] > spec.k) {
                    (*feasible)[x] = 0;
                    break;
                }
            }
        }
        feasible_ = std::move(feasible);
        std::int64_t start = 0;
        for (int i = 0; i < n_; ++i) {
            start += stride_[i] * initial.server_of(i);
        }
        dist_.assign(states_, kInf);
        dist_[start] = 0;
    }

    void step(const Request& r)
    {
        check_request(initial_, r);
        for (int i = 0; i < n_; ++i) {
            const std::int64_t st = stride_[i];
            const std::int64_t block = stride_[i + 1];
            for (std::int64_t outer = 0; outer < states_; outer += block) {
                for (std::int64_t base = outer; base < outer + st; ++base) {
                    std::int64_t lo = kInf;
                    for (std::int64_t x = base; x < base + block; x += st) {
                        lo = std::min(lo, dist_[x]);
                    }
                    if (lo >= kInf) {
                        continue;
                    }
                    for (std::int64_t x = base; x < base + block; x += st) {
                        dist_[x] = std::min(dist_[x], lo + 1);
                    }
                }
            }
        }
        const std::vector<char>& feasible = *feasible_;
        for (std::int64_t x = 0; x < states_; ++x) {
            if (!feasible[x]) {
                dist_[x] = kInf;
            } else if (dist_[x] < kInf && digit(x, r.a) != digit(x, r.b)) {
                dist_[x] += 1;
            }
        }
    }

    std::int64_t value() const { return *std::min_element(dist_.begin(), dist_.end()); }
    std::int64_t states() const { return states_; }

private:
    static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

    int digit(std::int64_t x, int i) const { return static_cast<int>((x / stride_[i]) % ell_); }

    int n_;
    int ell_;
    Configuration initial_;
    std::int64_t states_ = 0;
    std::vector<std::int64_t> stride_;
    // Shared between forks; never modified after construction.
    std::shared_ptr<const std::vector<char>> feasible_;
    std::vector<std::int64_t> dist_;
};

/// Dynamic optimum over the whole sequence; the budget bounds ell^n * |sigma|.
inline std::int64_t exact_dynamic_opt(const ProblemSpec& spec, const Configuration& initial,
                                      const RequestSequence& sigma, std::int64_t budget = kDefaultOracleBudget)
{
    const std::int64_t states = detail::state_count(initial.num_servers(), initial.num_processes(), budget);
    if (states < 0 || states * std::max<std::int64_t>(1, static_cast<std::int64_t>(sigma.size())) > budget) {
        throw ScaleError("dynamic state space exceeds the budget");
    }
    DynamicOptTracker dp(spec, initial, budget);
    for (const Request& r : sigma) {
        dp.step(r);
    }
    return dp.value();
}

/// Upper-bound reference for large instances: place demand components first
/// (largest first) on a server that fits them, preferring their home majority,
/// then the untouched processes, preferring home. A component that fits
/// nowhere is split greedily along servers with spare room.
inline OracleResult greedy_static_baseline(const ProblemSpec& spec, const Configuration& initial,
                                           const RequestSequence& sigma)
{
    const int n = initial.num_processes();
    const int ell = initial.num_servers();
    DemandGraph g(n);
    for (const Request& r : sigma) {
        check_request(initial, r);
        g.record_request(r);
    }
    std::vector<int> roots;
    for (int root : g.roots()) {
        if (g.size(root) > 1) {
            roots.push_back(root);
        }
    }
    std::sort(roots.begin(), roots.end(), [&](int a, int b) {
        return g.size(a) != g.size(b) ? g.size(a) > g.size(b) : a < b;
    });
    std::vector<int> load(ell, 0);
    std::vector<int> target(n, -1);
    for (int root : roots) {
        auto members = g.members(root);
        std::sort(members.begin(), members.end());
        std::vector<int> votes(ell, 0);
        for (ProcessId p : members) {
            ++votes[initial.server_of(p)];
        }
        std::vector<int> order(ell);
        for (int s = 0; s < ell; ++s) {
            order[s] = s;
        }
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return votes[a] > votes[b]; });
        const int size = static_cast<int>(members.size());
        int chosen = -1;
        for (int s : order) {
            if (load[s] + size <= spec.k) {
                chosen = s;
                break;
            }
        }
        if (chosen >= 0) {
            for (ProcessId p : members) {
                target[p] = chosen;
            }
            load[chosen] += size;
            continue;
        }
        // Split: fill servers in vote order, keeping each member at home if possible.
        for (ProcessId p : members) {
            const int h = initial.server_of(p);
            int s = load[h] < spec.k ? h : -1;
            for (int c : order) {
                if (s >= 0) {
                    break;
                }
                if (load[c] < spec.k) {
                    s = c;
                }
            }
            if (s < 0) {
                throw InstanceError("no capacity left for the baseline");
            }
            target[p] = s;
            ++load[s];
        }
    }
    for (ProcessId p = 0; p < n; ++p) {
        if (target[p] >= 0) {
            continue;
        }
        const int h = initial.server_of(p);
        int s = load[h] < spec.k ? h : -1;
        for (int c = 0; c < ell && s < 0; ++c) {
            if (load[c] < spec.k) {
                s = c;
            }
        }
        if (s < 0) {
            throw InstanceError("no capacity left for the baseline");
        }
        target[p] = s;
        ++load[s];
    }
    Configuration pl = initial;
    for (ProcessId p = 0; p < n; ++p) {
        pl.place(p, target[p]);
    }
    std::int64_t cost = 0;
    for (ProcessId p = 0; p < n; ++p) {
        cost += pl.server_of(p) != initial.server_of(p);
    }
    for (const Request& r : sigma) {
        cost += pl.server_of(r.a) != pl.server_of(r.b);
    }
    return OracleResult{pl, cost};
}

} // namespace obp
