#pragma once

#include "obp/errors.hpp"
#include "obp/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace obp {

/// A static placement and its exact cost on the generated sequence.
struct StaticWitness {
    Configuration placement;
    std::int64_t cost = 0;
    std::int64_t migrations = 0;
    std::int64_t communication = 0;
    std::string detail;
};

/// Cost of switching once from `initial` to `placement` and then serving sigma.
inline StaticWitness evaluate_static(const Configuration& initial, const Configuration& placement,
                                     const RequestSequence& sigma)
{
    StaticWitness w{placement, 0, 0, 0, {}};
    for (ProcessId p = 0; p < initial.num_processes(); ++p) {
        w.migrations += initial.server_of(p) != placement.server_of(p);
    }
    for (const Request& r : sigma) {
        w.communication += placement.server_of(r.a) != placement.server_of(r.b);
    }
    w.cost = w.migrations + w.communication;
    return w;
}

inline bool within_capacity(const Configuration& c, int k)
{
    return std::all_of(c.loads().begin(), c.loads().end(), [k](int l) { return l <= k; });
}

class Adversary {
public:
    virtual ~Adversary() = default;
    /// Next request given the attacked algorithm's configuration, or none.
    virtual std::optional<Request> next(const Configuration& alg) = 0;
    virtual StaticWitness static_witness() const = 0;
    const RequestSequence& log() const { return log_; }
    bool capped() const { return capped_; }

protected:
    Request emit(ProcessId a, ProcessId b)
    {
        Request r{a, b, static_cast<int>(log_.size()) + 1};
        log_.push_back(r);
        return r;
    }

    RequestSequence log_;
    bool capped_ = false;
};

/// Chain attack: k chain processes, half on server 0 and half on server 1;
/// keep requesting a chain edge whose endpoints sit on different servers.
class UnlimitedAugAdversary : public Adversary {
public:
    UnlimitedAugAdversary(int ell, int k, std::int64_t max_requests = 1'000'000)
        : ell_(ell), k_(k), max_requests_(max_requests), initial_(Configuration::balanced(ell, k, ell * k))
    {
        if (k < 2 || k % 2 != 0) {
            throw InstanceError("chain attack needs an even k >= 2");
        }
        if (ell < 2) {
            throw InstanceError("chain attack needs two servers");
        }
        for (int i = 0; i < k / 2; ++i) {
            chain_.push_back(i);
        }
        for (int i = 0; i < k / 2; ++i) {
            chain_.push_back(k + i);
        }
        window_ = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(k)) / 2.0)));
        if (window_ >= k / 2) {
            window_ = std::max(0, k / 2 - 1);
        }
        edge_requests_.assign(k, 0);
    }

    int n() const { return ell_ * k_; }
    int window() const { return window_; }
    const std::vector<ProcessId>& chain() const { return chain_; }
    /// Requests issued on chain edge (p_i, p_{i+1}), i in [1, k-1].
    std::int64_t edge_requests(int i) const { return edge_requests_.at(i); }

    std::optional<Request> next(const Configuration& alg) override
    {
        int best = -1;
        for (int i = 1; i < k_; ++i) {
            if (alg.server_of(chain_[i - 1]) == alg.server_of(chain_[i])) {
                continue;
            }
            if (best < 0 || std::abs(i - k_ / 2) < std::abs(best - k_ / 2)) {
                best = i;
            }
        }
        if (best < 0) {
            return std::nullopt;
        }
        if (static_cast<std::int64_t>(log_.size()) >= max_requests_) {
            capped_ = true;
            return std::nullopt;
        }
        ++edge_requests_[best];
        return emit(chain_[best - 1], chain_[best]);
    }

    /// Cut the least-requested chain edge in the window around the middle and
    /// balance the two servers with uninvolved processes.
    StaticWitness static_witness() const override
    {
        const int half = k_ / 2;
        int cut = -1;
        for (int i = half - window_; i <= half + window_; ++i) {
            if (i < 1 || i > k_ - 1) {
                continue;
            }
            if (cut < 0 || edge_requests_[i] < edge_requests_[cut]) {
                cut = i;
            }
        }
        if (log_.empty()) {
            cut = half;
        }
        Configuration pl = initial_;
        for (int j = 0; j < k_; ++j) {
            pl.place(chain_[j], j < cut ? 0 : 1);
        }
        // Dummies: processes of servers 0/1 outside the chain, highest ids first.
        auto dummies = [&](ServerId s) {
            std::vector<ProcessId> out;
            for (ProcessId p = (s + 1) * k_ - 1; p >= s * k_ + half; --p) {
                out.push_back(p);
            }
            return out;
        };
        const int shift = std::abs(cut - half);
        const ServerId from = cut < half ? 1 : 0;
        const auto pool = dummies(from);
        for (int j = 0; j < shift; ++j) {
            pl.place(pool.at(j), 1 - from);
        }
        StaticWitness w = evaluate_static(initial_, pl, log_);
        w.detail = "cut edge " + std::to_string(cut);
        return w;
    }

private:
    int ell_;
    int k_;
    int window_ = 1;
    std::int64_t max_requests_;
    Configuration initial_;
    std::vector<ProcessId> chain_;
    std::vector<std::int64_t> edge_requests_;
};

/// Largest feasible eps' <= eps with eps'*k a power of two of at least 2.
inline std::optional<Rational> round_down_feasible_eps(Rational eps, int k)
{
    const std::int64_t target = eps.floor_mul(k);
    std::int64_t p = 1;
    while (p * 2 <= target) {
        p *= 2;
    }
    if (p < 2) {
        return std::nullopt;
    }
    return Rational(p, k);
}

/// Rank-doubling attack with a special two-server component, for
/// algorithms with augmentation 1+eps. Requires eps*k = 2^m, m >= 1.
class OneEpsAdversary : public Adversary {
public:
    enum class Stage { stitch, repair, merge, done };

    OneEpsAdversary(int ell, int k, Rational eps, std::int64_t max_requests = 2'000'000)
        : ell_(ell), k_(k), eps_(eps), max_requests_(max_requests), initial_(Configuration::balanced(ell, k, ell * k)),
          graph_(ell * k)
    {
        if (ell < 2) {
            throw InstanceError("the attack needs at least two servers");
        }
        const std::int64_t ek = eps.floor_mul(k);
        if (Rational(ek) != eps * Rational(k) || ek < 2 || (ek & (ek - 1)) != 0) {
            throw InstanceError("eps*k must be a power of two of at least 2");
        }
        if (4 * ek > k) {
            throw InstanceError("eps too large for k: special and padding processes do not fit");
        }
        ek_ = static_cast<int>(ek);
        m_ = 0;
        while ((1 << m_) < ek_) {
            ++m_;
        }
        const int n = ell * k;
        role_.assign(n, Role::colored);
        for (ServerId s = 0; s < ell; ++s) {
            for (int j = 0; j < ek_; ++j) {
                role_[(s + 1) * k - 1 - j] = Role::padding;
            }
        }
        for (int j = 0; j < 3 * ek_; ++j) {
            special_.push_back(j);
            role_[j] = Role::special;
        }
        for (int j = 0; j < 3 * ek_; ++j) {
            special_.push_back(k + j);
            role_[k + j] = Role::special;
        }
        rank_.assign(ell, 0);
        reached_m_order_.clear();
        special_edge_requests_.assign(special_.size(), 0);
    }

    int n() const { return ell_ * k_; }
    int eps_k() const { return ek_; }
    int m() const { return m_; }
    Stage stage() const { return stage_; }
    const std::vector<int>& ranks() const { return rank_; }
    std::int64_t special_splits() const { return R_; }
    int iterations() const { return iterations_; }
    /// Iterations whose merge phase found no spread-out color below rank m.
    int unspread_iterations() const { return unspread_iterations_; }
    const std::vector<ProcessId>& special_chain() const { return special_; }
    bool is_padding(ProcessId p) const { return role_.at(p) == Role::padding; }
    bool is_special(ProcessId p) const { return role_.at(p) == Role::special; }
    const DemandGraph& graph() const { return graph_; }
    /// Colors in the order they reached rank m.
    const std::vector<ServerId>& finish_order() const { return reached_m_order_; }

    /// Component sizes must agree with a recount from the request log.
    bool bookkeeping_consistent() const
    {
        DemandGraph g(n());
        for (const Request& r : log_) {
            g.record_request(r);
        }
        for (ProcessId p = 0; p < n(); ++p) {
            if (g.size(p) != graph_.size(p) || g.find(p) != g.find(graph_.members(p).front())) {
                return false;
            }
        }
        return true;
    }

    /// Sizes of c-colored components split into regular (size 2^rank) and extra.
    void color_components(ServerId c, std::vector<int>& regular, std::vector<int>& extra) const
    {
        regular.clear();
        extra.clear();
        for (int root : graph_.roots()) {
            const ProcessId first = graph_.members(root).front();
            if (role_[first] != Role::colored || initial_.home_of(first) != c) {
                continue;
            }
            (graph_.size(root) == (1 << rank_[c]) ? regular : extra).push_back(root);
        }
    }

    std::optional<Request> next(const Configuration& alg) override
    {
        if (stage_ == Stage::done) {
            return std::nullopt;
        }
        if (static_cast<std::int64_t>(log_.size()) >= max_requests_) {
            capped_ = true;
            stage_ = Stage::done;
            return std::nullopt;
        }
        if (stage_ == Stage::stitch) {
            const int i = stitched_;
            ++stitched_;
            if (stitched_ == static_cast<int>(special_.size()) - 1) {
                stage_ = Stage::repair;
            }
            return issue(alg, special_[i], special_[i + 1], i);
        }
        while (true) {
            if (stage_ == Stage::merge) {
                if (!pending_.empty()) {
                    auto [a, b] = pending_.front();
                    pending_.erase(pending_.begin());
                    return issue(alg, a, b, -1);
                }
                ++rank_[merging_color_];
                if (rank_[merging_color_] == m_) {
                    reached_m_order_.push_back(merging_color_);
                }
                ++iterations_;
                stage_ = Stage::repair;
            }
            if (auto r = repair(alg)) {
                return r;
            }
            if (std::all_of(rank_.begin(), rank_.end(), [&](int r) { return r >= m_; })) {
                stage_ = Stage::done;
                return std::nullopt;
            }
            plan_merges(alg);
            stall_ = pending_.empty() ? stall_ + 1 : 0;
            if (stall_ > 4 * ell_ * (m_ + 2)) {
                throw ConstructionError("merge phases stopped producing requests");
            }
            stage_ = Stage::merge;
        }
    }

    /// Cheaper of the two constructions; see static_witness_cut and static_witness_move.
    StaticWitness static_witness() const override
    {
        StaticWitness cut = static_witness_cut();
        std::optional<StaticWitness> mv = static_witness_move();
        if (mv && mv->cost < cut.cost) {
            return *mv;
        }
        return cut;
    }

    /// Cut the special chain at its least-requested edge near the middle.
    StaticWitness static_witness_cut() const
    {
        const int mid = 3 * ek_;
        // Capped at eps*k so the padding processes can always rebalance.
        const int w = std::min(static_cast<int>(std::floor(std::sqrt(static_cast<double>(R_)))), ek_);
        const int lo = mid - w;
        const int hi = std::max(mid, mid + w - 1);
        int cut = -1;
        for (int i = lo; i <= hi; ++i) {
            if (cut < 0 || special_edge_requests_[i - 1] < special_edge_requests_[cut - 1]) {
                cut = i;
            }
        }
        Configuration pl = initial_;
        for (int j = 0; j < static_cast<int>(special_.size()); ++j) {
            pl.place(special_[j], j < cut ? 0 : 1);
        }
        balance_with(pl, {}, -1);
        StaticWitness wt = evaluate_static(initial_, pl, log_);
        wt.detail = "cut special edge " + std::to_string(cut);
        return wt;
    }

    /// Move the special component onto the last color to reach rank m and
    /// push whole components of that color out to restore capacity.
    std::optional<StaticWitness> static_witness_move() const
    {
        if (reached_m_order_.size() != static_cast<std::size_t>(ell_)) {
            return std::nullopt;
        }
        const ServerId s = reached_m_order_.back();
        Configuration pl = initial_;
        for (ProcessId p : special_) {
            pl.place(p, s);
        }
        std::vector<int> regular;
        std::vector<int> extra;
        color_components(s, regular, extra);
        std::vector<std::vector<ProcessId>> units;
        for (int root : regular) {
            units.push_back(graph_.members(root));
        }
        if (!balance_with(pl, units, s)) {
            return std::nullopt;
        }
        StaticWitness wt = evaluate_static(initial_, pl, log_);
        wt.detail = "special component on server " + std::to_string(s);
        return wt;
    }

private:
    enum class Role : std::uint8_t { colored, special, padding };

    Request issue(const Configuration& alg, ProcessId a, ProcessId b, int special_edge)
    {
        if (special_edge >= 0) {
            ++special_edge_requests_[special_edge];
            if (alg.server_of(a) != alg.server_of(b)) {
                ++R_;
            }
        }
        Request r = emit(a, b);
        graph_.record_request(r);
        return r;
    }

    std::optional<Request> repair(const Configuration& alg)
    {
        if (graph_.same(special_.front(), special_.back())) {
            for (int i = 0; i + 1 < static_cast<int>(special_.size()); ++i) {
                if (alg.server_of(special_[i]) != alg.server_of(special_[i + 1])) {
                    return issue(alg, special_[i], special_[i + 1], i);
                }
            }
        }
        for (int root : graph_.roots()) {
            const auto& mem = graph_.members(root);
            if (mem.size() < 2 || role_[mem.front()] == Role::special) {
                continue;
            }
            std::vector<ProcessId> sorted = mem;
            std::sort(sorted.begin(), sorted.end());
            const ProcessId u = sorted.front();
            for (ProcessId v : sorted) {
                if (alg.server_of(v) != alg.server_of(u)) {
                    return issue(alg, u, v, -1);
                }
            }
        }
        return std::nullopt;
    }

    ServerId main_server(const Configuration& alg, ServerId c) const
    {
        std::vector<int> cnt(ell_, 0);
        // Only processes in c-colored components vote.
        for (ProcessId p = 0; p < n(); ++p) {
            if (role_[p] == Role::colored && initial_.home_of(p) == c) {
                ++cnt[alg.server_of(p)];
            }
        }
        return static_cast<ServerId>(std::max_element(cnt.begin(), cnt.end()) - cnt.begin());
    }

    int off_main(const Configuration& alg, ServerId c) const
    {
        const ServerId ms = main_server(alg, c);
        int off = 0;
        for (ProcessId p = 0; p < n(); ++p) {
            if (role_[p] == Role::colored && initial_.home_of(p) == c && alg.server_of(p) != ms) {
                ++off;
            }
        }
        return off;
    }

    void plan_merges(const Configuration& alg)
    {
        // Prefer a spread-out color below rank m, then any spread-out color.
        // Against algorithms without the 1+eps load limit there may be none;
        // then take the lowest rank below m.
        ServerId chosen = -1;
        for (int pass = 0; pass < 2 && chosen < 0; ++pass) {
            for (ServerId c = 0; c < ell_; ++c) {
                if ((pass == 1 || rank_[c] < m_) && off_main(alg, c) >= ek_) {
                    chosen = c;
                    break;
                }
            }
        }
        if (chosen < 0) {
            ++unspread_iterations_;
            for (ServerId c = 0; c < ell_; ++c) {
                if (rank_[c] < m_ && (chosen < 0 || rank_[c] < rank_[chosen])) {
                    chosen = c;
                }
            }
        }
        if (chosen < 0) {
            throw ConstructionError("merge phase started with every rank at m");
        }
        merging_color_ = chosen;
        std::vector<int> regular;
        std::vector<int> extra;
        color_components(chosen, regular, extra);
        auto lowest = [&](int root) { return *std::min_element(graph_.members(root).begin(), graph_.members(root).end()); };
        std::sort(regular.begin(), regular.end(), [&](int x, int y) { return lowest(x) < lowest(y); });
        const ServerId ms = main_server(alg, chosen);
        auto where = [&](int root) { return alg.server_of(graph_.members(root).front()); };
        std::vector<char> used(regular.size(), 0);
        pending_.clear();
        auto pair_up = [&](std::size_t i, bool need_cross) {
            for (std::size_t j = 0; j < regular.size(); ++j) {
                if (j == i || used[j] || (need_cross && where(regular[j]) == where(regular[i]))) {
                    continue;
                }
                used[i] = used[j] = 1;
                pending_.emplace_back(lowest(regular[i]), lowest(regular[j]));
                return true;
            }
            return false;
        };
        for (std::size_t i = 0; i < regular.size(); ++i) {
            if (!used[i] && where(regular[i]) != ms) {
                pair_up(i, true);
            }
        }
        for (std::size_t i = 0; i < regular.size(); ++i) {
            if (!used[i]) {
                pair_up(i, true) || pair_up(i, false);
            }
        }
        for (std::size_t i = 0; i < regular.size(); ++i) {
            if (!used[i] && !extra.empty()) {
                pending_.emplace_back(lowest(regular[i]), lowest(extra.front()));
            }
        }
    }

    /// Restores every server to exactly k processes (when n = ell*k) by moving
    /// whole units from `source`, then single padding processes.
    bool balance_with(Configuration& pl, const std::vector<std::vector<ProcessId>>& units, ServerId source) const
    {
        std::vector<char> unit_used(units.size(), 0);
        for (ServerId d = 0; d < ell_; ++d) {
            while (source >= 0 && d != source && pl.load(d) < k_ && pl.load(source) > k_) {
                bool moved = false;
                for (std::size_t u = 0; u < units.size(); ++u) {
                    const auto& unit = units[u];
                    if (unit_used[u] || pl.server_of(unit.front()) != source) {
                        continue;
                    }
                    const int sz = static_cast<int>(unit.size());
                    if (pl.load(d) + sz <= k_ && pl.load(source) - sz >= k_) {
                        for (ProcessId p : unit) {
                            pl.place(p, d);
                        }
                        unit_used[u] = 1;
                        moved = true;
                        break;
                    }
                }
                if (!moved) {
                    break;
                }
            }
        }
        // Padding processes fix the rest, one at a time.
        for (ServerId over = 0; over < ell_; ++over) {
            for (ProcessId p = 0; p < n() && pl.load(over) > k_; ++p) {
                if (role_[p] != Role::padding || pl.server_of(p) != over) {
                    continue;
                }
                for (ServerId d = 0; d < ell_; ++d) {
                    if (pl.load(d) < k_) {
                        pl.place(p, d);
                        break;
                    }
                }
            }
        }
        return within_capacity(pl, k_);
    }

    int ell_;
    int k_;
    Rational eps_;
    int ek_ = 0;
    int m_ = 0;
    std::int64_t max_requests_;
    Configuration initial_;
    DemandGraph graph_;
    std::vector<Role> role_;
    std::vector<ProcessId> special_;
    std::vector<int> rank_;
    std::vector<ServerId> reached_m_order_;
    std::vector<std::int64_t> special_edge_requests_;
    std::vector<std::pair<ProcessId, ProcessId>> pending_;
    Stage stage_ = Stage::stitch;
    int stitched_ = 0;
    int merging_color_ = -1;
    int iterations_ = 0;
    int unspread_iterations_ = 0;
    int stall_ = 0;
    std::int64_t R_ = 0;
};

/// Drives an algorithm against an adversary; returns the request count.
template <class Alg>
std::int64_t run_attack(Adversary& adv, Alg& alg)
{
    std::int64_t count = 0;
    while (auto r = adv.next(alg.configuration())) {
        alg.step(*r);
        ++count;
    }
    return count;
}

} // namespace obp
