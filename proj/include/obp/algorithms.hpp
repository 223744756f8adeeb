#pragma once

#include "obp/certificate.hpp"
#include "obp/errors.hpp"
#include "obp/flow.hpp"
#include "obp/learn.hpp"
#include "obp/model.hpp"
#include "obp/teg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace obp {

struct StepRecord {
    int t = 0;
    Request request;
    FlowEventKind event = FlowEventKind::ignored;
    std::int64_t migrations = 0;
    std::int64_t communication = 0;
    CostLedger ledger;
    std::vector<int> loads;
};

/// Shared plumbing: owns the configuration and ledger, validates requests,
/// tracks the peak load and per-step load violations.
class OnlineAlgorithm {
public:
    OnlineAlgorithm(ProblemSpec spec, Configuration initial) : spec_(spec), config_(std::move(initial)), initial_(config_)
    {
        spec_.validate();
        if (config_.num_processes() != spec_.n || config_.num_servers() != spec_.ell) {
            throw InstanceError("initial configuration does not match the problem dimensions");
        }
        peak_load_ = *std::max_element(config_.loads().begin(), config_.loads().end());
    }
    virtual ~OnlineAlgorithm() = default;

    virtual std::string_view name() const = 0;
    /// Independent copy of the full state, for forking runs along a shared prefix.
    virtual std::unique_ptr<OnlineAlgorithm> clone() const = 0;
    virtual std::int64_t lower_bound() const { return 0; }
    /// Empty when every internal invariant holds; `deep` adds witness checks.
    virtual std::vector<std::string> audit(bool deep) { (void)deep; return {}; }

    void step(const Request& r)
    {
        check_request(config_, r);
        if (r.time != time_ + 1) {
            throw SequencingError("request time " + std::to_string(r.time) + " after " + std::to_string(time_));
        }
        time_ = r.time;
        const CostLedger before = ledger_;
        last_event_ = FlowEventKind::ignored;
        do_step(r);
        const int peak = *std::max_element(config_.loads().begin(), config_.loads().end());
        peak_load_ = std::max(peak_load_, peak);
        if (peak > spec_.max_load()) {
            ++load_violations_;
        }
        if (observer_) {
            observer_(StepRecord{r.time, r, last_event_, ledger_.migration - before.migration,
                                 ledger_.communication - before.communication, ledger_, config_.loads()});
        }
    }

    void run(const RequestSequence& sigma)
    {
        for (const Request& r : sigma) {
            step(r);
        }
    }

    const ProblemSpec& spec() const { return spec_; }
    const Configuration& configuration() const { return config_; }
    const Configuration& initial() const { return initial_; }
    const CostLedger& ledger() const { return ledger_; }
    int time() const { return time_; }
    int peak_load() const { return peak_load_; }
    int load_violations() const { return load_violations_; }
    void set_observer(std::function<void(const StepRecord&)> f) { observer_ = std::move(f); }

protected:
    virtual void do_step(const Request& r) = 0;

    void move(ProcessId p, ServerId s) { migrate(config_, p, s, ledger_); }

    ProblemSpec spec_;
    Configuration config_;
    Configuration initial_;
    CostLedger ledger_;
    FlowEventKind last_event_ = FlowEventKind::ignored;

private:
    int time_ = 0;
    int peak_load_ = 0;
    int load_violations_ = 0;
    std::function<void(const StepRecord&)> observer_;
};

inline int one_eps_z(int k, int ell, Rational eps)
{
    const double lg = std::log2(static_cast<double>(k));
    const double a = std::sqrt(static_cast<double>(k) * ell * lg);
    const double b = eps.to_double() * k;
    return integer_z(std::min(a, b));
}

inline int two_eps_z(int k) { return integer_z(std::sqrt(static_cast<double>(k))); }

/// Plurality server of a process set under config; ties go to the lowest id.
inline ServerId plurality_server(const Configuration& config, const std::vector<ProcessId>& procs)
{
    std::vector<int> count(config.num_servers(), 0);
    for (ProcessId p : procs) {
        ++count[config.server_of(p)];
    }
    return static_cast<ServerId>(std::max_element(count.begin(), count.end()) - count.begin());
}

/// Two-phase algorithm with augmentation 1+eps: FLOW over all processes until
/// it stops, then a reset to the initial configuration and a LEARN replay.
class OneEpsAlgorithm : public OnlineAlgorithm {
public:
    OneEpsAlgorithm(int ell, int k, int n, Rational eps)
        : OneEpsAlgorithm(ProblemSpec{ell, k, n, eps, Rational(1) + eps}, Configuration::balanced(ell, k, n))
    {
    }

    OneEpsAlgorithm(ProblemSpec spec, Configuration initial)
        : OnlineAlgorithm(spec, std::move(initial)), z_(one_eps_z(spec_.k, spec_.ell, spec_.epsilon)),
          graph_(spec_.ell, config_.homes())
    {
        std::vector<InitialPiece> layout(spec_.ell);
        for (ServerId s = 0; s < spec_.ell; ++s) {
            layout[s] = InitialPiece{s, s, {}};
        }
        for (ProcessId p = 0; p < spec_.n; ++p) {
            layout[config_.home_of(p)].members.push_back(p);
        }
        flow_ = FlowInstance(std::move(layout), spec_.ell, z_, config_.homes());
    }

    std::string_view name() const override { return "one-eps"; }
    std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<OneEpsAlgorithm>(*this); }
    std::int64_t lower_bound() const override { return flow_.certificate().lower_bound(); }
    int z() const { return z_; }
    bool in_learn_phase() const { return learning_; }
    const FlowInstance& flow() const { return flow_; }
    const TimeExpandedGraph& graph() const { return graph_; }
    TimeExpandedGraph& graph_mut() { return graph_; }
    std::int64_t phase_one_cost() const { return phase_one_cost_; }
    std::int64_t reset_cost() const { return ledger_.category(CostCategory::reset); }
    const LearnState& learner() const { return learn_; }

    std::vector<std::string> audit(bool deep) override
    {
        std::vector<std::string> out = flow_.audit(graph_, deep);
        if (learning_) {
            if (!learn_.colocated(config_)) {
                out.push_back("learn phase left a component split");
            }
            return out;
        }
        for (ProcessId p = 0; p < spec_.n; ++p) {
            if (config_.server_of(p) != target_of(p)) {
                out.push_back("process " + std::to_string(p) + " not on its piece's server");
                break;
            }
        }
        return out;
    }

protected:
    void do_step(const Request& r) override
    {
        if (learning_) {
            learn_.step(r, config_, ledger_);
            return;
        }
        buffer_.push_back(r);
        graph_.append_request(r, {});
        FlowEvent ev = flow_.handle_request(r, graph_);
        last_event_ = ev.kind;
        ledger_.add(CostCategory::flow, ev.cost);
        if (ev.terminated) {
            serve_request(config_, r, ledger_);
            phase_one_cost_ = ledger_.total();
            switch_to_learn();
            return;
        }
        for (const PieceMove& m : ev.moves) {
            move(m.process, piece_server(flow_.piece(m.to_uid)));
        }
        serve_request(config_, r, ledger_);
        phase_one_cost_ = ledger_.total();
    }

private:
    /// Colored pieces live on their color; the special piece on server 0.
    static ServerId piece_server(const Piece& pc) { return pc.special() ? 0 : pc.color; }

    ServerId target_of(ProcessId p) const { return piece_server(flow_.piece_of(p)); }

    void switch_to_learn()
    {
        const std::int64_t before = ledger_.migration;
        for (ProcessId p = 0; p < spec_.n; ++p) {
            move(p, initial_.server_of(p));
        }
        ledger_.add(CostCategory::reset, ledger_.migration - before);
        learning_ = true;
        learn_ = LearnState(spec_.n, spec_.k, spec_.epsilon);
        for (const Request& q : buffer_) {
            learn_.step(q, config_, ledger_);
        }
        buffer_.clear();
    }

    int z_;
    TimeExpandedGraph graph_;
    FlowInstance flow_;
    bool learning_ = false;
    LearnState learn_;
    RequestSequence buffer_;
    std::int64_t phase_one_cost_ = 0;
};

/// LEARN stand-in on its own, from the initial configuration.
class LearnOnlyAlgorithm : public OnlineAlgorithm {
public:
    LearnOnlyAlgorithm(int ell, int k, int n, Rational eps)
        : OnlineAlgorithm(ProblemSpec{ell, k, n, eps, Rational(1) + eps}, Configuration::balanced(ell, k, n)),
          learn_(n, k, eps)
    {
    }

    std::string_view name() const override { return "learn-only"; }
    std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<LearnOnlyAlgorithm>(*this); }
    const LearnState& learner() const { return learn_; }

    std::vector<std::string> audit(bool) override
    {
        if (!learn_.colocated(config_)) {
            return {"component split"};
        }
        return {};
    }

protected:
    void do_step(const Request& r) override { learn_.step(r, config_, ledger_); }

private:
    LearnState learn_;
};

/// Greedy baseline with unlimited augmentation: on a bridging request the
/// smaller component joins the larger one's server (ties: b's side moves).
class StrawmanAlgorithm : public OnlineAlgorithm {
public:
    StrawmanAlgorithm(int ell, int k, int n)
        : OnlineAlgorithm(ProblemSpec{ell, k, n, Rational(0), Rational(ell)}, Configuration::balanced(ell, k, n)),
          graph_(n)
    {
    }

    std::string_view name() const override { return "strawman"; }
    std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<StrawmanAlgorithm>(*this); }

protected:
    void do_step(const Request& r) override
    {
        const MergeReport m = graph_.record_request(r);
        if (m.merged && config_.server_of(r.a) != config_.server_of(r.b)) {
            const bool move_a = m.size_a < m.size_b;
            const ServerId target = config_.server_of(move_a ? r.b : r.a);
            for (ProcessId p : graph_.members(r.a)) {
                move(p, target);
            }
        } else if (config_.server_of(r.a) != config_.server_of(r.b)) {
            // Components may be split only if the input broke co-location.
            const ServerId target = config_.server_of(r.a);
            for (ProcessId p : graph_.members(r.a)) {
                move(p, target);
            }
        }
        serve_request(config_, r, ledger_);
    }

private:
    DemandGraph graph_;
};

/// Never migrates; pays communication for every split request.
class NeverMigrateAlgorithm : public OnlineAlgorithm {
public:
    NeverMigrateAlgorithm(int ell, int k, int n)
        : OnlineAlgorithm(ProblemSpec{ell, k, n, Rational(0), Rational(1)}, Configuration::balanced(ell, k, n))
    {
    }
    std::string_view name() const override { return "never-migrate"; }
    std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<NeverMigrateAlgorithm>(*this); }

protected:
    void do_step(const Request& r) override { serve_request(config_, r, ledger_); }
};

/// Clustering plus scheduling with augmentation 2+eps. Each small demand
/// component runs its own FLOW instance; stopped instances become large
/// clusters. Clusters are realized on servers after every request.
class TwoEpsAlgorithm : public OnlineAlgorithm {
public:
    struct LargeCluster {
        int uid;
        ServerId server;
    };

    TwoEpsAlgorithm(int ell, int k, int n, Rational eps)
        : TwoEpsAlgorithm(ProblemSpec{ell, k, n, eps, Rational(2) + eps}, Configuration::balanced(ell, k, n))
    {
    }

    TwoEpsAlgorithm(ProblemSpec spec, Configuration initial)
        : OnlineAlgorithm(spec, std::move(initial)), z_(two_eps_z(spec_.k)), graph_(spec_.ell, config_.homes()),
          demand_(spec_.n), next_large_uid_(2 * spec_.n)
    {
        for (ProcessId v = 0; v < spec_.n; ++v) {
            const ServerId c = config_.home_of(v);
            small_.emplace(v, FlowInstance({InitialPiece{2 * v, c, {v}}}, 2 * v + 1, z_, config_.homes()));
        }
    }

    std::string_view name() const override { return "two-eps"; }
    std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<TwoEpsAlgorithm>(*this); }
    int z() const { return z_; }
    std::int64_t rebalance_trigger() const { return (Rational(2) + spec_.epsilon).floor_mul(spec_.k); }
    int rebalances() const { return rebalances_; }
    int post_rebalance_violations() const { return post_rebalance_violations_; }
    const TimeExpandedGraph& graph() const { return graph_; }
    TimeExpandedGraph& graph_mut() { return graph_; }
    const DemandGraph& demand() const { return demand_; }
    const std::unordered_map<int, FlowInstance>& small_components() const { return small_; }
    const std::unordered_map<int, LargeCluster>& large_components() const { return large_; }
    const std::vector<PathSet>& retired_certificates() const { return retired_; }

    std::int64_t lower_bound() const override
    {
        std::int64_t total = retired_paths_;
        for (const auto& [root, inst] : small_) {
            total += inst.certificate().lower_bound();
        }
        return total;
    }

    std::int64_t free_total() const
    {
        std::int64_t total = retired_free_;
        for (const auto& [root, inst] : small_) {
            total += inst.free_count();
        }
        return total;
    }

    /// All certificate paths ever produced, in a stable order.
    std::vector<TegPath> all_paths() const
    {
        std::vector<TegPath> out;
        for (const PathSet& ps : retired_) {
            out.insert(out.end(), ps.paths().begin(), ps.paths().end());
        }
        std::vector<int> roots;
        for (const auto& [root, inst] : small_) {
            roots.push_back(root);
        }
        std::sort(roots.begin(), roots.end());
        for (int root : roots) {
            const auto& ps = small_.at(root).certificate().paths();
            out.insert(out.end(), ps.begin(), ps.end());
        }
        return out;
    }

    /// Server that process p's cluster is scheduled on.
    ServerId cluster_server(ProcessId p) const
    {
        const int root = demand_.find(p);
        auto lit = large_.find(root);
        if (lit != large_.end()) {
            return lit->second.server;
        }
        return piece_server(small_.at(root).piece_of(p));
    }

    std::vector<std::string> audit(bool deep) override
    {
        std::vector<std::string> out;
        for (auto& [root, inst] : small_) {
            for (auto& msg : inst.audit(graph_, deep)) {
                out.push_back("component " + std::to_string(root) + ": " + msg);
            }
            for (const auto& [uid, pc] : inst.pieces()) {
                if (!pc.special() && pc.assignment.colored && 2 * pc.free_count > pc.size()) {
                    out.push_back("colored-cluster piece with more than half free");
                }
            }
        }
        if (free_total() != 2 * lower_bound()) {
            out.push_back("global free count differs from twice the path count");
        }
        for (ProcessId p = 0; p < spec_.n; ++p) {
            if (config_.server_of(p) != cluster_server(p)) {
                out.push_back("process " + std::to_string(p) + " not on its cluster's server");
                break;
            }
        }
        const auto roots = demand_.roots();
        if (roots.size() != small_.size() + large_.size()) {
            out.push_back("component registry out of sync");
        }
        for (int root : roots) {
            if ((small_.count(root) != 0) == (large_.count(root) != 0)) {
                out.push_back("component " + std::to_string(root) + " not in exactly one registry");
            }
        }
        if (ledger_.communication != 0) {
            out.push_back("communication paid");
        }
        if (ledger_.migration > ledger_.cluster_cost() + ledger_.category(CostCategory::schedule)) {
            out.push_back("migrations exceed the clustering plus scheduling charge");
        }
        std::vector<int> colored_load(spec_.ell, 0);
        for (const auto& [root, inst] : small_) {
            for (const auto& [uid, pc] : inst.pieces()) {
                if (!pc.special() && pc.assignment.colored) {
                    colored_load[pc.color] += pc.size();
                }
            }
        }
        for (int c = 0; c < spec_.ell; ++c) {
            if (colored_load[c] > 2 * spec_.k) {
                out.push_back("colored cluster above 2k");
            }
        }
        return out;
    }

protected:
    void do_step(const Request& r) override
    {
        graph_.append_request(r, {});
        const MergeReport m = demand_.record_request(r);
        if (m.merged) {
            if (m.size_a + m.size_b > spec_.k) {
                throw ModelViolation("demand component of size " + std::to_string(m.size_a + m.size_b) +
                                     " exceeds k: the input breaks the learning restriction");
            }
            comp_merge(m);
        }
        const int root = demand_.find(r.a);
        if (auto it = small_.find(root); it != small_.end()) {
            FlowInstance& inst = it->second;
            FlowEvent ev = inst.handle_request(r, graph_);
            last_event_ = ev.kind;
            ledger_.add(CostCategory::flow, ev.cost);
            std::vector<int> changed;
            for (const PieceMove& mv : ev.moves) {
                changed.push_back(mv.from_uid);
                changed.push_back(mv.to_uid);
            }
            std::sort(changed.begin(), changed.end());
            changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
            for (int uid : changed) {
                if (inst.pieces().count(uid) != 0) {
                    piece_changed(inst, uid, inst.piece(uid).assignment);
                }
            }
            if (inst.terminated()) {
                form_large(root);
            }
        }
        rebalance();
        serve_request(config_, r, ledger_);
    }

private:
    ServerId piece_server(const Piece& pc) const { return pc.assignment.colored ? pc.color : pc.assignment.server; }

    /// Three-way rule on a changed piece; `prior` is its assignment before the change.
    void apply_piece_rules(FlowInstance& inst, int uid, ClusterAssignment prior)
    {
        const Piece& pc = inst.piece(uid);
        if (pc.special()) {
            return;
        }
        const int s = pc.size();
        const int f = pc.free_count;
        bool colored = prior.colored;
        if (2 * f > s) {
            colored = false;
        } else if (4 * f <= s) {
            colored = true;
        }
        const bool was_colored = inst.piece(uid).assignment.colored;
        if (colored == was_colored) {
            return;
        }
        ledger_.add(CostCategory::mono, s);
        if (colored) {
            inst.set_assignment(uid, ClusterAssignment{true, pc.color});
        } else {
            inst.set_assignment(uid, ClusterAssignment{false, pc.color});
        }
    }

    void piece_changed(FlowInstance& inst, int uid, ClusterAssignment prior)
    {
        apply_piece_rules(inst, uid, prior);
        const Piece& pc = inst.piece(uid);
        if (!pc.assignment.colored && pc.assignment.server < 0 && pc.size() > 0) {
            inst.set_assignment(uid, ClusterAssignment{false, plurality_server(config_, pc.members)});
        }
        const ServerId s = piece_server(inst.piece(uid));
        if (s < 0) {
            return;
        }
        for (ProcessId p : inst.piece(uid).members) {
            move(p, s);
        }
    }

    void retire(FlowInstance& inst)
    {
        retired_paths_ += inst.certificate().lower_bound();
        retired_free_ += inst.free_count();
        retired_.push_back(std::move(inst.certificate_mut()));
    }

    void form_large(int root)
    {
        FlowInstance& inst = small_.at(root);
        retire(inst);
        small_.erase(root);
        const auto& members = demand_.members(root);
        ledger_.add(CostCategory::large, static_cast<std::int64_t>(members.size()));
        const ServerId s = plurality_server(config_, members);
        for (ProcessId p : members) {
            move(p, s);
        }
        large_.emplace(root, LargeCluster{next_large_uid_++, s});
    }

    void comp_merge(const MergeReport& m)
    {
        const int ra = m.root_a;
        const int rb = m.root_b;
        const int root = m.root;
        const bool a_large = large_.count(ra) != 0;
        const bool b_large = large_.count(rb) != 0;
        const int size_a = m.size_a;
        const int size_b = m.size_b;
        if (a_large && b_large) {
            const bool keep_a = size_a >= size_b;
            const LargeCluster keep = large_.at(keep_a ? ra : rb);
            ledger_.add(CostCategory::large, std::min(size_a, size_b));
            large_.erase(ra);
            large_.erase(rb);
            for (ProcessId p : demand_.members(root)) {
                move(p, keep.server);
            }
            large_.emplace(root, keep);
            return;
        }
        if (a_large || b_large) {
            const int lr = a_large ? ra : rb;
            const int sr = a_large ? rb : ra;
            const LargeCluster keep = large_.at(lr);
            FlowInstance& inst = small_.at(sr);
            ledger_.add(CostCategory::large, static_cast<std::int64_t>(inst.scope_size()));
            retire(inst);
            small_.erase(sr);
            large_.erase(lr);
            for (ProcessId p : demand_.members(root)) {
                move(p, keep.server);
            }
            large_.emplace(root, keep);
            return;
        }
        FlowInstance ia = std::move(small_.at(ra));
        FlowInstance ib = std::move(small_.at(rb));
        small_.erase(ra);
        small_.erase(rb);
        const bool keep_a = ia.scope_size() >= ib.scope_size();
        InstanceMergeReport rep;
        FlowInstance merged = keep_a ? FlowInstance::merge(std::move(ia), std::move(ib), &rep)
                                     : FlowInstance::merge(std::move(ib), std::move(ia), &rep);
        auto [it, inserted] = small_.emplace(root, std::move(merged));
        FlowInstance& inst = it->second;
        for (const PieceMerge& pm : rep.piece_merges) {
            const bool mono = pm.surviving_assignment.colored && pm.absorbed_assignment.colored;
            if (!mono) {
                ledger_.add(CostCategory::merge, std::min(pm.surviving_size, pm.absorbed_size));
            }
            piece_changed(inst, pm.surviving_uid, pm.surviving_assignment);
        }
        if (inst.terminated()) {
            form_large(root);
        }
    }

    struct Movable {
        int uid;
        int size;
        int root;      ///< component root
        int piece_uid; ///< -1 for a large cluster
    };

    std::vector<Movable> movable_on(ServerId s) const
    {
        std::vector<Movable> out;
        for (const auto& [root, inst] : small_) {
            for (const auto& [uid, pc] : inst.pieces()) {
                if (!pc.assignment.colored && pc.assignment.server == s && pc.size() > 0) {
                    out.push_back(Movable{uid, pc.size(), root, uid});
                }
            }
        }
        for (const auto& [root, lc] : large_) {
            if (lc.server == s) {
                out.push_back(Movable{lc.uid, static_cast<int>(demand_.size(root)), root, -1});
            }
        }
        std::sort(out.begin(), out.end(), [](const Movable& x, const Movable& y) { return x.uid < y.uid; });
        return out;
    }

    void rebalance()
    {
        const std::int64_t trigger = rebalance_trigger();
        const auto& loads = config_.loads();
        if (std::none_of(loads.begin(), loads.end(), [&](int l) { return l > trigger; })) {
            return;
        }
        ++rebalances_;
        const int cap = 2 * spec_.k;
        for (ServerId s = 0; s < spec_.ell; ++s) {
            if (config_.load(s) <= cap) {
                continue;
            }
            for (const Movable& c : movable_on(s)) {
                if (config_.load(s) <= cap) {
                    break;
                }
                ServerId dest = -1;
                for (ServerId d = 0; d < spec_.ell; ++d) {
                    if (d != s && (dest < 0 || config_.load(d) < config_.load(dest))) {
                        dest = d;
                    }
                }
                if (dest < 0 || config_.load(dest) > spec_.k) {
                    throw ModelViolation("no server with load at most k to receive a cluster");
                }
                ledger_.add(CostCategory::schedule, c.size);
                if (c.piece_uid >= 0) {
                    FlowInstance& inst = small_.at(c.root);
                    inst.set_assignment(c.piece_uid, ClusterAssignment{false, dest});
                    for (ProcessId p : inst.piece(c.piece_uid).members) {
                        move(p, dest);
                    }
                } else {
                    large_.at(c.root).server = dest;
                    for (ProcessId p : demand_.members(c.root)) {
                        move(p, dest);
                    }
                }
            }
            if (config_.load(s) > cap) {
                throw ModelViolation("rebalance found no movable cluster");
            }
        }
        for (int l : config_.loads()) {
            if (l > cap) {
                ++post_rebalance_violations_;
            }
        }
    }

    int z_;
    TimeExpandedGraph graph_;
    DemandGraph demand_;
    std::unordered_map<int, FlowInstance> small_;
    std::unordered_map<int, LargeCluster> large_;
    std::vector<PathSet> retired_;
    std::int64_t retired_paths_ = 0;
    std::int64_t retired_free_ = 0;
    int next_large_uid_;
    int rebalances_ = 0;
    int post_rebalance_violations_ = 0;
};

inline std::unique_ptr<OnlineAlgorithm> make_algorithm(std::string_view id, int ell, int k, int n, Rational eps)
{
    if (id == "one-eps") {
        return std::make_unique<OneEpsAlgorithm>(ell, k, n, eps);
    }
    if (id == "two-eps") {
        return std::make_unique<TwoEpsAlgorithm>(ell, k, n, eps);
    }
    if (id == "learn-only") {
        return std::make_unique<LearnOnlyAlgorithm>(ell, k, n, eps);
    }
    if (id == "strawman") {
        return std::make_unique<StrawmanAlgorithm>(ell, k, n);
    }
    if (id == "never-migrate") {
        return std::make_unique<NeverMigrateAlgorithm>(ell, k, n);
    }
    throw ConfigError("unknown algorithm '" + std::string(id) + "'");
}

} // namespace obp
