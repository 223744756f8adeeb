#pragma once

#include "obp/certificate.hpp"
#include "obp/errors.hpp"
#include "obp/model.hpp"
#include "obp/teg.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace obp {

/// Where the scheduler keeps a piece: inside the colored cluster of its
/// color, or as its own cluster on `server` (-1 while unplaced).
struct ClusterAssignment {
    bool colored = true;
    ServerId server = -1;

    friend bool operator==(const ClusterAssignment&, const ClusterAssignment&) = default;
};

struct Piece {
    int uid = -1;
    ServerId color = -1; ///< -1 marks the special piece
    std::vector<ProcessId> members;
    int free_count = 0;
    ClusterAssignment assignment;

    bool special() const { return color < 0; }
    int size() const { return static_cast<int>(members.size()); }
};

struct InitialPiece {
    int uid = -1;
    ServerId color = -1;
    std::vector<ProcessId> members;
};

enum class FlowEventKind { ignored, absorbed, path_created };

struct PieceMove {
    ProcessId process;
    int from_uid;
    int to_uid;
};

struct FlowEvent {
    FlowEventKind kind = FlowEventKind::ignored;
    std::vector<PieceMove> moves;      ///< processes that changed piece
    std::vector<ProcessId> freed;      ///< linked processes turned free
    std::vector<int> removed_pieces;   ///< uids of pieces emptied and deleted
    std::int64_t cost = 0;
    bool terminated = false;
};

/// One merge of two same-colored (or the two special) pieces.
struct PieceMerge {
    int surviving_uid;
    int absorbed_uid;
    int surviving_size;
    int absorbed_size;
    ClusterAssignment surviving_assignment;
    ClusterAssignment absorbed_assignment;
};

struct InstanceMergeReport {
    std::vector<PieceMerge> piece_merges;
    std::vector<int> adopted_pieces; ///< pieces carried over unchanged from the smaller instance
};

/// Clustering procedure over a fixed process subset. Colored pieces hold
/// linked processes of their color plus free processes absorbed during the
/// current iteration; the special piece holds every other free process.
class FlowInstance {
public:
    FlowInstance() = default;

    /// `home` is only used to validate that pieces start monochromatic.
    FlowInstance(std::vector<InitialPiece> layout, int special_uid, int Z, const std::vector<ServerId>& home) : z_(Z)
    {
        if (Z < 1) {
            throw InstanceError("cost parameter must be at least 1");
        }
        std::set<ServerId> colors;
        for (auto& ip : layout) {
            if (ip.color < 0 || !colors.insert(ip.color).second) {
                throw InstanceError("initial pieces need distinct colors");
            }
            if (ip.members.empty()) {
                continue;
            }
            Piece piece;
            piece.uid = ip.uid;
            piece.color = ip.color;
            piece.members = std::move(ip.members);
            piece.assignment = ClusterAssignment{true, ip.color};
            for (ProcessId p : piece.members) {
                if (p < 0 || p >= static_cast<int>(home.size()) || home[p] != piece.color) {
                    throw InstanceError("initial piece member not homed on the piece color");
                }
                if (!members_.emplace(p, Member{piece.uid, false, -1, 0, p}).second) {
                    throw InstanceError("process listed in two pieces");
                }
            }
            add_piece(std::move(piece));
        }
        Piece x;
        x.uid = special_uid;
        x.assignment = ClusterAssignment{false, -1};
        special_uid_ = special_uid;
        add_piece(std::move(x));
    }

    int z() const { return z_; }
    bool terminated() const { return terminated_; }
    std::int64_t update_cost() const { return update_cost_; }
    int free_count() const { return free_count_; }
    const PathSet& certificate() const { return certificate_; }
    PathSet& certificate_mut() { return certificate_; }
    std::size_t scope_size() const { return members_.size(); }
    bool in_scope(ProcessId p) const { return members_.count(p) != 0; }

    const Piece& special() const { return pieces_.at(special_uid_); }
    const std::map<int, Piece>& pieces() const { return pieces_; }
    const Piece& piece(int uid) const { return pieces_.at(uid); }
    const Piece& piece_of(ProcessId p) const { return pieces_.at(member(p).piece); }
    bool is_free(ProcessId p) const { return member(p).free; }
    ProcessId anchor(ProcessId p) const { return member(p).anchor; }

    /// Piece uid of the color in this instance, or -1.
    int piece_with_color(ServerId c) const
    {
        auto it = by_color_.find(c);
        return it == by_color_.end() ? -1 : it->second;
    }

    void set_assignment(int uid, ClusterAssignment a) { pieces_.at(uid).assignment = a; }

    std::vector<ProcessId> scope() const
    {
        std::vector<ProcessId> out;
        out.reserve(members_.size());
        for (const auto& [p, m] : members_) {
            out.push_back(p);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Processes the request, which must already be the last layer of g.
    FlowEvent handle_request(const Request& r, TimeExpandedGraph& g)
    {
        if (terminated_) {
            throw LifecycleError("flow instance already terminated");
        }
        if (!in_scope(r.a) || !in_scope(r.b)) {
            throw ScopeError("request endpoint outside the instance scope");
        }
        if (r.time != g.horizon()) {
            throw SequencingError("request is not the newest layer of the graph");
        }
        FlowEvent ev;
        Member& ma = members_.at(r.a);
        Member& mb = members_.at(r.b);
        if (ma.piece == mb.piece) {
            ev.kind = FlowEventKind::ignored;
            return ev;
        }
        const int t = r.time;
        const EdgeId comm = g.communication_edge(t);
        const bool a_special = ma.piece == special_uid_;
        const bool b_special = mb.piece == special_uid_;
        if (a_special || b_special) {
            const ProcessId q = a_special ? r.a : r.b;
            const ProcessId p = a_special ? r.b : r.a;
            absorb(q, p, t, comm, ev);
            return ev;
        }
        create_path(r.a, r.b, t, comm, g, ev);
        return ev;
    }

    /// Current witness path of p, materializing whatever edges it needs.
    TegPath witness_path(ProcessId p, TimeExpandedGraph& g) const
    {
        const Member& m = member(p);
        const Piece& pc = pieces_.at(m.piece);
        if (pc.special()) {
            throw UndefinedWitnessError("process " + std::to_string(p) + " is in the special piece");
        }
        TegPath path;
        path.source = g.server_node(pc.color);
        append_witness(m.head, p, m.start, g.horizon(), g, path.edges);
        path.target = g.node(p, g.horizon());
        return path;
    }

    /// Merges b into a (scopes must be disjoint). The larger piece of each
    /// matched pair keeps its uid and assignment; ties favour a.
    static FlowInstance merge(FlowInstance a, FlowInstance b, InstanceMergeReport* report = nullptr)
    {
        for (const auto& [p, m] : b.members_) {
            if (a.members_.count(p) != 0) {
                throw ScopeError("merging instances with overlapping scopes");
            }
        }
        if (a.z_ != b.z_) {
            throw InstanceError("merging instances with different cost parameters");
        }
        InstanceMergeReport local;
        InstanceMergeReport& rep = report ? *report : local;
        const int offset = static_cast<int>(a.arena_.size());
        for (Seg s : b.arena_) {
            if (s.prev >= 0) {
                s.prev += offset;
            }
            a.arena_.push_back(s);
        }
        for (auto [p, m] : b.members_) {
            if (m.head >= 0) {
                m.head += offset;
            }
            a.members_.emplace(p, m);
        }
        for (auto& [uid, bp] : b.pieces_) {
            if (bp.special()) {
                continue;
            }
            const int match = a.piece_with_color(bp.color);
            if (match < 0) {
                rep.adopted_pieces.push_back(uid);
                a.add_piece(std::move(bp));
                continue;
            }
            rep.piece_merges.push_back(a.unite(match, std::move(bp)));
        }
        rep.piece_merges.push_back(a.unite(a.special_uid_, std::move(b.pieces_.at(b.special_uid_))));
        a.with_free_.insert(b.with_free_.begin(), b.with_free_.end());
        // uids in with_free_ may have been renamed by unite(); drop stale ones.
        for (auto it = a.with_free_.begin(); it != a.with_free_.end();) {
            it = a.pieces_.count(*it) ? std::next(it) : a.with_free_.erase(it);
        }
        a.free_count_ += b.free_count_;
        a.update_cost_ += b.update_cost_;
        a.certificate_.absorb(std::move(b.certificate_));
        a.terminated_ = a.terminated_ || b.terminated_ || a.free_count_ >= a.z_;
        return a;
    }

    /// Library-side self check; the tests use an independent oracle instead.
    std::vector<std::string> audit(TimeExpandedGraph& g, bool witnesses) const
    {
        std::vector<std::string> out;
        if (free_count_ != 2 * static_cast<int>(certificate_.size())) {
            out.push_back("free count differs from twice the path count");
        }
        const std::int64_t f = free_count_;
        if (update_cost_ > f * f - special().size()) {
            out.push_back("update cost above |F|^2 - |X|");
        }
        if (terminated_ != (free_count_ >= z_)) {
            out.push_back("termination flag out of sync with |F| >= Z");
        }
        if (!certificate_.verify_feasible(g)) {
            out.push_back("certificate infeasible");
        }
        int counted_free = 0;
        for (const auto& [uid, pc] : pieces_) {
            int fc = 0;
            for (ProcessId p : pc.members) {
                const Member& m = members_.at(p);
                if (m.piece != uid) {
                    out.push_back("membership index out of sync");
                }
                fc += m.free;
                if (pc.special() && !m.free) {
                    out.push_back("linked process in the special piece");
                }
                if (witnesses && !pc.special()) {
                    TegPath w = witness_path(p, g);
                    std::vector<NodeId> walk;
                    if (!g.trace(w, walk)) {
                        out.push_back("witness of " + std::to_string(p) + " is not a simple walk");
                    }
                    for (EdgeId e : w.edges) {
                        if (certificate_.uses(e)) {
                            out.push_back("witness of " + std::to_string(p) + " meets the certificate");
                            break;
                        }
                    }
                }
            }
            if (fc != pc.free_count) {
                out.push_back("piece free count out of sync");
            }
            counted_free += fc;
        }
        if (counted_free != free_count_) {
            out.push_back("free total out of sync");
        }
        return out;
    }

private:
    struct Member {
        int piece;
        bool free;
        int head;  ///< arena link for the part of the witness before `start`
        int start; ///< witness continues along the process's own chain from here
        ProcessId anchor;
    };

    /// Persistent witness prefix: either a chain stretch of one process or a
    /// single communication edge, linked to what comes before it.
    struct Seg {
        int prev;
        bool comm;
        ProcessId process;
        int t0;
        int t1;
        EdgeId edge;
    };

    const Member& member(ProcessId p) const
    {
        auto it = members_.find(p);
        if (it == members_.end()) {
            throw ScopeError("process " + std::to_string(p) + " outside the instance scope");
        }
        return it->second;
    }

    void add_piece(Piece piece)
    {
        if (!piece.special()) {
            by_color_[piece.color] = piece.uid;
        }
        if (piece.free_count > 0 && !piece.special()) {
            with_free_.insert(piece.uid);
        }
        const int uid = piece.uid;
        pieces_.emplace(uid, std::move(piece));
    }

    void remove_piece(int uid)
    {
        Piece& pc = pieces_.at(uid);
        if (!pc.special()) {
            by_color_.erase(pc.color);
        }
        with_free_.erase(uid);
        pieces_.erase(uid);
    }

    /// Unites `other` with piece `uid`; the larger side survives.
    PieceMerge unite(int uid, Piece other)
    {
        Piece& mine = pieces_.at(uid);
        PieceMerge pm{};
        const bool keep_mine = mine.size() >= other.size();
        if (!keep_mine) {
            std::swap(mine.uid, other.uid);
            std::swap(mine.assignment, other.assignment);
            // Re-key the surviving piece under the larger side's uid.
            Piece moved = std::move(mine);
            const bool had_free = with_free_.erase(uid) != 0;
            pieces_.erase(uid);
            if (!moved.special()) {
                by_color_[moved.color] = moved.uid;
            } else {
                special_uid_ = moved.uid;
            }
            const int new_uid = moved.uid;
            pieces_.emplace(new_uid, std::move(moved));
            if (had_free) {
                with_free_.insert(new_uid);
            }
            uid = new_uid;
        }
        Piece& surv = pieces_.at(uid);
        pm.surviving_uid = surv.uid;
        pm.absorbed_uid = other.uid;
        pm.surviving_size = keep_mine ? surv.size() : other.size();
        pm.absorbed_size = keep_mine ? other.size() : surv.size();
        pm.surviving_assignment = surv.assignment;
        pm.absorbed_assignment = other.assignment;
        surv.members.insert(surv.members.end(), other.members.begin(), other.members.end());
        surv.free_count += other.free_count;
        for (ProcessId p : surv.members) {
            members_.at(p).piece = surv.uid;
        }
        if (surv.free_count > 0 && !surv.special()) {
            with_free_.insert(surv.uid);
        }
        return pm;
    }

    void absorb(ProcessId q, ProcessId p, int t, EdgeId comm, FlowEvent& ev)
    {
        Member& mq = members_.at(q);
        const Member& mp = members_.at(p);
        int link = mp.head;
        if (t > mp.start) {
            link = push_seg(Seg{link, false, p, mp.start, t, -1});
        }
        link = push_seg(Seg{link, true, -1, t, t, comm});
        Piece& x = pieces_.at(special_uid_);
        x.members.erase(std::find(x.members.begin(), x.members.end(), q));
        --x.free_count;
        Piece& dst = pieces_.at(mp.piece);
        dst.members.push_back(q);
        ++dst.free_count;
        with_free_.insert(dst.uid);
        mq.piece = dst.uid;
        mq.head = link;
        mq.start = t;
        mq.anchor = mp.anchor;
        ++update_cost_;
        ev.kind = FlowEventKind::absorbed;
        ev.moves.push_back(PieceMove{q, special_uid_, dst.uid});
        ev.cost = 1;
    }

    void create_path(ProcessId p, ProcessId q, int t, EdgeId comm, TimeExpandedGraph& g, FlowEvent& ev)
    {
        const Member& mp = members_.at(p);
        const Member& mq = members_.at(q);
        TegPath path;
        path.source = g.server_node(pieces_.at(mp.piece).color);
        path.target = g.server_node(pieces_.at(mq.piece).color);
        append_witness(mp.head, p, mp.start, t, g, path.edges);
        path.edges.push_back(comm);
        std::vector<EdgeId> back;
        append_witness(mq.head, q, mq.start, t, g, back);
        path.edges.insert(path.edges.end(), back.rbegin(), back.rend());
        certificate_.add_path(std::move(path), g);

        for (ProcessId anchor : {mp.anchor, mq.anchor}) {
            Member& ma = members_.at(anchor);
            ma.free = true;
            ++pieces_.at(ma.piece).free_count;
            with_free_.insert(ma.piece);
            ev.freed.push_back(anchor);
        }
        free_count_ += 2;

        Piece& x = pieces_.at(special_uid_);
        for (int uid : std::vector<int>(with_free_.begin(), with_free_.end())) {
            Piece& pc = pieces_.at(uid);
            std::vector<ProcessId> keep;
            for (ProcessId v : pc.members) {
                Member& mv = members_.at(v);
                if (mv.free) {
                    x.members.push_back(v);
                    mv.piece = special_uid_;
                    mv.head = -1;
                    mv.start = t;
                    mv.anchor = v;
                    ev.moves.push_back(PieceMove{v, uid, special_uid_});
                } else {
                    keep.push_back(v);
                }
            }
            x.free_count += pc.free_count;
            pc.free_count = 0;
            pc.members = std::move(keep);
            if (pc.members.empty()) {
                ev.removed_pieces.push_back(uid);
                remove_piece(uid);
            }
        }
        with_free_.clear();
        const auto moved = static_cast<std::int64_t>(ev.moves.size());
        update_cost_ += moved;
        ev.cost = moved;
        ev.kind = FlowEventKind::path_created;
        if (free_count_ >= z_) {
            terminated_ = true;
        }
        ev.terminated = terminated_;
    }

    int push_seg(Seg s)
    {
        arena_.push_back(s);
        return static_cast<int>(arena_.size()) - 1;
    }

    /// Emits the edges of prefix `head` followed by p's chain from `start` to `t`.
    void append_witness(int head, ProcessId p, int start, int t, TimeExpandedGraph& g, std::vector<EdgeId>& out) const
    {
        std::vector<int> links;
        for (int l = head; l >= 0; l = arena_[l].prev) {
            links.push_back(l);
        }
        for (auto it = links.rbegin(); it != links.rend(); ++it) {
            const Seg& s = arena_[*it];
            if (s.comm) {
                out.push_back(s.edge);
            } else {
                for (int layer = s.t0 + 1; layer <= s.t1; ++layer) {
                    out.push_back(g.migration_edge(s.process, layer));
                }
            }
        }
        for (int layer = start + 1; layer <= t; ++layer) {
            out.push_back(g.migration_edge(p, layer));
        }
    }

    int z_ = 1;
    bool terminated_ = false;
    int free_count_ = 0;
    std::int64_t update_cost_ = 0;
    int special_uid_ = -1;
    std::unordered_map<ProcessId, Member> members_;
    std::map<int, Piece> pieces_;
    std::map<ServerId, int> by_color_;
    std::set<int> with_free_;
    std::vector<Seg> arena_;
    PathSet certificate_;
};

/// Integer cost parameter: floor of the real value, at least 1.
inline int integer_z(double value)
{
    const auto z = static_cast<long long>(value);
    return z < 1 ? 1 : static_cast<int>(z);
}

} // namespace obp
