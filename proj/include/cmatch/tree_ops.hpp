#pragma once

#include <cstdint>
#include <limits>

#include "engine.hpp"

namespace cmatch {

// Leader election + BFS tree by min-id flooding.  Every node repeatedly
// adopts the lexicographically best (leader, dist) offer it hears and
// rebroadcasts on improvement; at quiescence dist is the BFS level below the
// minimum-id node and parent points along a shortest path.
struct FloodProto : ProtocolBase {
    struct Message {
        NodeId leader;
        int dist;
    };
    struct State {
        NodeId leader;
        int dist;
        NodeId parent = -1;
        bool announce = false;
    };
    using Msg = Message;

    int n = 0;

    State init(const NodeView& view) const {
        return State{view.id, 0, -1, /*announce=*/true};
    }

    void step(State& st, const NodeView& view, int /*round*/,
              const std::vector<Envelope<Message>>& inbox, Outbox<Message>& out) const {
        for (const auto& env : inbox) {
            if (env.payload.leader < st.leader ||
                (env.payload.leader == st.leader && env.payload.dist + 1 < st.dist)) {
                st.leader = env.payload.leader;
                st.dist = env.payload.dist + 1;
                st.parent = env.src;
                st.announce = true;
            }
        }
        if (st.announce) {
            for (NodeId w : *view.neighbors)
                out.send(w, Message{st.leader, st.dist}, bit_size(Message{}));
            st.announce = false;
        }
    }

    int bit_size(const Message&) const { return 8 + bits_for_count(n) + bits_for_count(2 * n); }
    const char* kind(const Message&) const { return "flood"; }
    nlohmann::json payload_json(const Message& m) const {
        return {{"leader", m.leader}, {"dist", m.dist}};
    }
};

enum class AggOp { sum, min, max };

inline std::int64_t agg_combine(AggOp op, std::int64_t a, std::int64_t b) {
    switch (op) {
        case AggOp::sum: return a + b;
        case AggOp::min: return a < b ? a : b;
        default: return a > b ? a : b;
    }
}

// Convergecast of one int64 per node up a known tree, then broadcast of the
// aggregate back down.  Round 1 announces children; a node reports upward as
// soon as all announced children have reported.
struct TreeAggregateProto : ProtocolBase {
    enum class Tag : std::uint8_t { announce, up, down };
    struct Message {
        Tag tag;
        std::int64_t value;
    };
    struct State {
        int children = 0;
        int reported = 0;
        std::int64_t acc = 0;
        bool sent_up = false;
        bool have_result = false;
        std::int64_t result = 0;
        bool sent_down = false;
    };
    using Msg = Message;

    int n = 0;
    AggOp op = AggOp::sum;
    const std::vector<NodeId>* parent = nullptr;      // -1 at the root
    const std::vector<std::int64_t>* value = nullptr; // per-node input

    State init(const NodeView& view) const {
        State st;
        st.acc = (*value)[view.id];
        return st;
    }

    void step(State& st, const NodeView& view, int round,
              const std::vector<Envelope<Message>>& inbox, Outbox<Message>& out) const {
        const NodeId par = (*parent)[view.id];
        if (round == 1) {
            if (par >= 0) out.send(par, Message{Tag::announce, 0}, bit_size(Message{}));
            return;
        }
        for (const auto& env : inbox) {
            switch (env.payload.tag) {
                case Tag::announce: ++st.children; break;
                case Tag::up:
                    ++st.reported;
                    st.acc = agg_combine(op, st.acc, env.payload.value);
                    break;
                case Tag::down:
                    st.have_result = true;
                    st.result = env.payload.value;
                    break;
            }
        }
        if (!st.sent_up && round >= 2 && st.reported == st.children) {
            // child counts are final once round 2's announces are in
            if (par >= 0) {
                out.send(par, Message{Tag::up, st.acc}, bit_size(Message{}));
            } else {
                st.have_result = true;
                st.result = st.acc;
            }
            st.sent_up = true;
        }
        if (st.have_result && !st.sent_down) {
            for (NodeId w : *view.neighbors)
                if ((*parent)[w] == view.id)
                    out.send(w, Message{Tag::down, st.result}, bit_size(Message{}));
            st.sent_down = true;
        }
    }

    int bit_size(const Message&) const { return 8 + 2 + bits_for_count(4LL * n * n); }
    const char* kind(const Message&) const { return "tree"; }
    nlohmann::json payload_json(const Message& m) const {
        return {{"tag", static_cast<int>(m.tag)}, {"value", m.value}};
    }
};

struct BfsResult {
    NodeId leader = -1;
    std::vector<NodeId> parent;  // -1 at the leader
    std::vector<int> dist;
    int depth = 0;  // D_T, known to every node at termination
    int rounds = 0; // total rounds spent (flood + depth dissemination)
};

// Driver: elect the minimum id, build the BFS tree, and make D_T known to
// all nodes.  Disconnection surfaces as a flood that never agrees (checked
// after quiescence) or fails to go quiescent within 2n rounds.
inline BfsResult build_bfs_and_elect(const Graph& g, const EngineOptions& base_opts = {}) {
    const int n = g.n();
    FloodProto flood;
    flood.n = n;
    EngineOptions opts = base_opts;
    opts.max_rounds = 2 * n + 2;
    auto quiescent = [](const std::vector<FloodProto::State>&, int, std::size_t sent) {
        return sent == 0;
    };
    auto res = run_protocol(g, flood, opts, quiescent);
    if (!res.halted_early) throw Disconnected();

    BfsResult out;
    out.leader = 0;
    for (NodeId v = 0; v < n; ++v)
        if (res.states[v].leader != res.states[0].leader) throw Disconnected();
    out.leader = res.states[0].leader;
    out.parent.resize(n);
    out.dist.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        out.parent[v] = res.states[v].parent;
        out.dist[v] = res.states[v].dist;
    }
    out.rounds = res.rounds;

    // Every node learns the tree depth.
    std::vector<std::int64_t> vals(n);
    for (NodeId v = 0; v < n; ++v) vals[v] = out.dist[v];
    TreeAggregateProto agg;
    agg.n = n;
    agg.op = AggOp::max;
    agg.parent = &out.parent;
    agg.value = &vals;
    EngineOptions opts2 = base_opts;
    opts2.max_rounds = 2 * n + 6;
    auto done = [](const std::vector<TreeAggregateProto::State>& sts, int, std::size_t) {
        for (const auto& s : sts)
            if (!s.have_result) return false;
        return true;
    };
    auto res2 = run_protocol(g, agg, opts2, done);
    if (!res2.halted_early) throw Disconnected();
    out.depth = static_cast<int>(res2.states[0].result);
    out.rounds += res2.rounds;
    return out;
}

struct AggregateRun {
    std::int64_t value = 0;  // at the leader, and broadcast to everyone
    int rounds = 0;
};

// Convergecast of per-node values to the leader plus broadcast of the result.
inline AggregateRun convergecast_aggregate(const Graph& g, const BfsResult& tree,
                                           const std::vector<std::int64_t>& per_node_value,
                                           AggOp op, const EngineOptions& base_opts = {}) {
    TreeAggregateProto agg;
    agg.n = g.n();
    agg.op = op;
    agg.parent = &tree.parent;
    agg.value = &per_node_value;
    EngineOptions opts = base_opts;
    opts.max_rounds = 2 * g.n() + 6;
    auto done = [](const std::vector<TreeAggregateProto::State>& sts, int, std::size_t) {
        for (const auto& s : sts)
            if (!s.have_result) return false;
        return true;
    };
    auto res = run_protocol(g, agg, opts, done);
    if (!res.halted_early) throw Disconnected();
    AggregateRun out;
    out.value = res.states[tree.leader].result;
    out.rounds = res.rounds;
    return out;
}

}  // namespace cmatch
