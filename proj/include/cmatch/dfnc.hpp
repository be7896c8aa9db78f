#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "engine.hpp"
#include "graph.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace cmatch {

// Distributed free node clustering.
//
// Tokens (free-node ids) travel along shortest alternating paths: a node
// noticed at its 0-side forwards over its matched edge next round, a node
// noticed at its 1-side forwards over its unmatched edges.  Tokens crossing
// an edge in both directions between non-predecessors generate a unit flow
// that is split backwards along predecessor links; a node receiving a proper
// fraction of a unit learns its second reachability value from the round
// number.  The unbounded variant carries exact rationals keyed by edge; the
// ring variant replaces them with aggregated elements of Z/gammaZ whose
// cancellation pattern matches the rational variant w.h.p.

enum class FlowMode {
    unbounded,       // exact rationals keyed by edge
    ring,            // aggregated elements of Z/gammaZ (the production variant)
    ring_attributed  // test harness: the unbounded skeleton, with a passive
                     // per-key ring shadow riding along for attribution
};

struct TokenMsg {
    NodeId cid = -1;
    bool to_pred = false;  // receiver is one of the sender's predecessors
};

struct NonceMsg {
    std::uint64_t value = 0;
};

struct RingMsg {
    std::uint64_t value = 0;
};

struct FlowMsgRecord {
    Edge e;
    Rational value;
    std::uint64_t shadow = 0;  // ring_attributed only; never steers control flow
};

struct FlowMsg {
    std::vector<FlowMsgRecord> records;  // sorted by edge key
};

struct ExchangeMsg {
    NodeId cid = -1;
    int r0 = -1, r1 = -1;
};

using DfncMessage = std::variant<TokenMsg, NonceMsg, RingMsg, FlowMsg, ExchangeMsg>;

// Detection candidate: a neighboring pair in different clusters whose reach
// values witness an augmenting path of length ell between the two centers.
struct DetectCandidate {
    int ell = 0;
    NodeId center_lo = -1, center_hi = -1;
    Edge middle;

    auto key() const { return std::tie(ell, center_lo, center_hi, middle.u, middle.v); }
    bool operator<(const DetectCandidate& o) const { return key() < o.key(); }
    bool operator==(const DetectCandidate& o) const { return key() == o.key(); }
};

struct DfncNodeState {
    NodeId cid = -1;
    int r0 = -1, r1 = -1;  // -1 while undefined
    std::vector<NodeId> pred;
    bool incomplete_done = false;

    struct TokenIn {
        NodeId cid = -1;
        int round = -1;
        bool to_pred = false;
    };
    std::map<NodeId, TokenIn> token_in;   // by neighbor, first token per edge direction
    std::map<NodeId, int> token_out;      // round our token crossed that edge
    std::set<NodeId> gen_handled;         // edges whose generation decision is final

    struct SchedCell {
        Rational mass;
        std::uint64_t shadow = 0;
    };
    std::map<int, std::map<Edge, SchedCell>> sched;  // send round -> edge key -> mass
    std::map<int, std::uint64_t> ring_sched;        // send round -> aggregate mod gamma
    std::map<NodeId, std::uint64_t> nonce_out, nonce_in;

    // White-box bookkeeping for tests: discard events and, at cluster
    // centers, absorbed mass per edge with its receipt rounds.
    struct DiscardEvent {
        Edge e;
        int send_round = 0;
    };
    std::vector<DiscardEvent> discards;
    std::map<Edge, std::vector<std::pair<int, Rational>>> absorbed;
    // ring_attributed only: per-key receipt batches (edge, round, mass, shadow)
    struct AttribReceipt {
        Edge e;
        int round = 0;
        Rational mass;
        std::uint64_t shadow = 0;
    };
    std::vector<AttribReceipt> attrib_receipts;

    std::optional<DetectCandidate> candidate;

    bool clustered() const { return cid >= 0; }
    int reg(int theta) const { return theta == 0 ? r0 : r1; }
};

class DfncProto {
public:
    using Message = DfncMessage;
    using State = DfncNodeState;

    FlowMode mode = FlowMode::unbounded;
    int radius = 0;
    bool with_exchange = false;
    int detect_deadline = 0;  // candidates require ell <= deadline
    std::uint64_t gamma = 0;  // ring modulus
    const Graph* graph = nullptr;
    const Matching* matching = nullptr;

    std::optional<NodeId> mate_of(NodeId v) const { return matching->mate(v); }

    // Offset between engine rounds and protocol rounds: the ring variant
    // spends one extra leading round on the nonce exchange.
    int paper_round(int engine_round) const {
        return mode == FlowMode::ring ? engine_round - 1 : engine_round;
    }
    int engine_rounds_needed() const {
        return radius + (mode == FlowMode::ring ? 1 : 0) + (with_exchange ? 1 : 0);
    }

    State init(const NodeView& view) const {
        State st;
        if (!view.mate) {
            st.cid = view.id;
            st.r0 = 0;
            st.r1 = 0;
        }
        return st;
    }

    void step(State& st, const NodeView& view, int engine_round,
              const std::vector<Envelope<Message>>& inbox, Outbox<Message>& out) const {
        const int p = paper_round(engine_round);  // protocol round now being sent
        if (mode == FlowMode::ring && engine_round == 1) {
            for (NodeId w : *view.neighbors) {
                std::uint64_t tau = draw_below(view.seed, gamma, view.id, w, kSaltNonce);
                out.send(w, NonceMsg{tau}, ring_bits());
            }
            return;
        }

        receive_tokens(st, view, p - 1, inbox);
        receive_flows(st, view, p - 1, inbox);
        // The round-p flow buffer is final here: recognitions triggered by
        // our own round-p token sends always schedule past round p.  Settling
        // it first matters because a node whose first incomplete round is p-1
        // learns that register now and must already use it for its round-p
        // token sends.
        std::vector<std::pair<NodeId, Message>> pending;
        if (p >= 1 && p <= radius + 1) pending = settle_flows(st, view, p);
        if (p >= 1 && p <= radius) send_tokens(st, view, p, out);
        for (auto& [dst, msg] : pending) {
            int bits = bit_size(msg);
            out.send(dst, std::move(msg), bits);
        }
        if (with_exchange && p == radius + 1) send_exchange(st, view, out);
        if (with_exchange && p == radius + 2) receive_exchange(st, view, inbox);
    }

    int bit_size(const Message& msg) const {
        const int n = graph->n();
        if (std::holds_alternative<TokenMsg>(msg)) return 8 + bits_for_count(n) + 1;
        if (std::holds_alternative<NonceMsg>(msg)) return ring_bits();
        if (std::holds_alternative<RingMsg>(msg)) return ring_bits();
        if (std::holds_alternative<ExchangeMsg>(msg))
            return 8 + bits_for_count(n) + 2 * (1 + bits_for_count(radius + 1));
        const auto& fm = std::get<FlowMsg>(msg);
        int bits = 8;
        for (const auto& rec : fm.records) bits += 2 * bits_for_count(n) + rational_bits(rec.value);
        return bits;
    }

    const char* kind(const Message& msg) const {
        if (std::holds_alternative<TokenMsg>(msg)) return "token";
        if (std::holds_alternative<NonceMsg>(msg)) return "nonce";
        if (std::holds_alternative<RingMsg>(msg)) return "ring";
        if (std::holds_alternative<FlowMsg>(msg)) return "flow";
        return "exchange";
    }

    nlohmann::json payload_json(const Message& msg) const {
        if (const auto* t = std::get_if<TokenMsg>(&msg))
            return {{"cid", t->cid}, {"to_pred", t->to_pred}};
        if (const auto* nc = std::get_if<NonceMsg>(&msg)) return {{"value", nc->value}};
        if (const auto* r = std::get_if<RingMsg>(&msg)) return {{"value", r->value}};
        if (const auto* x = std::get_if<ExchangeMsg>(&msg))
            return {{"cid", x->cid}, {"r0", x->r0}, {"r1", x->r1}};
        const auto& fm = std::get<FlowMsg>(msg);
        nlohmann::json recs = nlohmann::json::array();
        for (const auto& rec : fm.records)
            recs.push_back({{"e", {rec.e.u, rec.e.v}},
                            {"num", numerator(rec.value).str()},
                            {"den", denominator(rec.value).str()}});
        return {{"flows", recs}};
    }

private:
    static constexpr std::uint64_t kSaltNonce = 101;
    static constexpr std::uint64_t kSaltShare = 102;
    static constexpr std::uint64_t kSaltPoor = 103;

    int ring_bits() const { return 8 + bits_for_count(static_cast<long long>(gamma)); }

    bool edge_matched(const NodeView& view, NodeId w) const { return view.mate == w; }

    // Predecessor edges are either all unmatched or the single matched edge.
    bool pred_edges_all_zero(const State& st, const NodeView& view) const {
        return !st.pred.empty() && !(st.pred.size() == 1 && view.mate == st.pred[0]);
    }

    void set_register(State& st, int value) const {
        int& reg = (value % 2 == 0) ? st.r1 : st.r0;
        if (reg >= 0) throw ProtocolViolation("reachability register written twice");
        reg = value;
    }

    void receive_tokens(State& st, const NodeView& view, int recv_round,
                        const std::vector<Envelope<Message>>& inbox) const {
        std::vector<const Envelope<Message>*> tokens;
        for (const auto& env : inbox)
            if (std::holds_alternative<TokenMsg>(env.payload)) tokens.push_back(&env);
        if (tokens.empty()) return;
        for (const auto* env : tokens) {
            const auto& tok = std::get<TokenMsg>(env->payload);
            st.token_in.emplace(env->src, State::TokenIn{tok.cid, recv_round, tok.to_pred});
        }
        if (!st.clustered()) {
            NodeId best = -1;
            for (const auto* env : tokens) {
                NodeId c = std::get<TokenMsg>(env->payload).cid;
                if (best < 0 || c < best) best = c;
            }
            st.cid = best;
            for (const auto* env : tokens)
                if (std::get<TokenMsg>(env->payload).cid == best) st.pred.push_back(env->src);
            set_register(st, recv_round);
        }
        // Newly arrived tokens may complete a both-directions pair.
        for (const auto* env : tokens) recognize_generation(st, view, env->src);
    }

    // A flow receipt batch: everything effective in one protocol round.
    void schedule_batch(State& st, const NodeView& view, int recv_round, bool edges_all_zero,
                        const std::map<Edge, State::SchedCell>& batch, std::uint64_t ring_sum,
                        int recognized_at) const {
        if (mode == FlowMode::ring_attributed)
            for (const auto& [e, cell] : batch)
                st.attrib_receipts.push_back({e, recv_round, cell.mass, cell.shadow % gamma});
        if (st.pred.empty()) {
            // Cluster centers absorb; anything else receiving flow is a bug.
            if (!view.mate) {
                for (const auto& [e, cell] : batch)
                    st.absorbed[e].emplace_back(recv_round, cell.mass);
                return;
            }
            throw ProtocolViolation("matched node received flow before joining a cluster");
        }
        int send_round;
        if (edges_all_zero && pred_edges_all_zero(st, view)) {
            if (st.r0 < 0 || st.r1 < 0 || st.r1 <= st.r0)
                throw ProtocolViolation("delay branch needs both registers, r1 > r0");
            send_round = recv_round + (st.r1 - st.r0) + 1;
        } else {
            send_round = recv_round + 1;
        }
        if (send_round <= recognized_at) throw ScheduleInPast();
        if (mode == FlowMode::ring) {
            if (ring_sum % gamma != 0)
                st.ring_sched[send_round] = (st.ring_sched[send_round] + ring_sum) % gamma;
        } else {
            for (const auto& [e, cell] : batch) {
                auto& slot = st.sched[send_round][e];
                slot.mass += cell.mass;
                if (mode == FlowMode::ring_attributed)
                    slot.shadow = (slot.shadow + cell.shadow) % gamma;
            }
        }
    }

    void receive_flows(State& st, const NodeView& view, int recv_round,
                       const std::vector<Envelope<Message>>& inbox) const {
        std::map<Edge, State::SchedCell> batch;
        std::uint64_t ring_sum = 0;
        int zero_edges = 0, one_edges = 0;
        for (const auto& env : inbox) {
            if (const auto* fm = std::get_if<FlowMsg>(&env.payload)) {
                for (const auto& rec : fm->records) {
                    auto& cell = batch[rec.e];
                    cell.mass += rec.value;
                    if (mode == FlowMode::ring_attributed)
                        cell.shadow = (cell.shadow + rec.shadow) % gamma;
                }
            } else if (const auto* rm = std::get_if<RingMsg>(&env.payload)) {
                ring_sum = (ring_sum + rm->value) % gamma;
            } else if (const auto* nc = std::get_if<NonceMsg>(&env.payload)) {
                st.nonce_in[env.src] = nc->value;
                continue;
            } else {
                continue;
            }
            (edge_matched(view, env.src) ? one_edges : zero_edges) += 1;
        }
        if (zero_edges + one_edges == 0) return;
        // Flows ride 0-edges in odd rounds and 1-edges in even rounds, so a
        // round never mixes edge kinds.
        if (zero_edges > 0 && one_edges > 0)
            throw ProtocolViolation("mixed edge kinds in one flow round");
        schedule_batch(st, view, recv_round, one_edges == 0, batch, ring_sum, recv_round);
    }

    void send_tokens(State& st, const NodeView& view, int send_round,
                     Outbox<Message>& out) const {
        if (!st.clustered()) return;
        auto emit = [&](NodeId w) {
            bool to_pred = std::binary_search(st.pred.begin(), st.pred.end(), w);
            out.send(w, TokenMsg{st.cid, to_pred}, bit_size(TokenMsg{}));
            st.token_out.emplace(w, send_round);
            recognize_generation(st, view, w);
        };
        if (st.r0 == send_round - 1 && view.mate) emit(*view.mate);
        if (st.r1 == send_round - 1)
            for (NodeId w : *view.neighbors)
                if (view.mate != w) emit(w);
    }

    // Flow generation on edge {v,w}: both directions carried the same cluster
    // id and neither endpoint is the other's predecessor.  Each endpoint's
    // receipt is effective in the round the *other* endpoint sent its token;
    // recognition may be later (when our own send completes the pair), so the
    // effective round can lie in the past.
    void recognize_generation(State& st, const NodeView& view, NodeId w) const {
        if (st.gen_handled.count(w)) return;
        auto out_it = st.token_out.find(w);
        auto in_it = st.token_in.find(w);
        if (out_it == st.token_out.end() || in_it == st.token_in.end()) return;
        st.gen_handled.insert(w);
        const auto& tin = in_it->second;
        if (tin.cid != st.cid) return;                                        // different clusters
        if (tin.to_pred) return;                                              // we are w's predecessor
        if (std::binary_search(st.pred.begin(), st.pred.end(), w)) return;    // w is ours

        const Edge e(view.id, w);
        const int recv_round = tin.round;                 // partner's send round
        const int recognized_at = std::max(out_it->second, tin.round);
        std::map<Edge, State::SchedCell> batch;
        std::uint64_t ring_sum = 0;
        if (mode == FlowMode::unbounded) {
            batch[e].mass = Rational(1, 2);
        } else {
            // The receipts at the two endpoints are tau and -tau for the tau
            // the lower endpoint drew for this edge.
            NodeId lo = std::min(view.id, w);
            std::uint64_t tau =
                mode == FlowMode::ring && lo != view.id
                    ? st.nonce_in.at(w)
                    : draw_below(view.seed, gamma, lo, e.other(lo), kSaltNonce);
            ring_sum = lo == view.id ? (gamma - tau % gamma) % gamma : tau % gamma;
            if (mode == FlowMode::ring_attributed) {
                batch[e].mass = Rational(1, 2);
                batch[e].shadow = ring_sum;
            }
        }
        schedule_batch(st, view, recv_round, !edge_matched(view, w), batch, ring_sum,
                       recognized_at);
    }

    // Settle the round's outgoing flow buffer: apply the discard rule, update
    // the reachability register on a first incomplete round, and hand back
    // the messages to emit.  In attribution mode the ring shadow is split by
    // the randomized share rule per key, without ever steering control flow.
    std::vector<std::pair<NodeId, Message>> settle_flows(State& st, const NodeView& view,
                                                         int send_round) const {
        std::vector<std::pair<NodeId, Message>> outgoing;
        if (mode == FlowMode::ring) {
            auto it = st.ring_sched.find(send_round);
            if (it == st.ring_sched.end()) return outgoing;
            std::uint64_t value = it->second % gamma;
            st.ring_sched.erase(it);
            if (value == 0) return outgoing;
            const auto k = st.pred.size();
            if (k == 1) {
                outgoing.emplace_back(st.pred[0], RingMsg{value});
            } else {
                auto shares = split_shares(view, value, k, send_round, 0);
                for (std::size_t i = 0; i < k; ++i)
                    outgoing.emplace_back(st.pred[i], RingMsg{shares[i]});
            }
        } else {
            auto it = st.sched.find(send_round);
            if (it == st.sched.end()) return outgoing;
            auto bucket = std::move(it->second);
            st.sched.erase(it);
            for (auto b = bucket.begin(); b != bucket.end();) {
                if (b->second.mass > 1) throw FlowOverflow();
                if (b->second.mass == 1) {
                    st.discards.push_back({b->first, send_round});
                    b = bucket.erase(b);
                } else {
                    ++b;
                }
            }
            if (bucket.empty()) return outgoing;
            const auto k = st.pred.size();
            std::map<NodeId, FlowMsg> per_pred;
            Rational split(1, static_cast<long long>(k));
            for (const auto& [e, cell] : bucket) {
                std::vector<std::uint64_t> shares(k, 0);
                if (mode == FlowMode::ring_attributed)
                    shares = k == 1 ? std::vector<std::uint64_t>{cell.shadow % gamma}
                                    : split_shares(view, cell.shadow % gamma, k, send_round,
                                                   e.key());
                for (std::size_t i = 0; i < k; ++i)
                    per_pred[st.pred[i]].records.push_back({e, cell.mass * split, shares[i]});
            }
            for (auto& [w, msg] : per_pred) outgoing.emplace_back(w, std::move(msg));
        }
        if (!st.incomplete_done) {
            st.incomplete_done = true;
            set_register(st, send_round - 1);
        }
        return outgoing;
    }

    // Random additive split of a ring value into k shares: all but the
    // uniformly chosen poor share are uniform draws, the poor share balances.
    std::vector<std::uint64_t> split_shares(const NodeView& view, std::uint64_t value,
                                            std::size_t k, int send_round,
                                            std::uint64_t key_salt) const {
        std::uint64_t rest = 0;
        std::size_t poor = draw_below(view.seed, k, mix(view.id, key_salt), send_round, kSaltPoor);
        std::vector<std::uint64_t> shares(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            if (i == poor) continue;
            shares[i] = draw_below(view.seed, gamma, mix(view.id, key_salt),
                                   (static_cast<std::uint64_t>(send_round) << 20) + i, kSaltShare);
            rest = (rest + shares[i]) % gamma;
        }
        shares[poor] = (value + gamma - rest) % gamma;
        return shares;
    }

    void send_exchange(State& st, const NodeView& view, Outbox<Message>& out) const {
        if (!st.clustered()) return;
        ExchangeMsg msg{st.cid, st.r0, st.r1};
        for (NodeId w : *view.neighbors) out.send(w, msg, bit_size(msg));
    }

    void receive_exchange(State& st, const NodeView& view,
                          const std::vector<Envelope<Message>>& inbox) const {
        if (!st.clustered()) return;
        for (const auto& env : inbox) {
            const auto* x = std::get_if<ExchangeMsg>(&env.payload);
            if (!x) continue;
            if (x->cid < 0 || x->cid == st.cid) continue;
            bool matched = edge_matched(view, env.src);
            int mine = matched ? st.r0 : st.r1;
            int theirs = matched ? x->r0 : x->r1;
            if (mine < 0 || theirs < 0) continue;
            int ell = mine + theirs + 1;
            if (ell > detect_deadline) continue;
            DetectCandidate cand{ell, std::min(st.cid, x->cid), std::max(st.cid, x->cid),
                                 Edge(view.id, env.src)};
            if (!st.candidate || cand < *st.candidate) st.candidate = cand;
        }
    }
};

// Convenience driver for one clustering run.
struct DfncRun {
    RunResult<DfncNodeState> result;
    int protocol_rounds = 0;  // engine rounds including nonce/exchange overhead
};

inline DfncRun run_dfnc(const Graph& g, const Matching& m, int radius, FlowMode mode,
                        std::uint64_t seed, bool with_exchange = false, int deadline = -1,
                        bool bounded = false, std::uint64_t gamma = 0, bool capture = false) {
    DfncProto proto;
    proto.mode = mode;
    proto.radius = radius;
    proto.with_exchange = with_exchange;
    proto.detect_deadline = deadline < 0 ? radius : deadline;
    proto.graph = &g;
    proto.matching = &m;
    if (mode != FlowMode::unbounded) {
        proto.gamma = gamma ? gamma : 16;
    }
    EngineOptions opts;
    opts.max_rounds = proto.engine_rounds_needed();
    opts.bounded = bounded;
    opts.seed = seed;
    opts.capture_trace = capture;
    DfncRun run;
    run.result = run_protocol(g, proto, opts);
    run.protocol_rounds = run.result.rounds;
    return run;
}

}  // namespace cmatch
