#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "graph.hpp"
#include "rng.hpp"

namespace cmatch {

// What a node knows locally: its id, n, its sorted neighbor list, its mate
// (if matched) and the run seed from which its private random stream derives.
struct NodeView {
    NodeId id = -1;
    int n = 0;
    const std::vector<NodeId>* neighbors = nullptr;
    std::optional<NodeId> mate;
    std::uint64_t seed = 0;

    bool is_neighbor(NodeId w) const {
        return std::binary_search(neighbors->begin(), neighbors->end(), w);
    }
};

template <class M>
struct Envelope {
    NodeId src = -1, dst = -1;
    M payload{};
    int bits = 0;
};

// One delivered message set per round, for replay and assertions.
struct TraceMessage {
    NodeId src, dst;
    int bits;
    std::string kind;
    nlohmann::json payload;
};

struct TraceRound {
    int round = 0;
    std::vector<TraceMessage> messages;
    bool halted = false;
};

struct Trace {
    std::uint64_t seed = 0;
    std::vector<TraceRound> rounds;

    nlohmann::json round_json(const TraceRound& r) const {
        nlohmann::json msgs = nlohmann::json::array();
        for (const auto& m : r.messages)
            msgs.push_back({{"src", m.src},
                            {"dst", m.dst},
                            {"bits", m.bits},
                            {"kind", m.kind},
                            {"payload", m.payload}});
        return {{"round", r.round}, {"messages", msgs}, {"halted", r.halted}};
    }

    // JSON Lines, one record per round.
    std::string to_jsonl() const {
        std::string out;
        for (const auto& r : rounds) {
            out += round_json(r).dump();
            out += '\n';
        }
        return out;
    }
};

// Default per-message budget: room for one token or one ring element plus
// framing.  Surfaced as a knob in EngineOptions.
inline int bits_for_count(long long count) {  // ceil(log2(count+1)), >= 1
    int b = 0;
    while ((1LL << b) <= count) ++b;
    return std::max(b, 1);
}

inline int default_bit_budget(int n) { return 8 * bits_for_count(n) + 64; }

struct EngineOptions {
    int max_rounds = 100000;
    bool bounded = false;
    int bit_budget = 0;  // 0 means default_bit_budget(n) when bounded
    std::uint64_t seed = 0;
    bool capture_trace = false;
};

template <class State>
struct RunResult {
    std::vector<State> states;
    Trace trace;
    int rounds = 0;
    long long messages_sent = 0;
    int max_message_bits = 0;
    bool halted_early = false;
};

// Collects a node's outbox for one round; enforces the neighbor rule and, in
// bounded mode, the per-message bit budget.  In the run's final receive-only
// step (past the time horizon) sends are silently dropped.
template <class M>
class Outbox {
public:
    Outbox(const NodeView& view, int round, bool bounded, int budget,
           std::vector<Envelope<M>>* sink)
        : view_(view), round_(round), bounded_(bounded), budget_(budget), sink_(sink) {}

    void send(NodeId dst, M payload, int bits) {
        if (!sink_) return;  // beyond the horizon
        if (!view_.is_neighbor(dst)) throw NonNeighborSend(view_.id, dst);
        if (bounded_ && bits > budget_) throw MessageTooLarge(view_.id, dst, round_, bits);
        sink_->push_back(Envelope<M>{view_.id, dst, std::move(payload), bits});
    }

private:
    const NodeView& view_;
    int round_;
    bool bounded_;
    int budget_;
    std::vector<Envelope<M>>* sink_;
};

// Synchronous executor.  Round t starts at time t-1 and ends at time t: the
// envelopes a node emits in round t are visible to their recipients at time t,
// which is the start of step t+1.  A run of R rounds therefore finishes with
// one receive-only step that delivers the round-R messages; anything a node
// tries to send in that step lies beyond the horizon and is dropped.  Nodes
// are stepped in ascending id order, which is unobservable because step() is
// a pure function of (state, inbox) -- the order only makes traces canonical.
//
// Protocol contract:
//   using State, Message;
//   State init(const NodeView&) const;
//   void step(State&, const NodeView&, int round,
//             const std::vector<Envelope<Message>>& inbox, Outbox<Message>&) const;
//   int bit_size(const Message&) const;
//   const char* kind(const Message&) const;
//   nlohmann::json payload_json(const Message&) const;     // trace capture only
//
// The halt predicate is driver-level knowledge: it sees all states plus the
// number of messages emitted this round and stops the run after that round.
template <class Proto>
RunResult<typename Proto::State> run_protocol(
    const Graph& g, const Proto& proto, const EngineOptions& opts,
    const std::function<bool(const std::vector<typename Proto::State>&, int, std::size_t)>& halt =
        nullptr,
    const std::function<void(int, const std::vector<typename Proto::State>&)>& on_round = nullptr) {
    using State = typename Proto::State;
    using M = typename Proto::Message;

    const int n = g.n();
    const int budget = opts.bit_budget > 0 ? opts.bit_budget : default_bit_budget(n);

    std::vector<NodeView> views(n);
    std::vector<State> states;
    states.reserve(n);
    for (NodeId v = 0; v < n; ++v) {
        views[v] = NodeView{v, n, &g.neighbors(v), proto.mate_of(v), opts.seed};
        states.push_back(proto.init(views[v]));
    }

    RunResult<State> result;
    result.trace.seed = opts.seed;

    std::vector<Envelope<M>> in_flight;   // emitted last round
    std::vector<std::vector<Envelope<M>>> inboxes(n);

    auto deliver = [&]() {
        for (auto& ib : inboxes) ib.clear();
        for (auto& env : in_flight) inboxes[env.dst].push_back(env);
        for (auto& ib : inboxes)
            std::sort(ib.begin(), ib.end(),
                      [](const Envelope<M>& a, const Envelope<M>& b) { return a.src < b.src; });
    };

    for (int round = 1; round <= opts.max_rounds; ++round) {
        deliver();

        std::vector<Envelope<M>> emitted;
        for (NodeId v = 0; v < n; ++v) {
            Outbox<M> out(views[v], round, opts.bounded, budget, &emitted);
            proto.step(states[v], views[v], round, inboxes[v], out);
        }
        std::sort(emitted.begin(), emitted.end(), [](const Envelope<M>& a, const Envelope<M>& b) {
            return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
        });

        result.rounds = round;
        result.messages_sent += static_cast<long long>(emitted.size());
        for (const auto& e : emitted) result.max_message_bits = std::max(result.max_message_bits, e.bits);

        if (opts.capture_trace) {
            TraceRound tr;
            tr.round = round;
            for (const auto& e : emitted)
                tr.messages.push_back(TraceMessage{e.src, e.dst, e.bits, proto.kind(e.payload),
                                                   proto.payload_json(e.payload)});
            result.trace.rounds.push_back(std::move(tr));
        }

        if (on_round) on_round(round, states);

        bool stop = halt && halt(states, round, emitted.size());
        if (stop) {
            result.halted_early = true;
            if (opts.capture_trace && !result.trace.rounds.empty())
                result.trace.rounds.back().halted = true;
        }
        in_flight = std::move(emitted);
        if (stop) break;
    }

    // Receive-only horizon step: the last round's messages arrive at its end.
    deliver();
    const int horizon = result.rounds + 1;
    for (NodeId v = 0; v < n; ++v) {
        Outbox<M> out(views[v], horizon, opts.bounded, budget, nullptr);
        proto.step(states[v], views[v], horizon, inboxes[v], out);
    }

    result.states = std::move(states);
    return result;
}

// Base with the optional hooks most protocols share.
struct ProtocolBase {
    std::optional<NodeId> mate_of(NodeId) const { return std::nullopt; }
};

}  // namespace cmatch
