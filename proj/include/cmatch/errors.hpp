#pragma once

#include <stdexcept>
#include <string>

namespace cmatch {

// Base for all recoverable validation / protocol errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NonDisjointEdges : Error {
    int node;
    explicit NonDisjointEdges(int v)
        : Error("matching edges share node " + std::to_string(v)), node(v) {}
};

struct EdgeNotInGraph : Error {
    int u, v;
    EdgeNotInGraph(int a, int b)
        : Error("edge {" + std::to_string(a) + "," + std::to_string(b) +
                "} not in graph"),
          u(a), v(b) {}
};

struct NotAugmenting : Error {
    NotAugmenting() : Error("path is not augmenting") {}
};

struct MessageTooLarge : Error {
    int src, dst, round, bits;
    MessageTooLarge(int s, int d, int r, int b)
        : Error("message " + std::to_string(s) + "->" + std::to_string(d) +
                " in round " + std::to_string(r) + " has " + std::to_string(b) +
                " bits, over budget"),
          src(s), dst(d), round(r), bits(b) {}
};

struct NonNeighborSend : Error {
    int src, dst;
    NonNeighborSend(int s, int d)
        : Error("node " + std::to_string(s) + " sent to non-neighbor " +
                std::to_string(d)),
          src(s), dst(d) {}
};

struct Disconnected : Error {
    Disconnected() : Error("graph is disconnected") {}
};

struct UndefinedReachability : Error {
    int node;
    explicit UndefinedReachability(int v)
        : Error("node " + std::to_string(v) + " has no finite reachability of the required kind"),
          node(v) {}
};

// Protocol-correctness assertions.  These indicate a bug in the protocol
// implementation (or a violated model assumption), never bad user input.
struct ProtocolViolation : Error {
    explicit ProtocolViolation(const std::string& what)
        : Error("protocol violation: " + what) {}
};

struct ScheduleInPast : ProtocolViolation {
    ScheduleInPast() : ProtocolViolation("flow scheduled before its recognition round") {}
};

struct FlowOverflow : ProtocolViolation {
    FlowOverflow() : ProtocolViolation("flow mass of one edge exceeds 1") {}
};

struct PathSetOverflow : Error {
    PathSetOverflow() : Error("shortest-path enumeration exceeded cap") {}
};

struct MatchingMaximum : Error {
    MatchingMaximum() : Error("matching is already maximum") {}
};

struct InvalidParams : Error {
    explicit InvalidParams(const std::string& what) : Error(what) {}
};

}  // namespace cmatch
