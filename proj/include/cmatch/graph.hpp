#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace cmatch {

using NodeId = int;

// Undirected edge, stored with u < v.
struct Edge {
    NodeId u = -1, v = -1;

    Edge() = default;
    Edge(NodeId a, NodeId b) : u(std::min(a, b)), v(std::max(a, b)) {}

    bool operator==(const Edge&) const = default;
    auto operator<=>(const Edge&) const = default;

    NodeId other(NodeId x) const { return x == u ? v : u; }
    std::uint64_t key() const {
        return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
    }
};

inline std::string to_string(const Edge& e) {
    return "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}";
}

// Immutable simple graph on dense node ids 0..n-1 with sorted adjacency.
class Graph {
public:
    static Graph from_edges(int n, std::span<const Edge> edges) {
        if (n < 1) throw InvalidParams("graph needs n >= 1");
        Graph g;
        g.adj_.resize(n);
        for (const Edge& e : edges) {
            if (e.u < 0 || e.v >= n) throw InvalidParams("edge endpoint out of range");
            if (e.u == e.v) throw InvalidParams("self-loop at node " + std::to_string(e.u));
            g.adj_[e.u].push_back(e.v);
            g.adj_[e.v].push_back(e.u);
        }
        for (auto& nbrs : g.adj_) {
            std::sort(nbrs.begin(), nbrs.end());
            if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end())
                throw InvalidParams("parallel edge");
        }
        g.edges_.assign(edges.begin(), edges.end());
        std::sort(g.edges_.begin(), g.edges_.end());
        return g;
    }

    static Graph from_edges(int n, std::initializer_list<Edge> edges) {
        return from_edges(n, std::span<const Edge>(edges.begin(), edges.size()));
    }

    int n() const { return static_cast<int>(adj_.size()); }
    int m() const { return static_cast<int>(edges_.size()); }

    const std::vector<NodeId>& neighbors(NodeId v) const { return adj_[v]; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_node(NodeId v) const { return v >= 0 && v < n(); }
    bool has_edge(NodeId a, NodeId b) const {
        if (!has_node(a) || !has_node(b) || a == b) return false;
        const auto& nb = adj_[a];
        return std::binary_search(nb.begin(), nb.end(), b);
    }
    bool has_edge(const Edge& e) const { return has_edge(e.u, e.v); }

    int degree(NodeId v) const { return static_cast<int>(adj_[v].size()); }

    // Connected components as node lists; singleton nodes included.
    std::vector<std::vector<NodeId>> components() const {
        std::vector<int> comp(n(), -1);
        std::vector<std::vector<NodeId>> out;
        for (NodeId s = 0; s < n(); ++s) {
            if (comp[s] >= 0) continue;
            int id = static_cast<int>(out.size());
            out.emplace_back();
            std::vector<NodeId> stack{s};
            comp[s] = id;
            while (!stack.empty()) {
                NodeId v = stack.back();
                stack.pop_back();
                out[id].push_back(v);
                for (NodeId w : adj_[v])
                    if (comp[w] < 0) {
                        comp[w] = id;
                        stack.push_back(w);
                    }
            }
            std::sort(out[id].begin(), out[id].end());
        }
        return out;
    }

    // Subgraph induced by `nodes` (sorted), with nodes renumbered 0..k-1.
    // Returns the subgraph and the old-id list (new id -> old id).
    std::pair<Graph, std::vector<NodeId>> induced(const std::vector<NodeId>& nodes) const {
        std::vector<int> newid(n(), -1);
        for (size_t i = 0; i < nodes.size(); ++i) newid[nodes[i]] = static_cast<int>(i);
        std::vector<Edge> es;
        for (const Edge& e : edges_)
            if (newid[e.u] >= 0 && newid[e.v] >= 0) es.emplace_back(newid[e.u], newid[e.v]);
        return {from_edges(static_cast<int>(nodes.size()), es), nodes};
    }

private:
    std::vector<std::vector<NodeId>> adj_;
    std::vector<Edge> edges_;
};

// Validated matching: pairwise node-disjoint edge set, mate map as involution.
class Matching {
public:
    Matching() = default;

    static Matching validate(const Graph& g, std::span<const Edge> edges) {
        Matching m;
        m.mate_.assign(g.n(), -1);
        for (const Edge& e : edges) {
            if (!g.has_edge(e)) throw EdgeNotInGraph(e.u, e.v);
            if (m.mate_[e.u] >= 0) throw NonDisjointEdges(e.u);
            if (m.mate_[e.v] >= 0) throw NonDisjointEdges(e.v);
            m.mate_[e.u] = e.v;
            m.mate_[e.v] = e.u;
            m.edges_.push_back(e);
        }
        std::sort(m.edges_.begin(), m.edges_.end());
        return m;
    }

    static Matching validate(const Graph& g, std::initializer_list<Edge> edges) {
        return validate(g, std::span<const Edge>(edges.begin(), edges.size()));
    }

    int size() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }

    bool is_free(NodeId v) const { return mate_[v] < 0; }
    std::optional<NodeId> mate(NodeId v) const {
        if (mate_[v] < 0) return std::nullopt;
        return mate_[v];
    }
    bool contains(const Edge& e) const { return mate_[e.u] == e.v; }

    std::vector<NodeId> free_nodes() const {
        std::vector<NodeId> out;
        for (NodeId v = 0; v < static_cast<int>(mate_.size()); ++v)
            if (mate_[v] < 0) out.push_back(v);
        return out;
    }

private:
    std::vector<NodeId> mate_;
    std::vector<Edge> edges_;
};

enum class EdgeKind { zero_edge, one_edge };

inline EdgeKind edge_kind(const Graph& g, const Matching& m, const Edge& e) {
    if (!g.has_edge(e)) throw EdgeNotInGraph(e.u, e.v);
    return m.contains(e) ? EdgeKind::one_edge : EdgeKind::zero_edge;
}

// Alternating path as a node sequence; the edge list derives from it.
struct AltPath {
    std::vector<NodeId> nodes;

    int length() const { return static_cast<int>(nodes.size()) - 1; }
    Edge edge_at(int i) const { return Edge(nodes[i], nodes[i + 1]); }
};

inline bool is_simple_path(const Graph& g, const std::vector<NodeId>& nodes) {
    if (nodes.empty()) return false;
    for (NodeId v : nodes)
        if (!g.has_node(v)) return false;
    for (size_t i = 0; i + 1 < nodes.size(); ++i)
        if (!g.has_edge(nodes[i], nodes[i + 1])) return false;
    auto sorted = nodes;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

inline bool is_alternating(const Graph& g, const Matching& m, const std::vector<NodeId>& nodes) {
    if (!is_simple_path(g, nodes)) return false;
    for (size_t i = 0; i + 2 < nodes.size(); ++i) {
        bool a = m.contains(Edge(nodes[i], nodes[i + 1]));
        bool b = m.contains(Edge(nodes[i + 1], nodes[i + 2]));
        if (a == b) return false;
    }
    return true;
}

// Augmenting: simple alternating path of odd length between two distinct free
// nodes whose first and last edges are unmatched.  Malformed input yields
// false rather than an error.
inline bool is_augmenting(const Graph& g, const Matching& m, const std::vector<NodeId>& nodes) {
    if (nodes.size() < 2 || nodes.size() % 2 != 0) return false;
    if (!is_alternating(g, m, nodes)) return false;
    if (!m.is_free(nodes.front()) || !m.is_free(nodes.back())) return false;
    if (m.contains(Edge(nodes[0], nodes[1]))) return false;
    if (m.contains(Edge(nodes[nodes.size() - 2], nodes.back()))) return false;
    return true;
}

inline bool is_augmenting(const Graph& g, const Matching& m, const AltPath& p) {
    return is_augmenting(g, m, p.nodes);
}

// M ⊕ E(P): the matched edges off the path, plus the path's unmatched edges.
inline Matching augment(const Graph& g, const Matching& m, const AltPath& p) {
    if (!is_augmenting(g, m, p.nodes)) throw NotAugmenting();
    std::vector<Edge> on_path;
    for (int i = 0; i < p.length(); ++i) on_path.push_back(p.edge_at(i));
    std::sort(on_path.begin(), on_path.end());
    std::vector<Edge> out;
    for (const Edge& e : m.edges())
        if (!std::binary_search(on_path.begin(), on_path.end(), e)) out.push_back(e);
    for (int i = 0; i < p.length(); i += 2) out.push_back(p.edge_at(i));
    return Matching::validate(g, out);
}

}  // namespace cmatch
