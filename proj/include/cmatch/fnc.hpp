#pragma once

#include <array>
#include <climits>
#include <cstdint>
#include <map>
#include <vector>

#include "graph.hpp"

namespace cmatch {

constexpr int kUnreachable = INT_MAX / 4;  // stands in for an infinite reach value

// Free node clustering: per-node cluster assignment with join-round history.
// Free nodes carry join_round 0; a node that never joins stays at center -1.
struct Clustering {
    int radius = 0;
    std::vector<NodeId> center;
    std::vector<int> join_round;

    bool clustered(NodeId v) const { return center[v] >= 0; }
    // Membership after t steps, reconstructed from join rounds.
    bool member_at(NodeId v, NodeId c, int t) const {
        return center[v] == c && join_round[v] <= t;
    }
    std::vector<NodeId> members(NodeId c) const {
        std::vector<NodeId> out;
        for (NodeId v = 0; v < static_cast<int>(center.size()); ++v)
            if (center[v] == c) out.push_back(v);
        return out;
    }
};

namespace fnc_detail {

// Alternating-walk lower bounds from a cluster center over a node set:
// minwalk[v][p] = shortest alternating walk length L with L mod 2 == p from
// the center to v staying inside `allowed`.  Walks relax the path search and
// give an admissible pruning bound.
inline std::vector<std::array<int, 2>> walk_bounds(const Graph& g, const Matching& m,
                                                   NodeId center,
                                                   const std::vector<char>& allowed) {
    std::vector<std::array<int, 2>> dist(g.n(), {kUnreachable, kUnreachable});
    dist[center][0] = 0;
    std::vector<std::pair<NodeId, int>> queue{{center, 0}};
    for (size_t i = 0; i < queue.size(); ++i) {
        auto [v, len] = queue[i];
        if (len > dist[v][len & 1]) continue;
        bool next_matched = (len & 1) == 1;  // edges alternate 0,1,0,... from a free center
        for (NodeId w : g.neighbors(v)) {
            if (!allowed[w]) continue;
            if (m.contains(Edge(v, w)) != next_matched) continue;
            int nl = len + 1;
            if (nl < dist[w][nl & 1]) {
                dist[w][nl & 1] = nl;
                queue.emplace_back(w, nl);
            }
        }
    }
    return dist;
}

struct PathSearch {
    const Graph& g;
    const Matching& m;
    NodeId center;
    const std::vector<char>& allowed;               // nodes usable past the start
    const std::vector<std::array<int, 2>>& bounds;  // walk_bounds over `allowed`

    // Does a simple alternating path of length `len` exist from `center` to
    // `start` whose edge at `start` is matched iff `start_matched`, with all
    // nodes except possibly `start` inside `allowed`?
    bool exists(NodeId start, int len, bool start_matched) const {
        if (len == 0) return start == center;
        std::uint64_t visited = 1ULL << start;
        return dfs(start, len, start_matched, visited);
    }

private:
    bool dfs(NodeId v, int remaining, bool need_matched, std::uint64_t& visited) const {
        int prefix = 0;  // length of the center-side prefix at the next node
        for (NodeId w : g.neighbors(v)) {
            if (!allowed[w]) continue;
            if (visited & (1ULL << w)) continue;
            if (m.contains(Edge(v, w)) != need_matched) continue;
            prefix = remaining - 1;
            if (prefix == 0) {
                if (w == center) return true;
                continue;
            }
            if (w == center) continue;  // the center can only be the endpoint
            if (bounds[w][prefix & 1] > prefix) continue;
            visited |= 1ULL << w;
            if (dfs(w, remaining - 1, !need_matched, visited)) {
                visited &= ~(1ULL << w);
                return true;
            }
            visited &= ~(1ULL << w);
        }
        return false;
    }
};

}  // namespace fnc_detail

// Step-by-step free node clustering.  In step t every so far unclustered node
// concurrently joins the minimum-id center from which it has an alternating
// path of length exactly t whose other nodes all already sit in that center's
// cluster; joins commit only at the end of the step.
inline Clustering fnc_clustering(const Graph& g, const Matching& m, int r) {
    if (g.n() > 64) throw InvalidParams("clustering reference supports n <= 64");
    if (r < 0) throw InvalidParams("radius must be >= 0");
    const int n = g.n();
    Clustering cl;
    cl.radius = r;
    cl.center.assign(n, -1);
    cl.join_round.assign(n, -1);
    for (NodeId f : m.free_nodes()) {
        cl.center[f] = f;
        cl.join_round[f] = 0;
    }

    for (int t = 1; t <= r; ++t) {
        // Per-cluster membership and walk bounds as of the end of step t-1.
        std::map<NodeId, std::vector<char>> member;
        for (NodeId v = 0; v < n; ++v)
            if (cl.center[v] >= 0) {
                auto it = member.find(cl.center[v]);
                if (it == member.end())
                    it = member.emplace(cl.center[v], std::vector<char>(n, 0)).first;
                it->second[v] = 1;
            }
        std::map<NodeId, std::vector<std::array<int, 2>>> bounds;
        for (auto& [c, allowed] : member)
            bounds.emplace(c, fnc_detail::walk_bounds(g, m, c, allowed));

        const bool last_edge_matched = (t % 2 == 0);  // edge kinds run 0,1,0,... from the center
        std::vector<std::pair<NodeId, NodeId>> joins;  // (node, center)
        for (NodeId v = 0; v < n; ++v) {
            if (cl.center[v] >= 0) continue;
            NodeId best = -1;
            std::vector<NodeId> candidates;
            for (NodeId w : g.neighbors(v)) {
                if (cl.center[w] < 0) continue;
                if (m.contains(Edge(v, w)) != last_edge_matched) continue;
                candidates.push_back(cl.center[w]);
            }
            std::sort(candidates.begin(), candidates.end());
            candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
            for (NodeId c : candidates) {
                fnc_detail::PathSearch search{g, m, c, member.at(c), bounds.at(c)};
                if (search.exists(v, t, last_edge_matched)) {
                    best = c;
                    break;
                }
            }
            if (best >= 0) joins.emplace_back(v, best);
        }
        for (auto [v, c] : joins) {
            cl.center[v] = c;
            cl.join_round[v] = t;
        }
    }
    return cl;
}

// Uniform: all path nodes inside one cluster (by default at the final time;
// pass t to evaluate against the step-t snapshot).
inline bool is_uniform(const Clustering& cl, const std::vector<NodeId>& nodes, int t = -1) {
    if (nodes.empty()) return false;
    NodeId c = cl.center[nodes.front()];
    if (c < 0) return false;
    for (NodeId v : nodes) {
        if (cl.center[v] != c) return false;
        if (t >= 0 && cl.join_round[v] > t) return false;
    }
    return true;
}

// Almost uniform: uniform once the terminal node (the path's endpoint, last
// in the sequence) is set aside.
inline bool is_almost_uniform(const Clustering& cl, const std::vector<NodeId>& nodes, int t = -1) {
    if (nodes.empty()) return false;
    std::vector<NodeId> rest(nodes.begin(), nodes.end() - 1);
    if (rest.empty()) return true;  // single-node path
    return is_uniform(cl, rest, t);
}

// Per-node reachability values and predecessor sets of the clustering.
struct ReachTable {
    int radius = 0;
    std::vector<std::array<int, 2>> reach;     // [v][theta], kUnreachable if none
    std::vector<std::vector<NodeId>> pred;     // sorted neighbor sets

    int reach_of(NodeId v, int theta) const { return reach[v][theta]; }
    bool bireachable(NodeId v) const {
        return reach[v][0] < kUnreachable && reach[v][1] < kUnreachable;
    }
    int min_reach(NodeId v) const { return std::min(reach[v][0], reach[v][1]); }
};

// Shortest uniform theta-path lengths per node, evaluated against the final
// radius-r clustering, plus predecessor sets.  Values above r report as
// unreachable rather than being searched.
inline ReachTable reachability_table(const Graph& g, const Matching& m, const Clustering& cl,
                                     int r) {
    if (r > cl.radius) throw InvalidParams("table radius exceeds clustering radius");
    const int n = g.n();
    ReachTable table;
    table.radius = r;
    table.reach.assign(n, {kUnreachable, kUnreachable});
    table.pred.assign(n, {});

    std::map<NodeId, std::vector<char>> member;
    for (NodeId v = 0; v < n; ++v)
        if (cl.center[v] >= 0) {
            auto it = member.find(cl.center[v]);
            if (it == member.end()) it = member.emplace(cl.center[v], std::vector<char>(n, 0)).first;
            it->second[v] = 1;
        }
    std::map<NodeId, std::vector<std::array<int, 2>>> bounds;
    for (auto& [c, allowed] : member)
        bounds.emplace(c, fnc_detail::walk_bounds(g, m, c, allowed));

    for (NodeId v = 0; v < n; ++v) {
        if (cl.center[v] < 0) continue;
        if (m.is_free(v)) {
            table.reach[v] = {0, 0};
            continue;
        }
        NodeId c = cl.center[v];
        fnc_detail::PathSearch search{g, m, c, member.at(c), bounds.at(c)};
        for (int theta = 0; theta < 2; ++theta) {
            // 0-paths have odd length, 1-paths even length.
            for (int len = (theta == 0 ? 1 : 2); len <= r; len += 2) {
                if (search.exists(v, len, theta == 1)) {
                    table.reach[v][theta] = len;
                    break;
                }
            }
        }
    }

    // Predecessors: neighbors one step closer along a shortest uniform
    // alternating path.  The terminal edge kind of that path is fixed by the
    // parity of the node's minimum reach.
    for (NodeId v = 0; v < n; ++v) {
        if (cl.center[v] < 0 || m.is_free(v)) continue;
        int jr = table.min_reach(v);
        if (jr >= kUnreachable) continue;
        bool last_matched = (jr % 2 == 0);
        int prev_theta = last_matched ? 0 : 1;  // path alternates into the neighbor
        for (NodeId w : g.neighbors(v)) {
            if (cl.center[w] != cl.center[v]) continue;
            if (m.contains(Edge(v, w)) != last_matched) continue;
            if (table.reach[w][prev_theta] == jr - 1) table.pred[v].push_back(w);
        }
    }
    return table;
}

// Delay of node v along a walk: the gap between its two reach values if the
// walk puts two unmatched edges next to v, else zero.
inline int delay(const Graph& g, const Matching& m, const ReachTable& table,
                 const std::vector<NodeId>& walk, size_t pos) {
    if (pos == 0 || pos + 1 >= walk.size()) return 0;
    NodeId v = walk[pos];
    bool left = m.contains(Edge(walk[pos - 1], v));
    bool right = m.contains(Edge(v, walk[pos + 1]));
    if (left || right) return 0;
    if (table.reach[v][0] >= kUnreachable || table.reach[v][1] >= kUnreachable)
        throw UndefinedReachability(v);
    return table.reach[v][1] - table.reach[v][0];
}

struct PathMetrics {
    int length = 0;
    int total_delay = 0;
    int promoted_length = 0;  // length + sum of delays
};

inline PathMetrics path_metrics(const Graph& g, const Matching& m, const ReachTable& table,
                                const std::vector<NodeId>& walk) {
    PathMetrics pm;
    pm.length = static_cast<int>(walk.size()) - 1;
    for (size_t i = 0; i < walk.size(); ++i) pm.total_delay += delay(g, m, table, walk, i);
    pm.promoted_length = pm.length + pm.total_delay;
    return pm;
}

// Tenacity of a node: the sum of its two reach values.
inline int tenacity_node(const ReachTable& table, NodeId v) {
    if (table.reach[v][0] >= kUnreachable || table.reach[v][1] >= kUnreachable)
        throw UndefinedReachability(v);
    return table.reach[v][0] + table.reach[v][1];
}

// Tenacity of a theta-edge {u,w}: l1 + l2 + 1 where l1, l2 are the endpoints'
// (1-theta)-reachabilities.
inline int tenacity_edge(const Graph& g, const Matching& m, const ReachTable& table,
                         const Edge& e) {
    if (!g.has_edge(e)) throw EdgeNotInGraph(e.u, e.v);
    int other = m.contains(e) ? 0 : 1;
    if (table.reach[e.u][other] >= kUnreachable) throw UndefinedReachability(e.u);
    if (table.reach[e.v][other] >= kUnreachable) throw UndefinedReachability(e.v);
    return table.reach[e.u][other] + table.reach[e.v][other] + 1;
}

// All shortcuts of a node: paths toward the center that follow predecessor
// links.  Capped; `overflow` signals the cap fired and the list is partial.
inline std::vector<std::vector<NodeId>> shortcuts_of(const ReachTable& table, NodeId v,
                                                     size_t cap, bool& overflow) {
    overflow = false;
    std::vector<std::vector<NodeId>> out;
    std::vector<NodeId> cur{v};
    auto dfs = [&](auto&& self, NodeId x) -> void {
        if (overflow) return;
        if (table.pred[x].empty()) {  // reached the center (free nodes have no preds)
            if (out.size() >= cap) {
                overflow = true;
                return;
            }
            out.push_back(cur);
            return;
        }
        for (NodeId p : table.pred[x]) {
            cur.push_back(p);
            self(self, p);
            cur.pop_back();
        }
    };
    dfs(dfs, v);
    return out;
}

}  // namespace cmatch
