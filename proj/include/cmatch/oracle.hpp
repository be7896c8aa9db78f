#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fnc.hpp"
#include "graph.hpp"

namespace cmatch {

// Exhaustive ground truth for testing.  Deliberately avoids blossom-shrinking
// machinery: depth-limited search over simple alternating paths is simpler to
// trust, and trust is this module's entire job.  Desk scale only.

struct ShortestAugmenting {
    int length = 0;
    std::vector<AltPath> paths;  // all shortest ones, reversal-deduplicated
    bool overflow = false;       // hit the enumeration cap; paths is partial
};

namespace oracle_detail {

// Depth-limited DFS over simple alternating paths from one free node.
// `emit` sees every augmenting path (length <= cap) exactly once per
// direction of traversal.
template <class Emit>
void augmenting_dfs(const Graph& g, const Matching& m, NodeId f, int len_cap, Emit&& emit) {
    std::vector<NodeId> path{f};
    std::uint64_t seen = 1ULL << f;
    auto dfs = [&](auto&& self, NodeId v, bool next_matched) -> void {
        if (static_cast<int>(path.size()) - 1 >= len_cap) return;
        for (NodeId w : g.neighbors(v)) {
            if (seen & (1ULL << w)) continue;
            if (m.contains(Edge(v, w)) != next_matched) continue;
            path.push_back(w);
            seen |= 1ULL << w;
            if (!next_matched && m.is_free(w)) {
                emit(path);
            } else {
                self(self, w, !next_matched);
            }
            seen &= ~(1ULL << w);
            path.pop_back();
        }
    };
    dfs(dfs, f, false);
}

}  // namespace oracle_detail

// Shortest augmenting paths by exhaustive search.  Returns nullopt when no
// augmenting path of length <= len_cap exists (len_cap defaults to 2|M|+1,
// which is an upper bound on any augmenting path length).  Collects all
// shortest paths up to `path_cap`; on overflow the result degrades to
// length-only (overflow flag set, path list partial).
inline std::optional<ShortestAugmenting> shortest_augmenting(const Graph& g, const Matching& m,
                                                             int len_cap = -1,
                                                             std::size_t path_cap = 100000) {
    if (g.n() > 60) throw InvalidParams("oracle supports n <= 60");
    if (len_cap < 0) len_cap = 2 * m.size() + 1;

    int best = len_cap + 1;
    for (NodeId f : m.free_nodes()) {
        oracle_detail::augmenting_dfs(g, m, f, std::min(len_cap, best),
                                      [&](const std::vector<NodeId>& path) {
                                          int len = static_cast<int>(path.size()) - 1;
                                          if (len < best) best = len;
                                      });
    }
    if (best > len_cap) return std::nullopt;

    ShortestAugmenting out;
    out.length = best;
    for (NodeId f : m.free_nodes()) {
        oracle_detail::augmenting_dfs(g, m, f, best, [&](const std::vector<NodeId>& path) {
            if (static_cast<int>(path.size()) - 1 != best) return;
            if (path.front() > path.back()) return;  // a path and its reverse are one witness
            if (out.paths.size() >= path_cap) {
                out.overflow = true;
                return;
            }
            out.paths.push_back(AltPath{path});
        });
    }
    return out;
}

// Berge: repeatedly augment along any shortest augmenting path.
inline int maximum_matching_size(const Graph& g, const Matching& start) {
    Matching m = start;
    for (;;) {
        // Existence plus one witness is enough per iteration.
        std::optional<AltPath> witness;
        int best = 2 * m.size() + 2;
        for (NodeId f : m.free_nodes()) {
            oracle_detail::augmenting_dfs(g, m, f, best - 1,
                                          [&](const std::vector<NodeId>& path) {
                                              int len = static_cast<int>(path.size()) - 1;
                                              if (len < best) {
                                                  best = len;
                                                  witness = AltPath{path};
                                              }
                                          });
        }
        if (!witness) return m.size();
        m = augment(g, m, *witness);
    }
}

inline int maximum_matching_size(const Graph& g) {
    return maximum_matching_size(g, Matching::validate(g, std::initializer_list<Edge>{}));
}

// Rank of an augmenting path under a clustering: i + j for the longest
// uniform prefix P[0..i] and suffix P[l-j..l] inside the endpoint clusters.
inline int rank_of(const Clustering& cl, const AltPath& path) {
    const auto& nodes = path.nodes;
    int l = path.length();
    NodeId cs = nodes.front();
    NodeId ct = nodes.back();
    int i = 0;
    while (i + 1 <= l && cl.center[nodes[i + 1]] == cs) ++i;
    int j = 0;
    while (j + 1 <= l && cl.center[nodes[l - j - 1]] == ct) ++j;
    return i + j;
}

// Hopcroft-Karp length bound: with |M| < s*, the shortest augmenting path is
// shorter than 2 s* / (s* - |M|).  Checked in exact integer arithmetic.
inline bool hk_bound_check(const Graph& g, const Matching& m) {
    int s_star = maximum_matching_size(g);
    if (m.size() >= s_star) throw MatchingMaximum();
    auto sa = shortest_augmenting(g, m);
    // |M| < s* guarantees existence (Berge).
    long long len = sa ? sa->length : -1;
    if (len < 0) throw ProtocolViolation("no augmenting path despite |M| < s*");
    return len * (s_star - m.size()) < 2LL * s_star;
}

}  // namespace cmatch
