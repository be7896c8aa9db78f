#pragma once

#include <cmatch/graph.hpp>

// Shared hand-built instances used across suites.
//
// bfs_trap: the 7-node gadget where greedy alternating BFS lies about
// distances.  Ids: f=0, a=1, b=2, u=3, v=4, c=5, w=6.
//   edges: f-a, a-b (M), b-u, u-v, v-c (M), b-w, w-u (M)
// The shortest alternating f..u path has length 3, f..v has length 5, and the
// alternating path to v passes u at prefix length 4.
//
// twin_cycles_a / twin_cycles_b: the pair distinguishing a node strictly
// inside a reachable minimal odd cycle (bireachable) from the stem-only case.
// Ids: f=0, a=1, z=2, b=3, c=4, v=5, w=6, p=7, q=8, s=9, t=10 (+ g=11, h=12
// in variant a).
//   shared edges: f-a, a-z (M), z-b, b-c, c-v (M), b-w (M),
//                 w-p, w-q, p-s (M), s-t, q-t (M)
//   variant a adds: z-g, g-h (M), h-p
// In variant a node w is strictly inside the odd cycle stemmed at z and is
// bireachable (reach 4 and 9); in variant b its 0-reach never materializes.

namespace fixtures {

struct Instance {
    cmatch::Graph graph;
    cmatch::Matching matching;
};

inline Instance bfs_trap() {
    using cmatch::Edge;
    auto g = cmatch::Graph::from_edges(
        7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {2, 6}, {6, 3}});
    auto m = cmatch::Matching::validate(g, {Edge(1, 2), Edge(4, 5), Edge(6, 3)});
    return {g, m};
}

inline Instance twin_cycles_a() {
    using cmatch::Edge;
    auto g = cmatch::Graph::from_edges(13, {{0, 1},
                                            {1, 2},
                                            {2, 3},
                                            {3, 4},
                                            {4, 5},
                                            {3, 6},
                                            {6, 7},
                                            {6, 8},
                                            {7, 9},
                                            {9, 10},
                                            {8, 10},
                                            {2, 11},
                                            {11, 12},
                                            {12, 7}});
    auto m = cmatch::Matching::validate(
        g, {Edge(1, 2), Edge(4, 5), Edge(3, 6), Edge(7, 9), Edge(8, 10), Edge(11, 12)});
    return {g, m};
}

inline Instance twin_cycles_b() {
    using cmatch::Edge;
    auto g = cmatch::Graph::from_edges(
        11, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 6}, {6, 7}, {6, 8}, {7, 9}, {9, 10}, {8, 10}});
    auto m = cmatch::Matching::validate(
        g, {Edge(1, 2), Edge(4, 5), Edge(3, 6), Edge(7, 9), Edge(8, 10)});
    return {g, m};
}

}  // namespace fixtures
