#include <catch2/catch_amalgamated.hpp>

#include <functional>

#include <cmatch/graph.hpp>
#include <cmatch/rng.hpp>

using namespace cmatch;

namespace {

Graph path_graph(int n) {
    std::vector<Edge> es;
    for (int i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
    return Graph::from_edges(n, es);
}

Graph triangle() { return Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}); }

}  // namespace

TEST_CASE("graph construction validates simplicity") {
    auto g = path_graph(3);
    REQUIRE(g.n() == 3);
    REQUIRE(g.m() == 2);
    REQUIRE(g.has_edge(0, 1));
    REQUIRE(!g.has_edge(0, 2));
    REQUIRE_THROWS_AS(Graph::from_edges(2, {{0, 0}}), InvalidParams);
    REQUIRE_THROWS_AS(Graph::from_edges(2, {{0, 1}, {1, 0}}), InvalidParams);
    REQUIRE_THROWS_AS(Graph::from_edges(0, std::initializer_list<Edge>{}), InvalidParams);
}

TEST_CASE("adjacency is symmetric and sorted") {
    auto g = Graph::from_edges(4, {{2, 0}, {3, 0}, {1, 0}});
    REQUIRE(g.neighbors(0) == std::vector<NodeId>{1, 2, 3});
    for (NodeId v = 1; v < 4; ++v) REQUIRE(g.neighbors(v) == std::vector<NodeId>{0});
}

TEST_CASE("validate_matching on a path") {
    auto g = path_graph(3);
    auto m = Matching::validate(g, {Edge(0, 1)});
    REQUIRE(m.size() == 1);
    REQUIRE(m.mate(0) == 1);
    REQUIRE(m.mate(1) == 0);
    REQUIRE(m.is_free(2));
}

TEST_CASE("validate_matching rejects shared endpoints") {
    auto g = path_graph(3);
    try {
        Matching::validate(g, {Edge(0, 1), Edge(1, 2)});
        FAIL("expected NonDisjointEdges");
    } catch (const NonDisjointEdges& e) {
        REQUIRE(e.node == 1);
    }
}

TEST_CASE("validate_matching rejects foreign edges; empty set is fine") {
    auto g = triangle();
    REQUIRE_THROWS_AS(Matching::validate(g, {Edge(0, 3)}), EdgeNotInGraph);
    auto empty = Matching::validate(g, std::initializer_list<Edge>{});
    REQUIRE(empty.size() == 0);
    for (NodeId v = 0; v < 3; ++v) REQUIRE(empty.is_free(v));
}

TEST_CASE("edge_kind partitions edges") {
    auto g = path_graph(3);
    auto m = Matching::validate(g, {Edge(0, 1)});
    REQUIRE(edge_kind(g, m, Edge(0, 1)) == EdgeKind::one_edge);
    REQUIRE(edge_kind(g, m, Edge(1, 2)) == EdgeKind::zero_edge);
    auto empty = Matching::validate(g, std::initializer_list<Edge>{});
    REQUIRE(edge_kind(g, empty, Edge(1, 2)) == EdgeKind::zero_edge);
    REQUIRE_THROWS_AS(edge_kind(g, m, Edge(0, 2)), EdgeNotInGraph);
}

TEST_CASE("is_augmenting basics") {
    auto g = path_graph(2);
    auto none = Matching::validate(g, std::initializer_list<Edge>{});
    REQUIRE(is_augmenting(g, none, {0, 1}));

    auto g4 = path_graph(4);
    auto m = Matching::validate(g4, {Edge(1, 2)});
    REQUIRE(is_augmenting(g4, m, {0, 1, 2, 3}));
    REQUIRE(!is_augmenting(g4, m, {0, 1, 2}));      // endpoint not free
    REQUIRE(!is_augmenting(g4, m, {0, 2, 1, 3}));   // not a path
    REQUIRE(!is_augmenting(g4, m, {0}));            // too short
}

TEST_CASE("augment flips the path") {
    auto g4 = path_graph(4);
    auto m = Matching::validate(g4, {Edge(1, 2)});
    auto m2 = augment(g4, m, AltPath{{0, 1, 2, 3}});
    REQUIRE(m2.size() == 2);
    REQUIRE(m2.contains(Edge(0, 1)));
    REQUIRE(m2.contains(Edge(2, 3)));

    auto g2 = path_graph(2);
    auto none = Matching::validate(g2, std::initializer_list<Edge>{});
    auto m1 = augment(g2, none, AltPath{{0, 1}});
    REQUIRE(m1.contains(Edge(0, 1)));

    REQUIRE_THROWS_AS(augment(g4, m, AltPath{{0, 1, 2}}), NotAugmenting);
}

// Property: augment always yields a valid matching one edge larger, on random
// instances where we grow augmenting paths by construction.
TEST_CASE("augment property over random alternating paths") {
    Rng rng(20240811);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng.below(12));
        // Random graph
        std::vector<Edge> es;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.unit() < 0.4) es.emplace_back(u, v);
        Graph g = Graph::from_edges(n, es);

        // Random greedy matching
        std::vector<Edge> shuffled = g.edges();
        for (size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
        std::vector<Edge> chosen;
        std::vector<bool> used(n, false);
        for (const Edge& e : shuffled)
            if (!used[e.u] && !used[e.v] && rng.unit() < 0.7) {
                chosen.push_back(e);
                used[e.u] = used[e.v] = true;
            }
        Matching m = Matching::validate(g, chosen);

        // Find any augmenting path by brute force DFS
        std::vector<NodeId> path;
        std::vector<bool> seen(n, false);
        std::function<bool(NodeId, bool)> dfs = [&](NodeId v, bool need_matched) -> bool {
            if (!need_matched && path.size() >= 2 && m.is_free(v)) return true;
            for (NodeId w : g.neighbors(v)) {
                if (seen[w]) continue;
                bool matched = m.contains(Edge(v, w));
                if (matched != need_matched) continue;
                seen[w] = true;
                path.push_back(w);
                if (!need_matched && m.is_free(w) && path.size() % 2 == 0) return true;
                if (dfs(w, !need_matched)) return true;
                path.pop_back();
                seen[w] = false;
            }
            return false;
        };
        bool found = false;
        for (NodeId f = 0; f < n && !found; ++f) {
            if (!m.is_free(f)) continue;
            path = {f};
            std::fill(seen.begin(), seen.end(), false);
            seen[f] = true;
            found = dfs(f, false);
        }
        if (!found) continue;

        REQUIRE(is_augmenting(g, m, path));
        Matching m2 = augment(g, m, AltPath{path});
        REQUIRE(m2.size() == m.size() + 1);
    }
}

TEST_CASE("alt path validity matches brute re-check") {
    Rng rng(7);
    auto g = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {1, 3}});
    auto m = Matching::validate(g, {Edge(1, 2), Edge(3, 4)});
    for (int trial = 0; trial < 500; ++trial) {
        int len = 1 + static_cast<int>(rng.below(5));
        std::vector<NodeId> nodes;
        for (int i = 0; i <= len; ++i) nodes.push_back(static_cast<NodeId>(rng.below(5)));
        bool brute = true;
        std::vector<bool> seen(5, false);
        for (NodeId v : nodes) {
            if (seen[v]) brute = false;
            seen[v] = true;
        }
        for (size_t i = 0; brute && i + 1 < nodes.size(); ++i)
            if (!g.has_edge(nodes[i], nodes[i + 1])) brute = false;
        for (size_t i = 0; brute && i + 2 < nodes.size(); ++i)
            if (m.contains(Edge(nodes[i], nodes[i + 1])) ==
                m.contains(Edge(nodes[i + 1], nodes[i + 2])))
                brute = false;
        REQUIRE(is_alternating(g, m, nodes) == brute);
    }
}
