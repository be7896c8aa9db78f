#include <catch2/catch_amalgamated.hpp>

#include <cmatch/tree_ops.hpp>

using namespace cmatch;

TEST_CASE("bfs and election on a path") {
    auto g = Graph::from_edges(3, {{0, 1}, {1, 2}});
    auto bfs = build_bfs_and_elect(g);
    REQUIRE(bfs.leader == 0);
    REQUIRE(bfs.depth == 2);
    REQUIRE(bfs.parent[0] == -1);
    REQUIRE(bfs.parent[1] == 0);
    REQUIRE(bfs.parent[2] == 1);
    REQUIRE(bfs.dist == std::vector<int>{0, 1, 2});
}

TEST_CASE("bfs on a star with center 3") {
    auto g = Graph::from_edges(4, {{3, 0}, {3, 1}, {3, 2}});
    auto bfs = build_bfs_and_elect(g);
    REQUIRE(bfs.leader == 0);
    REQUIRE(bfs.depth == 2);  // 0 -> 3 -> {1, 2}
    REQUIRE(bfs.dist[3] == 1);
    REQUIRE(bfs.dist[1] == 2);
    REQUIRE(bfs.dist[2] == 2);
}

TEST_CASE("bfs on a single node") {
    auto g = Graph::from_edges(1, std::initializer_list<Edge>{});
    auto bfs = build_bfs_and_elect(g);
    REQUIRE(bfs.leader == 0);
    REQUIRE(bfs.depth == 0);
}

TEST_CASE("bfs rejects disconnected graphs") {
    auto g = Graph::from_edges(4, {{0, 1}, {2, 3}});
    REQUIRE_THROWS_AS(build_bfs_and_elect(g), Disconnected);
}

TEST_CASE("bfs tree is a valid shortest-path tree on random graphs") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + static_cast<int>(rng.below(14));
        std::vector<Edge> es;
        for (int i = 1; i < n; ++i) es.emplace_back(static_cast<int>(rng.below(i)), i);  // spanning
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.unit() < 0.2) es.emplace_back(u, v);
        std::sort(es.begin(), es.end());
        es.erase(std::unique(es.begin(), es.end()), es.end());
        auto g = Graph::from_edges(n, es);
        auto bfs = build_bfs_and_elect(g);
        REQUIRE(bfs.leader == 0);
        // dist = true BFS levels
        std::vector<int> dist(n, -1);
        std::vector<NodeId> q{0};
        dist[0] = 0;
        for (size_t i = 0; i < q.size(); ++i)
            for (NodeId w : g.neighbors(q[i]))
                if (dist[w] < 0) {
                    dist[w] = dist[q[i]] + 1;
                    q.push_back(w);
                }
        REQUIRE(bfs.dist == dist);
        for (NodeId v = 0; v < n; ++v)
            if (v != 0) {
                REQUIRE(g.has_edge(v, bfs.parent[v]));
                REQUIRE(bfs.dist[bfs.parent[v]] == bfs.dist[v] - 1);
            }
        REQUIRE(bfs.depth == *std::max_element(dist.begin(), dist.end()));
        REQUIRE(bfs.rounds <= 4 * n + 8);
    }
}

TEST_CASE("convergecast aggregates: sum of degrees on a triangle") {
    auto g = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
    auto bfs = build_bfs_and_elect(g);
    std::vector<std::int64_t> degs = {2, 2, 2};
    auto res = convergecast_aggregate(g, bfs, degs, AggOp::sum);
    REQUIRE(res.value == 6);
}

TEST_CASE("convergecast matched-half counts give matching size") {
    auto g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    auto m = Matching::validate(g, {Edge(1, 2)});
    auto bfs = build_bfs_and_elect(g);
    std::vector<std::int64_t> halves(4);
    for (NodeId v = 0; v < 4; ++v) halves[v] = m.is_free(v) ? 0 : 1;
    auto res = convergecast_aggregate(g, bfs, halves, AggOp::sum);
    REQUIRE(res.value / 2 == m.size());
}

TEST_CASE("convergecast min over ids returns the leader id") {
    auto g = Graph::from_edges(3, {{0, 1}, {1, 2}});
    auto bfs = build_bfs_and_elect(g);
    std::vector<std::int64_t> ids = {0, 1, 2};
    auto res = convergecast_aggregate(g, bfs, ids, AggOp::min);
    REQUIRE(res.value == bfs.leader);
}
