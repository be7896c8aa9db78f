#include <catch2/catch_amalgamated.hpp>

#include <cmatch/fnc.hpp>
#include <cmatch/gen.hpp>
#include <cmatch/verifier.hpp>

#include "fixtures.hpp"

using namespace cmatch;

TEST_CASE("fig1 gadget matches the shared fixture and its reach regression") {
    auto inst = gen_fig1_gadget();
    auto fix = fixtures::bfs_trap();
    REQUIRE(inst.graph.edges() == fix.graph.edges());
    REQUIRE(inst.matching.edges() == fix.matching.edges());
    REQUIRE(inst.matching.size() == 3);
    auto cl = fnc_clustering(inst.graph, inst.matching, 5);
    auto table = reachability_table(inst.graph, inst.matching, cl, 5);
    REQUIRE(table.reach[3][0] == 3);
    REQUIRE(table.reach[4][0] == 5);
}

TEST_CASE("even perfect path is a verified instance") {
    auto inst = gen_even_path_perfect(6);
    REQUIRE(inst.matching.size() == 3);
    REQUIRE(verify(inst.graph, inst.matching).verified());
    REQUIRE_THROWS_AS(gen_even_path_perfect(5), InvalidParams);
}

TEST_CASE("nested odd cycles validate and scale with depth") {
    for (int depth : {1, 2, 3}) {
        auto inst = gen_nested_odd_cycles(depth);
        REQUIRE(inst.graph.n() == 3 + 4 * depth);
        REQUIRE(inst.matching.size() == 1 + 2 * depth);
        // One free node; everything else matched.
        REQUIRE(inst.matching.free_nodes() == std::vector<NodeId>{0});
        // The clustering protocol agrees with the reference on these gadgets.
        int r = 2 * inst.graph.n();
        auto run = run_dfnc(inst.graph, inst.matching, r, FlowMode::unbounded, 1);
        auto cl = fnc_clustering(inst.graph, inst.matching, r);
        auto table = reachability_table(inst.graph, inst.matching, cl, r);
        for (NodeId v = 0; v < inst.graph.n(); ++v) {
            REQUIRE(run.result.states[v].cid == cl.center[v]);
            REQUIRE(run.result.states[v].pred == table.pred[v]);
        }
    }
    REQUIRE_THROWS_AS(gen_nested_odd_cycles(0), InvalidParams);
}

TEST_CASE("nested cycles produce nontrivial flow traffic") {
    auto inst = gen_nested_odd_cycles(2);
    auto run = run_dfnc(inst.graph, inst.matching, 2 * inst.graph.n(), FlowMode::unbounded, 1);
    int discards = 0;
    for (const auto& st : run.result.states) discards += static_cast<int>(st.discards.size());
    int absorbed = 0;
    for (const auto& st : run.result.states) absorbed += static_cast<int>(st.absorbed.size());
    REQUIRE(discards + absorbed >= 2);  // one unit per nested cycle
}

TEST_CASE("interlocked cycles share one stem") {
    auto inst = gen_interlocked_cycles();
    REQUIRE(inst.graph.n() == 11);
    REQUIRE(inst.matching.free_nodes() == std::vector<NodeId>{0});
    REQUIRE(inst.graph.degree(2) == 5);  // stem carries both cycles plus the stem path
}

TEST_CASE("random instances are valid and reproducible") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto a = gen_random_with_random_matching(10, seed);
        auto b = gen_random_with_random_matching(10, seed);
        REQUIRE(a.graph.edges() == b.graph.edges());
        REQUIRE(a.matching.edges() == b.matching.edges());
    }
    auto c = gen_random_gnm(12, 20, 7);
    REQUIRE(c.graph.n() == 12);
    REQUIRE(c.graph.m() == 20);
}

TEST_CASE("generate dispatches families and rejects unknown names") {
    for (const auto& family : known_families()) {
        auto inst = generate(family, 8, 2, 3);
        REQUIRE(inst.graph.n() >= 1);
    }
    REQUIRE_THROWS_AS(generate("no_such_family", 8, 2, 3), InvalidParams);
}
