#pragma once

#include <string>
#include <vector>

#include "graph.hpp"
#include "oracle.hpp"
#include "rng.hpp"

namespace cmatch {

// Instance generators for test campaigns.  Every family emits a valid
// (graph, matching) pair; adversarial families are built around odd-cycle
// structures that stress the clustering's flow machinery.

struct Instance {
    Graph graph;
    Matching matching;
};

namespace gen_detail {

inline Matching random_greedy_matching(const Graph& g, Rng& rng, double keep_prob) {
    std::vector<Edge> shuffled = g.edges();
    for (size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
    std::vector<Edge> chosen;
    std::vector<bool> used(g.n(), false);
    for (const Edge& e : shuffled)
        if (!used[e.u] && !used[e.v] && rng.unit() < keep_prob) {
            chosen.push_back(e);
            used[e.u] = used[e.v] = true;
        }
    return Matching::validate(g, chosen);
}

// Appends an alternating 5-cycle rooted at `host` whose first and last edges
// are unmatched; the cycle's two matched edges keep it a valid matching
// extension.  Returns a node strictly inside the cycle that carries a matched
// edge, usable as the next nesting host.
inline NodeId append_odd_cycle(std::vector<Edge>& edges, std::vector<Edge>& matched, int& next,
                               NodeId host) {
    NodeId x1 = next++, x2 = next++, x3 = next++, x4 = next++;
    edges.emplace_back(host, x1);
    edges.emplace_back(x1, x2);
    edges.emplace_back(x2, x3);
    edges.emplace_back(x3, x4);
    edges.emplace_back(x4, host);
    matched.emplace_back(x1, x2);
    matched.emplace_back(x3, x4);
    return x2;
}

}  // namespace gen_detail

// G(n,m) with a random greedy matching.
inline Instance gen_random_gnm(int n, int m, std::uint64_t seed, double keep_prob = 0.6) {
    if (n < 1) throw InvalidParams("random_gnm needs n >= 1");
    long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
    if (m < 0 || m > max_edges) throw InvalidParams("random_gnm: bad edge count");
    Rng rng(mix(seed, 0xa11ce));
    std::vector<Edge> all;
    all.reserve(max_edges);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) all.emplace_back(u, v);
    for (size_t i = all.size(); i > 1; --i) std::swap(all[i - 1], all[rng.below(i)]);
    all.resize(m);
    Graph g = Graph::from_edges(n, all);
    Matching match = gen_detail::random_greedy_matching(g, rng, keep_prob);
    return {g, match};
}

// Path with every other edge matched starting from the front; odd n leaves
// the tail free.
inline Instance gen_path(int n) {
    if (n < 1) throw InvalidParams("path needs n >= 1");
    std::vector<Edge> es, matched;
    for (int i = 0; i + 1 < n; ++i) {
        es.emplace_back(i, i + 1);
        if (i % 2 == 0) matched.emplace_back(i, i + 1);
    }
    Graph g = Graph::from_edges(n, es);
    return {g, Matching::validate(g, matched)};
}

// Even path with a perfect matching: a canonical verified instance.
inline Instance gen_even_path_perfect(int n) {
    if (n < 2 || n % 2 != 0) throw InvalidParams("even_path_perfect needs even n >= 2");
    return gen_path(n);
}

// The 7-node gadget in which greedy alternating BFS misjudges distances:
// reach(u=3) is 3 on the unmatched side and 4 on the matched side, and
// reach(v=4) is 5.
inline Instance gen_fig1_gadget() {
    auto g = Graph::from_edges(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {2, 6}, {6, 3}});
    auto m = Matching::validate(g, {Edge(1, 2), Edge(4, 5), Edge(6, 3)});
    return {g, m};
}

// A stem path from the free node into `depth` nested alternating 5-cycles:
// each inner cycle hangs off a node strictly inside the previous one, so
// flows of the inner middle edges must circulate through the outer cycles.
inline Instance gen_nested_odd_cycles(int depth) {
    if (depth < 1) throw InvalidParams("nested_odd_cycles needs depth >= 1");
    std::vector<Edge> edges, matched;
    int next = 0;
    NodeId f = next++;
    NodeId a = next++, b = next++;
    edges.emplace_back(f, a);
    edges.emplace_back(a, b);
    matched.emplace_back(a, b);
    NodeId host = b;
    for (int d = 0; d < depth; ++d)
        host = gen_detail::append_odd_cycle(edges, matched, next, host);
    Graph g = Graph::from_edges(next, edges);
    return {g, Matching::validate(g, matched)};
}

// Two alternating 5-cycles sharing their stem, fed through one stem path:
// both cycles' unit flows meet at the shared stem.
inline Instance gen_interlocked_cycles() {
    std::vector<Edge> edges, matched;
    int next = 0;
    NodeId f = next++;
    NodeId a = next++, s = next++;
    edges.emplace_back(f, a);
    edges.emplace_back(a, s);
    matched.emplace_back(a, s);
    gen_detail::append_odd_cycle(edges, matched, next, s);
    gen_detail::append_odd_cycle(edges, matched, next, s);
    Graph g = Graph::from_edges(next, edges);
    return {g, Matching::validate(g, matched)};
}

// Random graph with an independently sampled keep probability, so matchings
// range from sparse to near-maximal.
inline Instance gen_random_with_random_matching(int n, std::uint64_t seed) {
    Rng rng(mix(seed, 0xbeef));
    long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
    int lo = n >= 2 ? n / 2 : 0;
    int hi = static_cast<int>(std::min<long long>(3 * n, max_edges));
    int m = hi <= lo ? lo : lo + static_cast<int>(rng.below(hi - lo + 1));
    double keep = 0.3 + 0.6 * rng.unit();
    return gen_random_gnm(n, m, rng.next(), keep);
}

inline Instance generate(const std::string& family, int n, int depth, std::uint64_t seed) {
    if (family == "random_gnm") {
        Rng rng(mix(seed, 0x6e6d));
        long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
        int lo = n >= 2 ? n / 2 : 0;
        int hi = static_cast<int>(std::min<long long>(3 * n, max_edges));
        int m = hi <= lo ? lo : lo + static_cast<int>(rng.below(hi - lo + 1));
        return gen_random_gnm(n, m, seed);
    }
    if (family == "path") return gen_path(n);
    if (family == "even_path_perfect") return gen_even_path_perfect(n);
    if (family == "fig1_gadget") return gen_fig1_gadget();
    if (family == "nested_odd_cycles") return gen_nested_odd_cycles(std::max(depth, 1));
    if (family == "interlocked_cycles") return gen_interlocked_cycles();
    if (family == "random_with_random_matching") return gen_random_with_random_matching(n, seed);
    throw InvalidParams("unknown family " + family);
}

inline const std::vector<std::string>& known_families() {
    static const std::vector<std::string> families = {
        "random_gnm",        "path",
        "even_path_perfect", "fig1_gadget",
        "nested_odd_cycles", "interlocked_cycles",
        "random_with_random_matching"};
    return families;
}

}  // namespace cmatch
