#pragma once

#include <string>
#include <vector>

#include <cmatch/dfnc.hpp>
#include <cmatch/fnc.hpp>
#include <cmatch/rng.hpp>

// Helpers shared by the unit and acceptance suites.

namespace support {

// Compare a protocol run's per-node outcome (cid, pred, r0, r1) against the
// sequential clustering reference at the same radius.  Returns a description
// of the first mismatch, or empty when everything agrees.
inline std::string compare_with_reference(const cmatch::Graph& g, const cmatch::Matching& m,
                                          const std::vector<cmatch::DfncNodeState>& states,
                                          const cmatch::Clustering& cl,
                                          const cmatch::ReachTable& table) {
    using cmatch::kUnreachable;
    auto reg_of = [](int table_value) { return table_value >= kUnreachable ? -1 : table_value; };
    for (cmatch::NodeId v = 0; v < g.n(); ++v) {
        const auto& st = states[v];
        if (st.cid != cl.center[v])
            return "node " + std::to_string(v) + ": cid " + std::to_string(st.cid) + " vs " +
                   std::to_string(cl.center[v]);
        if (st.r0 != reg_of(table.reach[v][0]))
            return "node " + std::to_string(v) + ": r0 " + std::to_string(st.r0) + " vs " +
                   std::to_string(reg_of(table.reach[v][0]));
        if (st.r1 != reg_of(table.reach[v][1]))
            return "node " + std::to_string(v) + ": r1 " + std::to_string(st.r1) + " vs " +
                   std::to_string(reg_of(table.reach[v][1]));
        if (st.pred != table.pred[v]) return "node " + std::to_string(v) + ": pred sets differ";
    }
    return {};
}

// Random test instance: sparse-to-medium graph plus a random greedy matching.
inline std::pair<cmatch::Graph, cmatch::Matching> random_instance(cmatch::Rng& rng, int min_n,
                                                                  int max_n,
                                                                  double keep_prob = 0.6) {
    using cmatch::Edge;
    int n = min_n + static_cast<int>(rng.below(max_n - min_n + 1));
    std::vector<Edge> es;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.unit() < 2.5 / n) es.emplace_back(u, v);
    auto g = cmatch::Graph::from_edges(n, es);
    std::vector<Edge> shuffled = g.edges();
    for (size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
    std::vector<Edge> chosen;
    std::vector<bool> used(n, false);
    for (const Edge& e : shuffled)
        if (!used[e.u] && !used[e.v] && rng.unit() < keep_prob) {
            chosen.push_back(e);
            used[e.u] = used[e.v] = true;
        }
    return {g, cmatch::Matching::validate(g, chosen)};
}

}  // namespace support
