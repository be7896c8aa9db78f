#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "graph.hpp"

namespace cmatch {

// Graph file: first non-comment line "n m", then m lines "u v" (0-based).
// Matching file: one "u v" line per matched edge.  '#' starts a comment,
// blank lines and extra whitespace are ignored.

namespace detail {
inline std::vector<std::vector<long>> read_int_rows(std::istream& in) {
    std::vector<std::vector<long>> rows;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<long> row;
        long x;
        while (ls >> x) row.push_back(x);
        if (!ls.eof()) throw InvalidParams("bad token in input line: " + line);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return rows;
}
}  // namespace detail

inline Graph read_graph(std::istream& in) {
    auto rows = detail::read_int_rows(in);
    if (rows.empty() || rows[0].size() != 2) throw InvalidParams("graph file: missing 'n m' header");
    int n = static_cast<int>(rows[0][0]);
    size_t m = static_cast<size_t>(rows[0][1]);
    if (rows.size() - 1 != m) throw InvalidParams("graph file: edge count mismatch");
    std::vector<Edge> edges;
    for (size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 2) throw InvalidParams("graph file: edge line needs two ids");
        edges.emplace_back(static_cast<int>(rows[i][0]), static_cast<int>(rows[i][1]));
    }
    return Graph::from_edges(n, edges);
}

inline std::vector<Edge> read_edge_list(std::istream& in) {
    std::vector<Edge> edges;
    for (const auto& row : detail::read_int_rows(in)) {
        if (row.size() != 2) throw InvalidParams("matching file: edge line needs two ids");
        edges.emplace_back(static_cast<int>(row[0]), static_cast<int>(row[1]));
    }
    return edges;
}

inline Graph load_graph(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidParams("cannot open graph file " + path);
    return read_graph(f);
}

inline Matching load_matching(const Graph& g, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidParams("cannot open matching file " + path);
    return Matching::validate(g, read_edge_list(f));
}

inline void write_graph(std::ostream& out, const Graph& g) {
    out << g.n() << ' ' << g.m() << '\n';
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline void write_matching(std::ostream& out, const Matching& m) {
    for (const Edge& e : m.edges()) out << e.u << ' ' << e.v << '\n';
}

inline void save_graph(const std::string& path, const Graph& g) {
    std::ofstream f(path);
    if (!f) throw InvalidParams("cannot write " + path);
    write_graph(f, g);
}

inline void save_matching(const std::string& path, const Matching& m) {
    std::ofstream f(path);
    if (!f) throw InvalidParams("cannot write " + path);
    write_matching(f, m);
}

}  // namespace cmatch
