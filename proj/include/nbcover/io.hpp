#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "graph.hpp"

namespace nbcover {

/// All numeric CLI/CSV output uses 12 significant digits.
inline std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

// Text format, one graph per file:
//   graph <n_vertices>
//   edge <id> <tail> <head>        (one per directed edge, ascending ids)
//   inv <id> <id>                  (one per involution orbit; equal ids = half-loop)
inline std::string graph_to_text(const Graph& g) {
    std::ostringstream os;
    os << "graph " << g.vertex_count() << "\n";
    for (EdgeId e = 0; e < g.dir_edge_count(); ++e)
        os << "edge " << e << " " << g.tail(e) << " " << g.head(e) << "\n";
    for (EdgeId e = 0; e < g.dir_edge_count(); ++e)
        if (e <= g.inv(e)) os << "inv " << e << " " << g.inv(e) << "\n";
    return os.str();
}

inline Graph graph_from_text(const std::string& text) {
    std::istringstream is(text);
    std::string word;
    int n_vertices = -1;
    std::vector<DirectedEdge> edges;
    std::vector<EdgeId> inv;
    std::vector<std::pair<EdgeId, EdgeId>> inv_pairs;
    while (is >> word) {
        if (word == "graph") {
            if (!(is >> n_vertices)) throw ParseError("graph header");
        } else if (word == "edge") {
            int id, t, h;
            if (!(is >> id >> t >> h)) throw ParseError("edge line");
            if (id != static_cast<int>(edges.size())) throw ParseError("edge ids must be dense");
            edges.push_back({t, h});
        } else if (word == "inv") {
            int a, b;
            if (!(is >> a >> b)) throw ParseError("inv line");
            inv_pairs.emplace_back(a, b);
        } else if (!word.empty() && word[0] == '#') {
            std::string rest;
            std::getline(is, rest);
        } else {
            throw ParseError("unknown directive: " + word);
        }
    }
    if (n_vertices < 0) throw ParseError("missing graph header");
    inv.assign(edges.size(), -1);
    for (auto [a, b] : inv_pairs) {
        if (a < 0 || b < 0 || a >= static_cast<int>(edges.size()) ||
            b >= static_cast<int>(edges.size()))
            throw ParseError("inv id out of range");
        if (a == b && edges[a].tail != edges[a].head) throw HalfLoopHeadTailMismatch();
        inv[a] = b;
        inv[b] = a;
    }
    for (EdgeId e = 0; e < static_cast<int>(edges.size()); ++e)
        if (inv[e] < 0) throw ParseError("edge missing from involution");
    return Graph(n_vertices, std::move(edges), std::move(inv));
}

inline void save_graph(const Graph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for write: " + path);
    out << graph_to_text(g);
}

inline Graph load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return graph_from_text(ss.str());
}

}  // namespace nbcover
