#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ordered_graph.hpp"

namespace nbcover {

/// Alternating vertex/edge sequence; tail(edges[i]) = vertices[i],
/// head(edges[i]) = vertices[i+1].
struct Walk {
    std::vector<VertexId> vertices;  // length k+1
    std::vector<EdgeId> edges;       // length k

    int length() const { return static_cast<int>(edges.size()); }
    bool closed() const { return !vertices.empty() && vertices.front() == vertices.back(); }
};

inline Walk walk_from_edges(const Graph& g, VertexId start, const std::vector<EdgeId>& edges) {
    Walk w;
    w.vertices.push_back(start);
    for (EdgeId e : edges) {
        if (g.tail(e) != w.vertices.back()) throw Error("walk edges do not chain");
        w.vertices.push_back(g.head(e));
        w.edges.push_back(e);
    }
    return w;
}

inline bool is_non_backtracking(const Graph& g, const Walk& w) {
    for (size_t i = 0; i + 1 < w.edges.size(); ++i)
        if (g.inv(w.edges[i + 1]) == w.edges[i]) return false;
    return true;
}

/// Strictly non-backtracking closed: non-backtracking, closed, and the wrap
/// step is not a backtrack either (inv(e_k) != e_1).
inline bool is_snbc(const Graph& g, const Walk& w) {
    if (w.length() == 0 || !w.closed() || !is_non_backtracking(g, w)) return false;
    return g.inv(w.edges.back()) != w.edges.front();
}

inline constexpr long long kDefaultWalkBudget = 10'000'000;

/// DFS over the oriented line graph; calls fn with the directed edge sequence
/// of each SNBC walk of length k (rooted, directed). Throws BudgetExceeded
/// past `budget` visited states.
template <typename Fn>
inline void for_each_snbc_edges(const Graph& g, int k, Fn&& fn,
                                long long budget = kDefaultWalkBudget) {
    if (k < 1) throw Error("k must be >= 1");
    long long visited = 0;
    std::vector<EdgeId> stack;
    stack.reserve(k);
    auto dfs = [&](auto&& self) -> void {
        if (++visited > budget) throw BudgetExceeded();
        if (static_cast<int>(stack.size()) == k) {
            EdgeId first = stack.front(), last = stack.back();
            if (g.head(last) == g.tail(first) && g.inv(last) != first) fn(stack);
            return;
        }
        EdgeId last = stack.back();
        for (EdgeId f : g.out_edges(g.head(last))) {
            if (f == g.inv(last)) continue;
            stack.push_back(f);
            self(self);
            stack.pop_back();
        }
    };
    for (EdgeId e = 0; e < g.dir_edge_count(); ++e) {
        stack.assign(1, e);
        dfs(dfs);
    }
}

inline void for_each_snbc(const Graph& g, int k, const std::function<void(const Walk&)>& fn,
                          long long budget = kDefaultWalkBudget) {
    for_each_snbc_edges(
        g, k, [&](const std::vector<EdgeId>& edges) { fn(walk_from_edges(g, g.tail(edges[0]), edges)); },
        budget);
}

inline std::vector<Walk> enumerate_snbc(const Graph& g, int k,
                                        long long budget = kDefaultWalkBudget) {
    std::vector<Walk> out;
    for_each_snbc(g, k, [&](const Walk& w) { out.push_back(w); }, budget);
    return out;
}

inline long long snbc_count(const Graph& g, int k, long long budget = kDefaultWalkBudget) {
    long long n = 0;
    for_each_snbc_edges(g, k, [&](const std::vector<EdgeId>&) { ++n; }, budget);
    return n;
}

/// Visited subgraph plus the walk rewritten in its vertex/edge ids.
struct VisitedSubgraph {
    OrderedBGraph ordered;  // vertex_order is 0..n-1 by construction
    Walk walk;              // the input walk in subgraph coordinates
};

/// Smallest subgraph containing all elements of w (with involution partners),
/// carrying the w-first-encountered vertex order, edge order and orientation.
/// When `host_proj` is given the result keeps the induced B-structure.
inline VisitedSubgraph visited_subgraph_full(const Graph& g, const Walk& w,
                                             const GraphMorphism* host_proj = nullptr) {
    std::vector<int> vrank(g.vertex_count(), -1);
    std::vector<VertexId> verts;
    auto touch_vertex = [&](VertexId v) {
        if (vrank[v] < 0) {
            vrank[v] = static_cast<int>(verts.size());
            verts.push_back(v);
        }
    };
    if (!w.vertices.empty()) touch_vertex(w.vertices.front());

    std::vector<int> eorbit_rank(g.dir_edge_count(), -1);
    std::vector<EdgeId> reps;  // oriented reps, first-encounter order
    for (size_t i = 0; i < w.edges.size(); ++i) {
        EdgeId e = w.edges[i];
        touch_vertex(g.head(e));
        if (eorbit_rank[e] < 0) {
            eorbit_rank[e] = static_cast<int>(reps.size());
            eorbit_rank[g.inv(e)] = eorbit_rank[e];
            reps.push_back(e);
        }
    }

    // assemble subgraph edge list grouped by orbed order: rep then inverse
    std::vector<EdgeId> dir_edges;
    std::vector<EdgeId> rep_pos;
    for (EdgeId rep : reps) {
        rep_pos.push_back(static_cast<int>(dir_edges.size()));
        dir_edges.push_back(rep);
        if (g.inv(rep) != rep) dir_edges.push_back(g.inv(rep));
    }
    VisitedSubgraph out;
    out.ordered.graph = subgraph(g, verts, dir_edges);
    out.ordered.vertex_order.resize(verts.size());
    for (size_t i = 0; i < verts.size(); ++i) out.ordered.vertex_order[i] = static_cast<int>(i);
    out.ordered.edge_order = rep_pos;
    if (host_proj) {
        GraphMorphism proj{out.ordered.graph, host_proj->target,
                           std::vector<VertexId>(verts.size()),
                           std::vector<EdgeId>(dir_edges.size())};
        for (size_t i = 0; i < verts.size(); ++i) proj.vertex_map[i] = host_proj->vertex_map[verts[i]];
        for (size_t i = 0; i < dir_edges.size(); ++i)
            proj.edge_map[i] = host_proj->edge_map[dir_edges[i]];
        out.ordered.projection = std::move(proj);
    }
    // walk in subgraph ids
    std::vector<int> edge_new_id(g.dir_edge_count(), -1);
    for (size_t i = 0; i < dir_edges.size(); ++i) edge_new_id[dir_edges[i]] = static_cast<int>(i);
    out.walk.vertices.reserve(w.vertices.size());
    for (VertexId v : w.vertices) out.walk.vertices.push_back(vrank[v]);
    for (EdgeId e : w.edges) out.walk.edges.push_back(edge_new_id[e]);
    return out;
}

inline OrderedBGraph visited_subgraph(const Graph& g, const Walk& w,
                                      const GraphMorphism* host_proj = nullptr) {
    return visited_subgraph_full(g, w, host_proj).ordered;
}

inline int walk_order(const Graph& g, const Walk& w) {
    return order(visited_subgraph(g, w).graph);
}

struct OrderCounts {
    std::vector<long long> by_order;  // m = 0 .. r-1
    long long at_least_r = 0;
};

/// Partition of snbc(g,k) by the order of the visited subgraph.
inline OrderCounts snbc_counts_by_order(const Graph& g, int k, int r,
                                        long long budget = kDefaultWalkBudget) {
    OrderCounts c;
    c.by_order.assign(r, 0);
    for_each_snbc(
        g, k,
        [&](const Walk& w) {
            int m = walk_order(g, w);
            if (m < r)
                c.by_order[m]++;
            else
                c.at_least_r++;
        },
        budget);
    return c;
}

/// v is a bead: degree two and not incident on a self-loop.
inline bool is_bead(const Graph& g, VertexId v) {
    if (g.degree(v) != 2) return false;
    for (EdgeId e : g.out_edges(v))
        if (g.is_self_loop(e)) return false;
    return true;
}

/// Lengths per edge orbit of a suppressed graph, indexed by the position of
/// the orbit representative in Graph::orientation().
using EdgeLengths = std::vector<int>;

struct Suppression {
    Graph graph;          // T = S / V'
    EdgeLengths lengths;  // per orbit of T, orientation() order
    /// directed edges of S forming each directed edge of T (the beaded paths),
    /// indexed by T directed-edge id
    std::vector<std::vector<EdgeId>> paths;
    /// T vertex id per surviving S vertex; -1 for suppressed beads
    std::vector<int> vertex_map;
};

/// Quotient of S by a proper bead set: each directed edge of T is a maximal
/// V'-beaded path of S. Throws NotProperBeadSet when some member is not a bead
/// or a whole cycle component is suppressed.
inline Suppression suppress_beads(const Graph& s, const std::vector<VertexId>& bead_set) {
    std::vector<char> in_set(s.vertex_count(), 0);
    for (VertexId v : bead_set) {
        if (v < 0 || v >= s.vertex_count()) throw InvalidVertex();
        if (!is_bead(s, v)) throw NotProperBeadSet("not a bead");
        in_set[v] = 1;
    }
    std::vector<int> comp = vertex_components(s);
    int ncomp = s.vertex_count() == 0 ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<char> comp_all(ncomp, 1);
    for (VertexId v = 0; v < s.vertex_count(); ++v)
        if (!in_set[v]) comp_all[comp[v]] = 0;
    for (int c = 0; c < ncomp; ++c)
        if (comp_all[c]) throw NotProperBeadSet("component entirely suppressed");

    Suppression out;
    out.vertex_map.assign(s.vertex_count(), -1);
    std::vector<VertexId> kept;
    for (VertexId v = 0; v < s.vertex_count(); ++v)
        if (!in_set[v]) {
            out.vertex_map[v] = static_cast<int>(kept.size());
            kept.push_back(v);
        }

    // directed edges of T are beaded paths, identified by their first edge
    std::vector<EdgeId> firsts;
    std::vector<int> t_edge_of_first(s.dir_edge_count(), -1);
    for (EdgeId e = 0; e < s.dir_edge_count(); ++e)
        if (!in_set[s.tail(e)]) {
            t_edge_of_first[e] = static_cast<int>(firsts.size());
            firsts.push_back(e);
        }
    std::vector<DirectedEdge> t_edges(firsts.size());
    std::vector<EdgeId> t_inv(firsts.size());
    out.paths.resize(firsts.size());
    for (size_t i = 0; i < firsts.size(); ++i) {
        EdgeId e = firsts[i];
        std::vector<EdgeId> path{e};
        while (in_set[s.head(path.back())]) {
            EdgeId cur = path.back();
            VertexId v = s.head(cur);
            EdgeId next = -1;
            for (EdgeId f : s.out_edges(v))
                if (f != s.inv(cur)) next = f;
            path.push_back(next);  // beads have degree exactly two
        }
        t_edges[i] = {out.vertex_map[s.tail(e)], out.vertex_map[s.head(path.back())]};
        t_inv[i] = t_edge_of_first[s.inv(path.back())];
        out.paths[i] = std::move(path);
    }
    out.graph = Graph(static_cast<int>(kept.size()), std::move(t_edges), std::move(t_inv));
    std::vector<EdgeId> reps = out.graph.orientation();
    out.lengths.resize(reps.size());
    for (size_t i = 0; i < reps.size(); ++i)
        out.lengths[i] = static_cast<int>(out.paths[reps[i]].size());
    return out;
}

/// Realization of (t, lengths): each edge of length l > 1 becomes a path with
/// l-1 new beads. Lengths are indexed like Graph::orientation(); half-loops
/// must have length 1.
inline Graph vlg(const Graph& t, const EdgeLengths& lengths) {
    std::vector<EdgeId> reps = t.orientation();
    if (lengths.size() != reps.size()) throw Error("vlg: lengths size mismatch");
    for (size_t i = 0; i < reps.size(); ++i) {
        if (lengths[i] < 1) throw Error("vlg: lengths must be >= 1");
        if (t.is_half_loop(reps[i]) && lengths[i] != 1) throw HalfLoopLengthNotOne();
    }
    std::vector<DirectedEdge> edges;
    std::vector<EdgeId> inv;
    int next_vertex = t.vertex_count();
    for (size_t i = 0; i < reps.size(); ++i) {
        EdgeId e = reps[i];
        if (t.is_half_loop(e)) {
            inv.push_back(static_cast<int>(edges.size()));
            edges.push_back({t.tail(e), t.tail(e)});
            continue;
        }
        VertexId prev = t.tail(e);
        for (int step = 0; step < lengths[i]; ++step) {
            VertexId to = (step + 1 == lengths[i]) ? t.head(e) : next_vertex++;
            int id = static_cast<int>(edges.size());
            edges.push_back({prev, to});
            edges.push_back({to, prev});
            inv.push_back(id + 1);
            inv.push_back(id);
            prev = to;
        }
    }
    return Graph(next_vertex, std::move(edges), std::move(inv));
}

/// Ordered graph without projection arising as a walk reduction; normalized so
/// that equal keys mean (uniquely) isomorphic ordered graphs.
struct HomotopyType {
    OrderedBGraph ordered;

    OrderedKey key() const { return ordered_key(ordered, /*with_letters=*/false); }
    const Graph& graph() const { return ordered.graph; }
};

namespace detail {

/// Rebuild an ordered graph so vertex ids follow vertex_order and edge orbits
/// are laid out rep-first in edge_order sequence.
inline OrderedBGraph normalize_ordered(const OrderedBGraph& s) {
    std::vector<EdgeId> dir_edges;
    std::vector<int> rep_pos;
    for (EdgeId rep : s.edge_order) {
        rep_pos.push_back(static_cast<int>(dir_edges.size()));
        dir_edges.push_back(rep);
        if (s.graph.inv(rep) != rep) dir_edges.push_back(s.graph.inv(rep));
    }
    OrderedBGraph out;
    out.graph = subgraph(s.graph, s.vertex_order, dir_edges);
    out.vertex_order.resize(s.vertex_order.size());
    for (size_t i = 0; i < s.vertex_order.size(); ++i) out.vertex_order[i] = static_cast<int>(i);
    out.edge_order = rep_pos;
    if (s.projection) {
        GraphMorphism proj{out.graph, s.projection->target,
                           std::vector<VertexId>(s.vertex_order.size()),
                           std::vector<EdgeId>(dir_edges.size())};
        for (size_t i = 0; i < s.vertex_order.size(); ++i)
            proj.vertex_map[i] = s.projection->vertex_map[s.vertex_order[i]];
        for (size_t i = 0; i < dir_edges.size(); ++i)
            proj.edge_map[i] = s.projection->edge_map[dir_edges[i]];
        out.projection = std::move(proj);
    }
    return out;
}

}  // namespace detail

/// Homotopy type of a closed non-backtracking walk: suppress all beads of the
/// visited subgraph except the first vertex, keep the first-encounter
/// ordering, and report the beaded-path lengths in edge-order indexing.
inline std::pair<HomotopyType, EdgeLengths> homotopy_type(const Graph& g, const Walk& w) {
    if (!w.closed()) throw NotNonBacktracking("homotopy type requires closed walks");
    if (!is_non_backtracking(g, w)) throw NotNonBacktracking();
    VisitedSubgraph vs = visited_subgraph_full(g, w);
    const Graph& s = vs.ordered.graph;

    std::vector<VertexId> beads;
    for (VertexId v = 1; v < s.vertex_count(); ++v)  // vertex 0 = first of w, kept
        if (is_bead(s, v)) beads.push_back(v);
    Suppression sup = suppress_beads(s, beads);

    // first-encounter data for T edges: the S edge-order position of the first
    // S-edge of each beaded path (S edge-order index = orbit rank in s)
    std::vector<int> s_orbit = s.orbit_index();
    const int t_m = sup.graph.dir_edge_count();
    std::vector<int> first_rank(t_m), oriented(t_m, 0);
    for (EdgeId te = 0; te < t_m; ++te) {
        int best = s.dir_edge_count();
        for (EdgeId se : sup.paths[te]) best = std::min(best, s_orbit[se]);
        first_rank[te] = best;
        // oriented iff the path contains the oriented rep of its earliest orbit
        // in the forward direction; S edge-order reps are the orbit reps of s
        for (EdgeId se : sup.paths[te])
            if (s_orbit[se] == best && se == vs.ordered.edge_order[best]) oriented[te] = 1;
    }
    OrderedBGraph r;
    r.graph = sup.graph;
    r.vertex_order.resize(sup.graph.vertex_count());
    // surviving S vertices keep their relative order, which is first-encounter
    for (int i = 0; i < sup.graph.vertex_count(); ++i) r.vertex_order[i] = i;
    std::vector<EdgeId> reps;
    for (EdgeId te = 0; te < t_m; ++te)
        if (oriented[te]) reps.push_back(te);
    std::sort(reps.begin(), reps.end(),
              [&](EdgeId a, EdgeId b) { return first_rank[a] < first_rank[b]; });
    r.edge_order = reps;

    HomotopyType type{detail::normalize_ordered(r)};
    EdgeLengths lengths(reps.size());
    for (size_t i = 0; i < reps.size(); ++i)
        lengths[i] = static_cast<int>(sup.paths[reps[i]].size());
    return {std::move(type), std::move(lengths)};
}

/// Length filter for snbc_by_type.
struct LengthFilter {
    enum Kind { any, exact, at_least } kind = any;
    EdgeLengths value;

    static LengthFilter make_any() { return {}; }
    static LengthFilter make_exact(EdgeLengths k) { return {exact, std::move(k)}; }
    static LengthFilter make_at_least(EdgeLengths xi) { return {at_least, std::move(xi)}; }

    bool accepts(const EdgeLengths& k) const {
        switch (kind) {
            case any: return true;
            case exact: return k == value;
            case at_least:
                if (k.size() != value.size()) return false;
                for (size_t i = 0; i < k.size(); ++i)
                    if (k[i] < value[i]) return false;
                return true;
        }
        return false;
    }
};

/// Number of SNBC walks of length k in g whose homotopy type is `t` and whose
/// edge-lengths pass the filter.
inline long long snbc_by_type(const Graph& g, int k, const HomotopyType& t,
                              const LengthFilter& filter = LengthFilter::make_any(),
                              long long budget = kDefaultWalkBudget) {
    OrderedKey want = t.key();
    long long count = 0;
    for_each_snbc(
        g, k,
        [&](const Walk& w) {
            auto [type, lengths] = homotopy_type(g, w);
            if (type.key() == want && filter.accepts(lengths)) ++count;
        },
        budget);
    return count;
}

/// Census row: walks grouped by homotopy type and edge-length vector.
struct CensusRow {
    int k = 0;
    int order = 0;
    std::string type_key;
    EdgeLengths lengths;
    long long count = 0;
};

inline std::vector<CensusRow> walk_census(const Graph& g, int k,
                                          long long budget = kDefaultWalkBudget) {
    std::map<std::pair<std::string, EdgeLengths>, CensusRow> rows;
    for_each_snbc(
        g, k,
        [&](const Walk& w) {
            auto [type, lengths] = homotopy_type(g, w);
            auto key = std::make_pair(type.key().to_string(), lengths);
            auto it = rows.find(key);
            if (it == rows.end()) {
                CensusRow row{k, order(type.graph()), key.first, lengths, 1};
                rows.emplace(std::move(key), std::move(row));
            } else {
                it->second.count++;
            }
        },
        budget);
    std::vector<CensusRow> out;
    for (auto& [_, row] : rows) out.push_back(row);
    return out;
}

/// Graph-level shape of a connected pruned graph: the isomorphism class of the
/// suppression of all beads (all but one on cycles), named for the small cases.
inline std::string classify_shape(const Graph& s) {
    if (s.vertex_count() == 0) return "empty";
    bool cycle = is_connected(s) && s.half_loop_count() == 0;
    for (VertexId v = 0; cycle && v < s.vertex_count(); ++v)
        if (s.degree(v) != 2) cycle = false;
    if (cycle) return "cycle";
    std::vector<VertexId> beads;
    for (VertexId v = 0; v < s.vertex_count(); ++v)
        if (is_bead(s, v)) beads.push_back(v);
    Graph core = suppress_beads(s, beads).graph;
    int v = core.vertex_count(), half = core.half_loop_count();
    int loops = 0;
    for (EdgeId e = 0; e < core.dir_edge_count(); ++e)
        if (core.is_whole_loop(e)) ++loops;
    loops /= 2;
    if (v == 1 && core.edge_count() == 2 && loops == 2) return "figure8";
    if (v == 2 && core.edge_count() == 3 && loops == 0 && half == 0) {
        bool parallel = true;
        for (EdgeId e = 0; e < core.dir_edge_count(); ++e)
            if (core.is_self_loop(e)) parallel = false;
        if (parallel) return "theta";
        return "other";
    }
    if (v == 2 && core.edge_count() == 3 && loops == 2) return "barbell";
    if (v == 2 && core.edge_count() == 3 && half == 2) return "hbarbell";
    std::string name = "v" + std::to_string(v) + "e" + std::to_string(core.edge_count()) + "o" +
                       std::to_string(order(core));
    if (half > 0) name += "h" + std::to_string(half);
    return name;
}

}  // namespace nbcover
