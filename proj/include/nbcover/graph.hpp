#pragma once

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace nbcover {

using VertexId = int;
using EdgeId = int;

struct DirectedEdge {
    VertexId tail = 0;
    VertexId head = 0;
    friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

/// Undirected multigraph given as a directed graph plus an orientation-reversing
/// edge involution. Fixed points of the involution are half-loops; a whole-loop
/// is a pair of mutually inverse directed self-loops. Edge ids are dense 0..m-1,
/// vertex ids dense 0..n-1. The edge set E_G is the set of involution orbits.
/// Values are immutable after construction.
class Graph {
public:
    Graph() = default;

    Graph(int vertex_count, std::vector<DirectedEdge> edges, std::vector<EdgeId> involution)
        : vertex_count_(vertex_count), edges_(std::move(edges)), inv_(std::move(involution)) {
        validate();
        build_index();
    }

    /// One vertex, `whole_loops` whole-loops (two directed edges each) and
    /// `half_loops` half-loops (one involution-fixed directed edge each).
    static Graph bouquet(int whole_loops, int half_loops) {
        std::vector<DirectedEdge> edges(2 * whole_loops + half_loops, DirectedEdge{0, 0});
        std::vector<EdgeId> inv(edges.size());
        for (int i = 0; i < whole_loops; ++i) {
            inv[2 * i] = 2 * i + 1;
            inv[2 * i + 1] = 2 * i;
        }
        for (int i = 0; i < half_loops; ++i) inv[2 * whole_loops + i] = 2 * whole_loops + i;
        return Graph(1, std::move(edges), std::move(inv));
    }

    /// Cycle of length k >= 1 (k = 1 gives a single whole-loop).
    static Graph cycle(int length) {
        std::vector<DirectedEdge> edges;
        std::vector<EdgeId> inv;
        for (int i = 0; i < length; ++i) {
            edges.push_back({i, (i + 1) % length});
            edges.push_back({(i + 1) % length, i});
            inv.push_back(2 * i + 1);
            inv.push_back(2 * i);
        }
        return Graph(length, std::move(edges), std::move(inv));
    }

    /// Path with `length` edges and length+1 vertices.
    static Graph path(int length) {
        std::vector<DirectedEdge> edges;
        std::vector<EdgeId> inv;
        for (int i = 0; i < length; ++i) {
            edges.push_back({i, i + 1});
            edges.push_back({i + 1, i});
            inv.push_back(2 * i + 1);
            inv.push_back(2 * i);
        }
        return Graph(length + 1, std::move(edges), std::move(inv));
    }

    /// Two vertices joined by three internally disjoint paths of the given lengths.
    static Graph theta(int l1, int l2, int l3) {
        std::vector<DirectedEdge> edges;
        std::vector<EdgeId> inv;
        int next_vertex = 2;
        auto add_arm = [&](int len) {
            VertexId prev = 0;
            for (int i = 0; i < len; ++i) {
                VertexId to = (i + 1 == len) ? 1 : next_vertex++;
                EdgeId e = static_cast<EdgeId>(edges.size());
                edges.push_back({prev, to});
                edges.push_back({to, prev});
                inv.push_back(e + 1);
                inv.push_back(e);
                prev = to;
            }
        };
        add_arm(l1);
        add_arm(l2);
        add_arm(l3);
        return Graph(next_vertex, std::move(edges), std::move(inv));
    }

    int vertex_count() const { return vertex_count_; }
    int dir_edge_count() const { return static_cast<int>(edges_.size()); }

    VertexId tail(EdgeId e) const { return edges_[e].tail; }
    VertexId head(EdgeId e) const { return edges_[e].head; }
    EdgeId inv(EdgeId e) const { return inv_[e]; }
    bool is_half_loop(EdgeId e) const { return inv_[e] == e; }
    bool is_self_loop(EdgeId e) const { return edges_[e].tail == edges_[e].head; }
    bool is_whole_loop(EdgeId e) const { return is_self_loop(e) && !is_half_loop(e); }

    int half_loop_count() const {
        int c = 0;
        for (EdgeId e = 0; e < dir_edge_count(); ++e)
            if (is_half_loop(e)) ++c;
        return c;
    }

    /// Number of edges of G, i.e. involution orbits (a half-loop is one edge).
    int edge_count() const { return (dir_edge_count() + half_loop_count()) / 2; }

    int whole_edge_count() const { return edge_count() - half_loop_count(); }

    /// Degree of v: its indegree in the underlying digraph. A half-loop
    /// contributes 1, a whole-loop 2.
    int degree(VertexId v) const {
        check_vertex(v);
        return static_cast<int>(out_[v].size());
    }

    /// Degree with each half-loop counted twice (the deg' of the order formula).
    int degree_prime(VertexId v) const {
        check_vertex(v);
        int d = degree(v);
        for (EdgeId e : out_[v])
            if (is_half_loop(e)) ++d;
        return d;
    }

    /// Directed edges with tail v, ascending by id.
    const std::vector<EdgeId>& out_edges(VertexId v) const {
        check_vertex(v);
        return out_[v];
    }

    /// Orbit representatives: all half-loops plus min(e, inv e) for whole edges,
    /// ascending. This is the canonical orientation used throughout.
    std::vector<EdgeId> orientation() const {
        std::vector<EdgeId> reps;
        for (EdgeId e = 0; e < dir_edge_count(); ++e)
            if (e <= inv_[e]) reps.push_back(e);
        return reps;
    }

    /// Position of an edge orbit in orientation(), by directed-edge id.
    std::vector<int> orbit_index() const {
        std::vector<int> idx(dir_edge_count(), -1);
        int k = 0;
        for (EdgeId e = 0; e < dir_edge_count(); ++e)
            if (e <= inv_[e]) {
                idx[e] = k;
                idx[inv_[e]] = k;
                ++k;
            }
        return idx;
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_ && a.inv_ == b.inv_;
    }

private:
    int vertex_count_ = 0;
    std::vector<DirectedEdge> edges_;
    std::vector<EdgeId> inv_;
    std::vector<std::vector<EdgeId>> out_;

    void check_vertex(VertexId v) const {
        if (v < 0 || v >= vertex_count_) throw InvalidVertex();
    }

    void validate() const {
        if (vertex_count_ < 0) throw InvalidVertex("negative vertex count");
        const int m = dir_edge_count();
        if (static_cast<int>(inv_.size()) != m)
            throw NotInvolution("involution size does not match edge count");
        for (const DirectedEdge& de : edges_)
            if (de.tail < 0 || de.tail >= vertex_count_ || de.head < 0 || de.head >= vertex_count_)
                throw InvalidVertex("edge endpoint out of range");
        for (EdgeId e = 0; e < m; ++e) {
            if (inv_[e] < 0 || inv_[e] >= m || inv_[inv_[e]] != e) throw NotInvolution();
            if (head(inv_[e]) != tail(e) || tail(inv_[e]) != head(e))
                throw NotOrientationReversing();
        }
    }

    void build_index() {
        out_.assign(vertex_count_, {});
        for (EdgeId e = 0; e < dir_edge_count(); ++e) out_[edges_[e].tail].push_back(e);
    }
};

inline Graph build_graph(int vertex_count, std::vector<DirectedEdge> edges,
                         std::vector<EdgeId> involution) {
    return Graph(vertex_count, std::move(edges), std::move(involution));
}

/// ord(G) = #E_G - #V_G; a half-loop counts as one edge.
inline int order(const Graph& g) { return g.edge_count() - g.vertex_count(); }

/// Every vertex has degree at least two (half-loops counting 1).
inline bool is_pruned(const Graph& g) {
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) < 2) return false;
    return true;
}

/// Subgraph spanned by the given vertices and directed edges. The edge set must
/// be involution-closed and have its endpoints inside `verts`.
inline Graph subgraph(const Graph& g, const std::vector<VertexId>& verts,
                      const std::vector<EdgeId>& dir_edges) {
    std::vector<int> vmap(g.vertex_count(), -1);
    for (int i = 0; i < static_cast<int>(verts.size()); ++i) vmap[verts[i]] = i;
    std::vector<int> emap(g.dir_edge_count(), -1);
    for (int i = 0; i < static_cast<int>(dir_edges.size()); ++i) emap[dir_edges[i]] = i;
    std::vector<DirectedEdge> edges(dir_edges.size());
    std::vector<EdgeId> inv(dir_edges.size());
    for (int i = 0; i < static_cast<int>(dir_edges.size()); ++i) {
        EdgeId e = dir_edges[i];
        if (vmap[g.tail(e)] < 0 || vmap[g.head(e)] < 0 || emap[g.inv(e)] < 0)
            throw Error("subgraph: edge set not closed");
        edges[i] = {vmap[g.tail(e)], vmap[g.head(e)]};
        inv[i] = emap[g.inv(e)];
    }
    return Graph(static_cast<int>(verts.size()), std::move(edges), std::move(inv));
}

/// Maximal subgraph of min degree >= 2, via iterated removal of degree <= 1
/// vertices; may be empty.
inline Graph prune(const Graph& g) {
    std::vector<bool> alive(g.vertex_count(), true);
    std::vector<int> deg(g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v) deg[v] = g.degree(v);
    bool changed = true;
    while (changed) {
        changed = false;
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            if (alive[v] && deg[v] <= 1) {
                alive[v] = false;
                changed = true;
                // removing v deletes every orbit with a representative leaving v
                for (EdgeId e : g.out_edges(v)) {
                    VertexId w = g.head(e);
                    if (alive[w] && w != v) deg[w] -= 1;
                }
            }
        }
    }
    std::vector<VertexId> verts;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (alive[v]) verts.push_back(v);
    std::vector<EdgeId> edges;
    for (EdgeId e = 0; e < g.dir_edge_count(); ++e)
        if (alive[g.tail(e)] && alive[g.head(e)]) edges.push_back(e);
    return subgraph(g, verts, edges);
}

/// Component id per vertex (0-based, by lowest contained vertex id order).
inline std::vector<int> vertex_components(const Graph& g) {
    std::vector<int> comp(g.vertex_count(), -1);
    int c = 0;
    for (VertexId s = 0; s < g.vertex_count(); ++s) {
        if (comp[s] >= 0) continue;
        std::vector<VertexId> stack{s};
        comp[s] = c;
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (EdgeId e : g.out_edges(v)) {
                VertexId w = g.head(e);
                if (comp[w] < 0) {
                    comp[w] = c;
                    stack.push_back(w);
                }
            }
        }
        ++c;
    }
    return comp;
}

inline bool is_connected(const Graph& g) {
    if (g.vertex_count() == 0) return false;
    std::vector<int> comp = vertex_components(g);
    return *std::max_element(comp.begin(), comp.end()) == 0;
}

}  // namespace nbcover
