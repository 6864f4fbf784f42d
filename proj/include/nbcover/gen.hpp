#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "iso.hpp"
#include "rng.hpp"
#include "walks.hpp"

namespace nbcover {

/// Random multigraph mixing half-loops, whole-loops and multi-edges; used by
/// the randomized identity checks. Not a cover model.
inline Graph random_graph(Rng& rng, int max_vertices, int max_orbits) {
    int n = 1 + static_cast<int>(rng.below(max_vertices));
    int orbits = 1 + static_cast<int>(rng.below(max_orbits));
    std::vector<DirectedEdge> edges;
    std::vector<EdgeId> inv;
    for (int i = 0; i < orbits; ++i) {
        int u = static_cast<int>(rng.below(n));
        int v = static_cast<int>(rng.below(n));
        if (u == v && rng.below(3) == 0) {
            inv.push_back(static_cast<int>(edges.size()));
            edges.push_back({u, u});
        } else {
            int id = static_cast<int>(edges.size());
            edges.push_back({u, v});
            edges.push_back({v, u});
            inv.push_back(id + 1);
            inv.push_back(id);
        }
    }
    return Graph(n, std::move(edges), std::move(inv));
}

/// Random involution-closed subgraph (induced on the endpoints of a random
/// subset of edge orbits, plus possibly extra isolated-free vertices).
inline Graph random_subgraph(Rng& rng, const Graph& g) {
    std::vector<EdgeId> reps = g.orientation();
    std::vector<EdgeId> chosen;
    for (EdgeId e : reps)
        if (rng.below(2) == 0) chosen.push_back(e);
    std::vector<char> keep_v(g.vertex_count(), 0);
    std::vector<EdgeId> dir_edges;
    for (EdgeId e : chosen) {
        keep_v[g.tail(e)] = keep_v[g.head(e)] = 1;
        dir_edges.push_back(e);
        if (g.inv(e) != e) dir_edges.push_back(g.inv(e));
    }
    std::vector<VertexId> verts;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (keep_v[v]) verts.push_back(v);
    std::sort(dir_edges.begin(), dir_edges.end());
    return subgraph(g, verts, dir_edges);
}

namespace detail {

/// Bead-free: every vertex has degree >= 3 or carries a self-loop (and degree
/// >= 2 in all cases). These are the suppress-all-beads cores of connected
/// pruned graphs.
inline bool is_bead_free_pruned(const Graph& g) {
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (g.degree(v) < 2) return false;
        if (g.degree(v) == 2 && is_bead(g, v)) return false;
    }
    return true;
}

/// Enumerates connected bead-free pruned graphs with ord = m and at most
/// edge_bound edges, up to isomorphism. Slot backtracking over vertex pairs
/// with degree feasibility pruning; vertex i's incidences are final once the
/// scan moves past it, so its constraints prune early.
inline std::vector<Graph> enumerate_cores(int m, int edge_bound) {
    IsoClassSet classes;
    int vmax = std::max(1, edge_bound - m);
    for (int nv = 1; nv <= vmax; ++nv) {
        int ne = nv + m;  // orbit count forced by the order
        if (ne < 1 || ne > edge_bound) continue;
        // slots in vertex-major order: half(i), (i,i), (i,i+1), ..., (i,nv-1)
        struct Slot {
            int u, v;
            bool half;
        };
        std::vector<Slot> slots;
        for (int i = 0; i < nv; ++i) {
            slots.push_back({i, i, true});
            for (int j = i; j < nv; ++j) slots.push_back({i, j, false});
        }
        std::vector<int> count(slots.size(), 0);
        std::vector<int> deg(nv, 0);
        std::vector<char> selfloop(nv, 0);

        std::function<void(int, int)> rec = [&](int si, int placed) {
            if (placed == ne) {
                // all remaining slot counts zero; check vertices not yet checked
                for (int i = 0; i < nv; ++i)
                    if (deg[i] < 2 || (deg[i] == 2 && !selfloop[i])) return;
                std::vector<DirectedEdge> edges;
                std::vector<EdgeId> inv;
                for (size_t s = 0; s < slots.size(); ++s)
                    for (int c = 0; c < count[s]; ++c) {
                        if (slots[s].half) {
                            inv.push_back(static_cast<int>(edges.size()));
                            edges.push_back({slots[s].u, slots[s].u});
                        } else {
                            int id = static_cast<int>(edges.size());
                            edges.push_back({slots[s].u, slots[s].v});
                            edges.push_back({slots[s].v, slots[s].u});
                            inv.push_back(id + 1);
                            inv.push_back(id);
                        }
                    }
                Graph g(nv, std::move(edges), std::move(inv));
                if (is_connected(g) && is_bead_free_pruned(g)) classes.insert(g);
                return;
            }
            if (si == static_cast<int>(slots.size())) return;
            const Slot& sl = slots[si];
            // vertex u's incidences are final once the scan passes (u, nv-1)
            bool last_of_u = !sl.half && sl.v == nv - 1;
            int remaining = ne - placed;
            // each further orbit adds at most 2 to the total degree
            int deficit = 0;
            for (int i = sl.u; i < nv; ++i) deficit += std::max(0, 2 - deg[i]);
            if (deficit > 2 * remaining) return;
            bool loop_slot = sl.u == sl.v;
            char saved_selfloop = selfloop[sl.u];
            for (int c = 0; placed + c <= ne; ++c) {
                count[si] = c;
                int du = sl.half ? c : (loop_slot ? 2 * c : c);
                deg[sl.u] += du;
                if (!loop_slot) deg[sl.v] += c;
                if (c > 0 && loop_slot) selfloop[sl.u] = 1;
                bool ok = true;
                if (last_of_u && (deg[sl.u] < 2 || (deg[sl.u] == 2 && !selfloop[sl.u]))) ok = false;
                if (ok) rec(si + 1, placed + c);
                deg[sl.u] -= du;
                if (!loop_slot) deg[sl.v] -= c;
                selfloop[sl.u] = saved_selfloop;
            }
            count[si] = 0;
        };
        rec(0, 0);
    }
    return classes.representatives();
}

inline void length_vectors(const Graph& core, int total_bound,
                           const std::function<void(const EdgeLengths&)>& fn) {
    std::vector<EdgeId> reps = core.orientation();
    EdgeLengths k(reps.size(), 1);
    int base = static_cast<int>(reps.size());
    if (base > total_bound) return;
    std::function<void(int, int)> rec = [&](int idx, int used) {
        if (idx == static_cast<int>(reps.size())) {
            fn(k);
            return;
        }
        if (core.is_half_loop(reps[idx])) {
            k[idx] = 1;
            rec(idx + 1, used + 1);
            return;
        }
        int slack = total_bound - used - (static_cast<int>(reps.size()) - idx);
        for (int len = 1; len <= 1 + slack; ++len) {
            k[idx] = len;
            rec(idx + 1, used + len);
        }
        k[idx] = 1;
    };
    rec(0, 0);
}

}  // namespace detail

/// All connected pruned graphs with at most edge_bound edges, up to
/// isomorphism, generated as variable-length realizations of bead-free cores.
/// max_order < 0 means no restriction on the order.
inline std::vector<Graph> enumerate_connected_pruned(int edge_bound, int max_order = -1) {
    IsoClassSet classes;
    int top_order = max_order < 0 ? edge_bound - 1 : std::min(max_order, edge_bound - 1);
    for (int m = 0; m <= top_order; ++m) {
        for (const Graph& core : detail::enumerate_cores(m, edge_bound)) {
            detail::length_vectors(core, edge_bound,
                                   [&](const EdgeLengths& k) { classes.insert(vlg(core, k)); });
        }
    }
    return classes.representatives();
}

/// Set of B-graphs up to B-graph isomorphism.
class BGraphClassSet {
public:
    bool insert(const GraphMorphism& p) {
        std::string key = invariant(p);
        auto& bucket = buckets_[key];
        for (int i : bucket)
            if (find_isomorphism(reps_[i], p, 1 << 20).has_value()) return false;
        bucket.push_back(static_cast<int>(reps_.size()));
        reps_.push_back(p);
        return true;
    }

    const std::vector<GraphMorphism>& representatives() const { return reps_; }

private:
    static std::string invariant(const GraphMorphism& p) {
        std::ostringstream os;
        os << p.source.vertex_count() << "," << p.source.dir_edge_count() << ";";
        std::vector<int> letters(p.edge_map.begin(), p.edge_map.end());
        std::sort(letters.begin(), letters.end());
        for (int x : letters) os << x << " ";
        os << ";";
        std::vector<int> vletters(p.vertex_map.begin(), p.vertex_map.end());
        std::sort(vletters.begin(), vletters.end());
        for (int x : vletters) os << x << " ";
        return os.str();
    }

    std::map<std::string, std::vector<int>> buckets_;
    std::vector<GraphMorphism> reps_;
};

namespace detail {

inline bool has_out_over(const GraphMorphism& p, VertexId v, EdgeId letter) {
    for (EdgeId e : p.source.out_edges(v))
        if (p.edge_map[e] == letter) return true;
    return false;
}

inline bool has_in_over(const GraphMorphism& p, VertexId v, EdgeId letter) {
    // in-edges at v are the involutions of out-edges
    for (EdgeId e : p.source.out_edges(v))
        if (p.edge_map[p.source.inv(e)] == letter) return true;
    return false;
}

/// Appends one orbit over base letter f; s/t = -1 mean fresh vertices.
inline GraphMorphism extend_bgraph(const Graph& base, const GraphMorphism& p, EdgeId f,
                                   VertexId s, VertexId t, bool half_in_s) {
    std::vector<DirectedEdge> edges;
    std::vector<EdgeId> inv;
    int nv = p.source.vertex_count();
    std::vector<VertexId> vmap = p.vertex_map;
    std::vector<EdgeId> emap = p.edge_map;
    for (EdgeId e = 0; e < p.source.dir_edge_count(); ++e) {
        edges.push_back({p.source.tail(e), p.source.head(e)});
        inv.push_back(p.source.inv(e));
    }
    if (s < 0) {
        s = nv++;
        vmap.push_back(base.tail(f));
    }
    if (t < 0) {
        t = nv++;
        vmap.push_back(base.head(f));
    }
    int id = static_cast<int>(edges.size());
    if (half_in_s) {
        edges.push_back({s, s});
        inv.push_back(id);
        emap.push_back(f);
    } else {
        edges.push_back({s, t});
        edges.push_back({t, s});
        inv.push_back(id + 1);
        inv.push_back(id);
        emap.push_back(f);
        emap.push_back(base.inv(f));
    }
    return GraphMorphism{Graph(nv, std::move(edges), std::move(inv)), base, std::move(vmap),
                         std::move(emap)};
}

inline void etale_extensions(const Graph& base, const GraphMorphism& p,
                             const std::function<void(GraphMorphism)>& fn) {
    const Graph& s_graph = p.source;
    for (EdgeId f : base.orientation()) {
        VertexId ub = base.tail(f), vb = base.head(f);
        if (!base.is_half_loop(f)) {
            // tails: vertices over ub with no out-edge over f, plus fresh (-1)
            std::vector<VertexId> tails{-1}, heads{-1};
            for (VertexId v = 0; v < s_graph.vertex_count(); ++v) {
                if (p.vertex_map[v] == ub && !has_out_over(p, v, f)) tails.push_back(v);
                if (p.vertex_map[v] == vb && !has_in_over(p, v, f)) heads.push_back(v);
            }
            for (VertexId s : tails)
                for (VertexId t : heads) fn(extend_bgraph(base, p, f, s, t, false));
            // fresh whole-loop over a base loop: s = t = one fresh vertex
            if (ub == vb) {
                int nv = s_graph.vertex_count();
                std::vector<DirectedEdge> edges;
                std::vector<EdgeId> inv;
                for (EdgeId e = 0; e < s_graph.dir_edge_count(); ++e) {
                    edges.push_back({s_graph.tail(e), s_graph.head(e)});
                    inv.push_back(s_graph.inv(e));
                }
                int id = static_cast<int>(edges.size());
                edges.push_back({nv, nv});
                edges.push_back({nv, nv});
                inv.push_back(id + 1);
                inv.push_back(id);
                std::vector<VertexId> vmap = p.vertex_map;
                vmap.push_back(ub);
                std::vector<EdgeId> emap = p.edge_map;
                emap.push_back(f);
                emap.push_back(base.inv(f));
                fn(GraphMorphism{Graph(nv + 1, std::move(edges), std::move(inv)), base,
                                 std::move(vmap), std::move(emap)});
            }
        } else {
            // half-loop letter: candidates need both sides over f free
            std::vector<VertexId> free_v{-1};
            for (VertexId v = 0; v < s_graph.vertex_count(); ++v)
                if (p.vertex_map[v] == ub && !has_out_over(p, v, f) && !has_in_over(p, v, f))
                    free_v.push_back(v);
            for (VertexId v : free_v) fn(extend_bgraph(base, p, f, v, v, /*half_in_s=*/true));
            for (size_t i = 0; i < free_v.size(); ++i)
                for (size_t j = i + 1; j < free_v.size(); ++j)
                    fn(extend_bgraph(base, p, f, free_v[i], free_v[j], false));
            // both endpoints fresh
            fn(extend_bgraph(base, p, f, -1, -1, false));
        }
    }
}

}  // namespace detail

/// Etale B-graphs with at most max_edges edge orbits and no isolated vertices
/// (plus the single-vertex graphs when requested), up to B-graph isomorphism.
/// Grown one orbit at a time with the etale constraint enforced on the fly.
inline std::vector<GraphMorphism> enumerate_etale_bgraphs(const Graph& base, int max_edges,
                                                          bool include_single_vertex = true) {
    BGraphClassSet out;
    if (include_single_vertex) {
        for (VertexId vb = 0; vb < base.vertex_count(); ++vb) {
            Graph one(1, {}, {});
            out.insert(GraphMorphism{one, base, {vb}, {}});
        }
    }
    std::vector<GraphMorphism> frontier;
    {
        Graph none(0, {}, {});
        frontier.push_back(GraphMorphism{none, base, {}, {}});
    }
    for (int e = 0; e < max_edges; ++e) {
        BGraphClassSet next;
        for (const GraphMorphism& p : frontier)
            detail::etale_extensions(base, p, [&](GraphMorphism q) { next.insert(std::move(q)); });
        frontier = next.representatives();
        for (const GraphMorphism& p : frontier) out.insert(p);
    }
    return out.representatives();
}

}  // namespace nbcover
