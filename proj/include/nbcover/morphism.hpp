#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "graph.hpp"

namespace nbcover {

/// Morphism of graphs: vertex and edge maps commuting with heads, tails and
/// the involutions.
struct GraphMorphism {
    Graph source;
    Graph target;
    std::vector<VertexId> vertex_map;
    std::vector<EdgeId> edge_map;

    VertexId map_vertex(VertexId v) const { return vertex_map[v]; }
    EdgeId map_edge(EdgeId e) const { return edge_map[e]; }
};

inline bool is_morphism(const GraphMorphism& m) {
    const Graph& s = m.source;
    const Graph& t = m.target;
    if (static_cast<int>(m.vertex_map.size()) != s.vertex_count()) return false;
    if (static_cast<int>(m.edge_map.size()) != s.dir_edge_count()) return false;
    for (VertexId v : m.vertex_map)
        if (v < 0 || v >= t.vertex_count()) return false;
    for (EdgeId e : m.edge_map)
        if (e < 0 || e >= t.dir_edge_count()) return false;
    for (EdgeId e = 0; e < s.dir_edge_count(); ++e) {
        if (t.tail(m.edge_map[e]) != m.vertex_map[s.tail(e)]) return false;
        if (t.head(m.edge_map[e]) != m.vertex_map[s.head(e)]) return false;
        if (m.edge_map[s.inv(e)] != t.inv(m.edge_map[e])) return false;
    }
    return true;
}

inline GraphMorphism identity_morphism(const Graph& g) {
    GraphMorphism m{g, g, std::vector<VertexId>(g.vertex_count()),
                    std::vector<EdgeId>(g.dir_edge_count())};
    for (int i = 0; i < g.vertex_count(); ++i) m.vertex_map[i] = i;
    for (int i = 0; i < g.dir_edge_count(); ++i) m.edge_map[i] = i;
    return m;
}

/// Composite p after m (source of p must equal target of m).
inline GraphMorphism compose(const GraphMorphism& p, const GraphMorphism& m) {
    GraphMorphism r{m.source, p.target, std::vector<VertexId>(m.vertex_map.size()),
                    std::vector<EdgeId>(m.edge_map.size())};
    for (size_t i = 0; i < m.vertex_map.size(); ++i) r.vertex_map[i] = p.vertex_map[m.vertex_map[i]];
    for (size_t i = 0; i < m.edge_map.size(); ++i) r.edge_map[i] = p.edge_map[m.edge_map[i]];
    return r;
}

enum class MorphismClass { plain, etale, covering };

struct MorphismReport {
    MorphismClass cls = MorphismClass::plain;
    /// Covering degree when all fibres share one size, else nullopt.
    std::optional<int> degree;
};

/// Classifies a morphism: etale if the local edge maps at each vertex are
/// injective on head-sides and tail-sides, covering if bijective.
/// Throws NotAMorphism if the maps do not commute with heads/tails/involutions.
inline MorphismReport check_morphism(const GraphMorphism& m) {
    if (!is_morphism(m)) throw NotAMorphism();
    const Graph& s = m.source;
    const Graph& t = m.target;

    // in-edges at v are the involutions of the out-edges, so local injectivity
    // on tail sides plus commutation with the involutions gives the head sides;
    // both are checked anyway
    bool etale = true, locally_bijective = true;
    std::vector<char> used(t.dir_edge_count(), 0);
    for (VertexId v = 0; v < s.vertex_count() && etale; ++v) {
        for (int side = 0; side < 2 && etale; ++side) {
            std::vector<EdgeId> touched;
            for (EdgeId e : s.out_edges(v)) {
                EdgeId f = side == 0 ? m.edge_map[e] : t.inv(m.edge_map[e]);
                if (used[f]) etale = false;
                used[f] = 1;
                touched.push_back(f);
            }
            for (EdgeId f : touched) used[f] = 0;
        }
        if (s.degree(v) != t.degree(m.vertex_map[v])) locally_bijective = false;
    }

    MorphismReport rep;
    if (!etale) return rep;
    rep.cls = locally_bijective ? MorphismClass::covering : MorphismClass::etale;
    if (rep.cls == MorphismClass::covering) {
        std::vector<int> vfibre(t.vertex_count(), 0), efibre(t.dir_edge_count(), 0);
        for (VertexId v = 0; v < s.vertex_count(); ++v) vfibre[m.vertex_map[v]]++;
        for (EdgeId e = 0; e < s.dir_edge_count(); ++e) efibre[m.edge_map[e]]++;
        bool uniform = !vfibre.empty();
        for (int c : vfibre) uniform = uniform && c == vfibre[0];
        for (int c : efibre) uniform = uniform && c == vfibre[0];
        if (uniform) rep.degree = vfibre[0];
    }
    return rep;
}

}  // namespace nbcover
