#pragma once

#include <string>
#include <vector>

#include "graph.hpp"
#include "morphism.hpp"

namespace nbcover {

/// sigma: one permutation of [n] per directed edge of the base, with
/// sigma(inv e) = sigma(e)^{-1}; on half-loops sigma(e) is an involution.
struct PermutationAssignment {
    Graph base;
    int n = 0;
    std::vector<std::vector<int>> sigma;  // indexed by directed edge id
};

/// Degree-n cover of B on V_B x [n] and E_B x [n]:
///   t(e,i) = (t_B e, i),  h(e,i) = (h_B e, sigma(e) i),
///   iota(e,i) = (iota_B e, sigma(e) i).
/// Vertex (v,i) has id v*n+i, directed edge (e,i) has id e*n+i.
struct CoordinatizedCover {
    Graph base;
    int n = 0;
    PermutationAssignment assignment;
    Graph total;
    GraphMorphism projection;

    VertexId vertex_id(VertexId base_vertex, int i) const { return base_vertex * n + i; }
    EdgeId edge_id(EdgeId base_edge, int i) const { return base_edge * n + i; }
};

inline void validate_assignment(const PermutationAssignment& pa) {
    const Graph& b = pa.base;
    if (static_cast<int>(pa.sigma.size()) != b.dir_edge_count())
        throw Error("assignment: sigma size mismatch");
    for (EdgeId e = 0; e < b.dir_edge_count(); ++e) {
        const std::vector<int>& s = pa.sigma[e];
        if (static_cast<int>(s.size()) != pa.n) throw Error("assignment: permutation size");
        std::vector<char> seen(pa.n, 0);
        for (int i = 0; i < pa.n; ++i) {
            if (s[i] < 0 || s[i] >= pa.n || seen[s[i]]) throw Error("assignment: not a permutation");
            seen[s[i]] = 1;
        }
        const std::vector<int>& si = pa.sigma[b.inv(e)];
        for (int i = 0; i < pa.n; ++i)
            if (si[s[i]] != i) throw Error("assignment: sigma(inv e) != sigma(e)^-1");
    }
}

/// Assembles the total graph and projection from a validated assignment.
inline CoordinatizedCover build_cover(const Graph& base, int n,
                                      std::vector<std::vector<int>> sigma) {
    PermutationAssignment pa{base, n, std::move(sigma)};
    validate_assignment(pa);
    const int vb = base.vertex_count(), mb = base.dir_edge_count();
    std::vector<DirectedEdge> edges(mb * n);
    std::vector<EdgeId> inv(mb * n);
    for (EdgeId e = 0; e < mb; ++e)
        for (int i = 0; i < n; ++i) {
            int id = e * n + i;
            edges[id] = {base.tail(e) * n + i, base.head(e) * n + pa.sigma[e][i]};
            inv[id] = base.inv(e) * n + pa.sigma[e][i];
        }
    Graph total(vb * n, std::move(edges), std::move(inv));
    GraphMorphism proj{total, base, std::vector<VertexId>(vb * n), std::vector<EdgeId>(mb * n)};
    for (int v = 0; v < vb; ++v)
        for (int i = 0; i < n; ++i) proj.vertex_map[v * n + i] = v;
    for (EdgeId e = 0; e < mb; ++e)
        for (int i = 0; i < n; ++i) proj.edge_map[e * n + i] = e;
    return CoordinatizedCover{base, n, std::move(pa), std::move(total), std::move(proj)};
}

enum class ModelKind {
    permutation,
    perm_involution_even,
    perm_involution_odd,
    full_cycle,
    cycle_involution_even,
    cycle_involution_odd,
};

inline const char* model_name(ModelKind k) {
    switch (k) {
        case ModelKind::permutation: return "perm";
        case ModelKind::perm_involution_even: return "perm-inv-even";
        case ModelKind::perm_involution_odd: return "perm-inv-odd";
        case ModelKind::full_cycle: return "cycle";
        case ModelKind::cycle_involution_even: return "cycle-inv-even";
        case ModelKind::cycle_involution_odd: return "cycle-inv-odd";
    }
    return "?";
}

inline ModelKind model_from_name(const std::string& name) {
    for (ModelKind k : {ModelKind::permutation, ModelKind::perm_involution_even,
                        ModelKind::perm_involution_odd, ModelKind::full_cycle,
                        ModelKind::cycle_involution_even, ModelKind::cycle_involution_odd})
        if (name == model_name(k)) return k;
    throw ParseError("unknown model: " + name);
}

struct ModelSpec {
    ModelKind kind = ModelKind::permutation;
    Graph base;
};

}  // namespace nbcover
