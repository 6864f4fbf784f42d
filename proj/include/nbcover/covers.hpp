#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "covers_fwd.hpp"
#include "iso.hpp"
#include "rng.hpp"

namespace nbcover {

using Rational = boost::multiprecision::cpp_rational;

inline bool needs_even_n(ModelKind k) {
    return k == ModelKind::perm_involution_even || k == ModelKind::cycle_involution_even;
}
inline bool needs_odd_n(ModelKind k) {
    return k == ModelKind::perm_involution_odd || k == ModelKind::cycle_involution_odd;
}
inline bool forbids_half_loops(ModelKind k) {
    return k == ModelKind::permutation || k == ModelKind::full_cycle;
}
inline bool is_cycle_kind(ModelKind k) {
    return k == ModelKind::full_cycle || k == ModelKind::cycle_involution_even ||
           k == ModelKind::cycle_involution_odd;
}

inline std::vector<int> invert_permutation(const std::vector<int>& p) {
    std::vector<int> q(p.size());
    for (size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<int>(i);
    return q;
}

/// Draws one cover from a basic model. sigma(e) for each oriented edge comes
/// from an independent sub-stream keyed by (seed, edge id), so the result does
/// not depend on iteration order; sigma(inv e) = sigma(e)^{-1}.
inline CoordinatizedCover sample_cover(const ModelSpec& model, int n, std::uint64_t seed) {
    const Graph& b = model.base;
    if (n < 1) throw ParityMismatch("n must be >= 1");
    if (needs_even_n(model.kind) && n % 2 != 0) throw ParityMismatch("model requires even n");
    if (needs_odd_n(model.kind) && n % 2 != 1) throw ParityMismatch("model requires odd n");
    if (forbids_half_loops(model.kind) && b.half_loop_count() > 0) throw HalfLoopsForbidden();

    std::vector<std::vector<int>> sigma(b.dir_edge_count());
    for (EdgeId e : b.orientation()) {
        Rng rng(derive_seed(seed, 0x5eedc0Fe, static_cast<std::uint64_t>(e)));
        std::vector<int> p;
        if (b.is_half_loop(e)) {
            p = (n % 2 == 0) ? rng.perfect_matching(n) : rng.near_perfect_matching(n);
        } else if (b.is_whole_loop(e) && is_cycle_kind(model.kind)) {
            p = rng.full_cycle(n);
        } else {
            p = rng.permutation(n);
        }
        sigma[e] = p;
        if (b.inv(e) != e) sigma[b.inv(e)] = invert_permutation(p);
    }
    return build_cover(b, n, std::move(sigma));
}

/// Fibre sizes of a B-graph: a(e) = directed-edge fibre size, b(v) = vertex
/// fibre size; a(inv e) = a(e).
struct FibreCounts {
    std::vector<int> a;  // by directed edge of B
    std::vector<int> b;  // by vertex of B
};

inline FibreCounts fibre_counts(const GraphMorphism& s_over_b) {
    FibreCounts fc;
    fc.a.assign(s_over_b.target.dir_edge_count(), 0);
    fc.b.assign(s_over_b.target.vertex_count(), 0);
    for (EdgeId f : s_over_b.edge_map) fc.a[f]++;
    for (VertexId v : s_over_b.vertex_map) fc.b[v]++;
    return fc;
}

/// #[S^<=] cap G: the number of ordered B-subgraphs of G isomorphic to the
/// ordered B-graph S^<=, i.e. the number of injective B-graph morphisms S -> G
/// (the count does not depend on the ordering of S).
inline long long count_ordered_embeddings(const GraphMorphism& s_proj,
                                          const CoordinatizedCover& g,
                                          int edge_bound = kDefaultIsoEdgeBound) {
    return count_monomorphisms(s_proj, g.projection, edge_bound);
}

inline Rational falling_factorial(int n, int k) {
    Rational r = 1;
    for (int i = 0; i < k; ++i) r *= (n - i);
    return r;
}

/// Exact E_G[#[S^<=] cap G] in the permutation model over a half-loop-free
/// base:  prod_v (n)_{b(v)} / prod_{edges of B} (n)_{a(e)}.
/// Requires S etale and n >= max(a, b).
inline Rational expected_ordered_embeddings_exact(const GraphMorphism& s_proj, int n,
                                                  ModelKind kind = ModelKind::permutation) {
    if (kind != ModelKind::permutation)
        throw ModelUnsupported("exact expectation implemented for the permutation model only");
    if (s_proj.target.half_loop_count() > 0)
        throw ModelUnsupported("permutation model requires a half-loop-free base");
    if (check_morphism(s_proj).cls == MorphismClass::plain) throw NotEtale();
    FibreCounts fc = fibre_counts(s_proj);
    for (int c : fc.a)
        if (c > n) throw DomainError("n below max directed-edge fibre");
    for (int c : fc.b)
        if (c > n) throw DomainError("n below max vertex fibre");
    Rational r = 1;
    for (int c : fc.b) r *= falling_factorial(n, c);
    for (EdgeId e : s_proj.target.orientation()) r /= falling_factorial(n, fc.a[e]);
    return r;
}

enum class Occurs { yes, no, unknown };

/// Whether S (given as a morphism to the model's base) occurs in the model for
/// all large n. Permutation and even permutation-involution models are
/// characterized exactly (etale and half-loop free); cycle kinds report the
/// forced-short-cycle obstruction; anything else is unknown.
inline Occurs occurs_in_model(const GraphMorphism& s_proj, const ModelSpec& model) {
    MorphismClass cls = check_morphism(s_proj).cls;
    if (cls == MorphismClass::plain) return Occurs::no;  // subgraphs of covers are etale
    const Graph& s = s_proj.source;
    bool has_half = s.half_loop_count() > 0;
    switch (model.kind) {
        case ModelKind::permutation:
        case ModelKind::perm_involution_even:
            return has_half ? Occurs::no : Occurs::yes;
        case ModelKind::perm_involution_odd:
            // a near-perfect matching has one fixed point, so half-loop-free
            // etale graphs still embed; graphs with half-loops are not
            // characterized here
            return has_half ? Occurs::unknown : Occurs::yes;
        case ModelKind::full_cycle:
        case ModelKind::cycle_involution_even:
        case ModelKind::cycle_involution_odd: {
            // a closed cycle in the fibre over a whole-loop e forces sigma(e),
            // a full n-cycle, to contain a short cycle: impossible for large n
            const Graph& b = model.base;
            for (EdgeId f : b.orientation()) {
                if (!b.is_whole_loop(f)) continue;
                // the subgraph of S over the orbit {f, inv f} is a disjoint
                // union of paths and cycles (etale); a cycle component of
                // length L forces sigma(f) to contain an L-cycle, which a full
                // n-cycle cannot once n > L
                std::vector<int> parent(s.vertex_count());
                for (int v = 0; v < s.vertex_count(); ++v) parent[v] = v;
                std::function<int(int)> find = [&](int x) {
                    while (parent[x] != x) x = parent[x] = parent[parent[x]];
                    return x;
                };
                bool wraps = false;
                for (EdgeId e = 0; e < s.dir_edge_count() && !wraps; ++e) {
                    if (s_proj.edge_map[e] != f) continue;
                    int ru = find(s.tail(e)), rv = find(s.head(e));
                    if (ru == rv)
                        wraps = true;  // closes a cycle in this fibre
                    else
                        parent[ru] = rv;
                }
                if (wraps) return Occurs::no;
            }
            if (has_half) {
                if (model.kind == ModelKind::cycle_involution_even) return Occurs::no;
                return Occurs::unknown;  // odd-degree half-loop occurrence not characterized
            }
            return Occurs::yes;
        }
    }
    return Occurs::unknown;
}

// Cover dump format: a base-graph file reference plus one line per directed
// edge `sigma <edge-id> <i0 i1 ... i_{n-1}>` (the image of each index).
inline std::string cover_to_text(const CoordinatizedCover& cover, const std::string& base_ref) {
    std::ostringstream os;
    os << "base " << base_ref << "\n";
    os << "n " << cover.n << "\n";
    for (EdgeId e = 0; e < cover.base.dir_edge_count(); ++e) {
        os << "sigma " << e;
        for (int i = 0; i < cover.n; ++i) os << " " << cover.assignment.sigma[e][i];
        os << "\n";
    }
    return os.str();
}

inline CoordinatizedCover cover_from_text(const std::string& text, const Graph& base,
                                          std::string* base_ref_out = nullptr) {
    std::istringstream is(text);
    std::string word;
    int n = -1;
    std::map<int, std::vector<int>> sigma_lines;
    std::string base_ref;
    while (is >> word) {
        if (word == "base") {
            is >> base_ref;
        } else if (word == "n") {
            if (!(is >> n)) throw ParseError("cover: bad n");
        } else if (word == "sigma") {
            int e;
            if (!(is >> e)) throw ParseError("cover: bad sigma line");
            if (n < 0) throw ParseError("cover: n must precede sigma lines");
            std::vector<int> p(n);
            for (int i = 0; i < n; ++i)
                if (!(is >> p[i])) throw ParseError("cover: short sigma line");
            sigma_lines[e] = std::move(p);
        } else {
            throw ParseError("cover: unknown directive " + word);
        }
    }
    if (n < 1) throw ParseError("cover: missing n");
    std::vector<std::vector<int>> sigma(base.dir_edge_count());
    for (EdgeId e = 0; e < base.dir_edge_count(); ++e) {
        auto it = sigma_lines.find(e);
        if (it == sigma_lines.end()) throw ParseError("cover: missing sigma for an edge");
        sigma[e] = it->second;
    }
    if (base_ref_out) *base_ref_out = base_ref;
    return build_cover(base, n, std::move(sigma));
}

}  // namespace nbcover
