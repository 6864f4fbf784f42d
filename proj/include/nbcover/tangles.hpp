#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "covers_fwd.hpp"
#include "gen.hpp"
#include "spectra.hpp"

namespace nbcover {

inline constexpr double kMu1Tolerance = 1e-10;

struct TangleQuery {
    double nu = 0.0;
    int r = 0;

    bool valid() const { return nu > 1.0 && r >= 1; }
};

/// psi is a (>= nu, < r)-tangle: connected, every vertex of degree >= 2,
/// mu1(psi) >= nu (weak inequality, tolerance in favour of the tangle) and
/// ord(psi) < r.
inline bool is_tangle(const Graph& psi, const TangleQuery& q) {
    if (!is_connected(psi) || !is_pruned(psi)) return false;
    if (order(psi) >= q.r) return false;
    return mu1(psi) >= q.nu - kMu1Tolerance;
}

/// Minimal tangles up to isomorphism with at most edge_bound edges. The
/// catalog is complete only up to that bound; the compactness argument behind
/// finiteness gives no effective bound, so verdicts built on a catalog are
/// always qualified by complete_up_to.
struct TangleCatalog {
    TangleQuery query;
    Graph base;  // optional context; tangle membership itself is base-free
    int edge_bound = 0;
    std::vector<Graph> tangles;
    std::vector<double> mu1_values;
    int complete_up_to = 0;
};

inline TangleCatalog enumerate_minimal_tangles(const TangleQuery& q, int edge_bound) {
    if (!q.valid()) throw DomainError("tangle query requires nu > 1 and r >= 1");
    if (edge_bound > 14) throw BoundTooLarge();
    TangleCatalog cat;
    cat.query = q;
    cat.edge_bound = edge_bound;
    cat.complete_up_to = edge_bound;

    std::vector<Graph> all;
    for (const Graph& g : enumerate_connected_pruned(edge_bound, q.r - 1))
        if (is_tangle(g, q)) all.push_back(g);
    std::sort(all.begin(), all.end(), [](const Graph& a, const Graph& b) {
        if (a.edge_count() != b.edge_count()) return a.edge_count() < b.edge_count();
        return a.vertex_count() < b.vertex_count();
    });
    for (const Graph& g : all) {
        bool minimal = true;
        for (const Graph& kept : cat.tangles)
            if (contains_subgraph(g, kept)) {
                minimal = false;
                break;
            }
        if (minimal) {
            cat.tangles.push_back(g);
            cat.mu1_values.push_back(mu1(g));
        }
    }
    return cat;
}

enum class TangleVerdict { yes, no_up_to_bound };

struct TangleSearchResult {
    TangleVerdict verdict = TangleVerdict::no_up_to_bound;
    int complete_up_to = 0;
    /// index into the catalog and the embedding into prune(g), when found
    std::optional<int> witness_index;
    std::optional<GraphMorphism> embedding;
};

/// Catalog-based tangle detection: sound by mu1 monotonicity under subgraph
/// inclusion; a negative answer is only valid up to the catalog bound.
inline TangleSearchResult has_tangles(const Graph& g, const TangleQuery& q,
                                      const TangleCatalog& catalog) {
    if (catalog.query.nu != q.nu || catalog.query.r != q.r) throw CatalogMismatch();
    TangleSearchResult res;
    res.complete_up_to = catalog.complete_up_to;
    Graph pg = prune(g);
    for (size_t i = 0; i < catalog.tangles.size(); ++i) {
        GraphMorphism emb;
        if (pg.vertex_count() > 0 && contains_subgraph(pg, catalog.tangles[i], &emb)) {
            res.verdict = TangleVerdict::yes;
            res.witness_index = static_cast<int>(i);
            res.embedding = std::move(emb);
            return res;
        }
    }
    return res;
}

inline long long floor_sqrt(long long n) {
    long long k = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (k * k > n) --k;
    while ((k + 1) * (k + 1) <= n) ++k;
    return k;
}

enum class TauTangVariant { m, m_prime };

/// m(d) = floor((sqrt(d-1)-1)/2) + 1 and m'(d) = floor(sqrt(d-1)-1) + 1,
/// computed exactly in integers.
inline int tau_tang_formula(int d, TauTangVariant variant) {
    if (d < 3) throw DomainError("d must be >= 3");
    long long t = floor_sqrt(d - 1);
    if (variant == TauTangVariant::m_prime) return static_cast<int>(t);
    // floor((s-1)/2) = floor((t-1)/2) for t = floor(s), s = sqrt(d-1) >= 1
    return static_cast<int>((t - 1) / 2 + 1);
}

/// Extremal mu1 at fixed order m: mu1 <= 2m+1 in general with the bouquet of
/// m+1 whole-loops extremal; mu1 <= m+1 among whole-loop-free graphs with two
/// vertices joined by m+2 edges extremal.
struct Mu1OrderExtremes {
    int m = 0;
    double bound_general = 0.0;
    Graph witness_general;
    double bound_no_whole_loops = 0.0;
    Graph witness_no_whole_loops;
};

inline Mu1OrderExtremes mu1_order_extremes(int m) {
    if (m < 0) throw DomainError("order must be >= 0");
    Mu1OrderExtremes ex;
    ex.m = m;
    ex.bound_general = 2.0 * m + 1.0;
    ex.witness_general = Graph::bouquet(m + 1, 0);
    ex.bound_no_whole_loops = m + 1.0;
    // two vertices joined by m+2 parallel edges
    std::vector<DirectedEdge> edges;
    std::vector<EdgeId> inv;
    for (int i = 0; i < m + 2; ++i) {
        edges.push_back({0, 1});
        edges.push_back({1, 0});
        inv.push_back(2 * i + 1);
        inv.push_back(2 * i);
    }
    ex.witness_no_whole_loops = Graph(2, std::move(edges), std::move(inv));
    return ex;
}

/// Do the witnesses attain their bounds numerically?
inline bool verify_mu1_order_extremes(const Mu1OrderExtremes& ex, double tol = 1e-9) {
    if (std::abs(mu1(ex.witness_general) - ex.bound_general) > tol) return false;
    if (ex.m >= 1 &&
        std::abs(mu1(ex.witness_no_whole_loops) - ex.bound_no_whole_loops) > tol)
        return false;
    return true;
}

struct TangleForcesReport {
    int d = 0;
    double mu1_s = 0.0;
    double predicted = 0.0;  // mu1(s) + (d-1)/mu1(s) - epsilon
    double new_spectral_radius = 0.0;
    bool holds = false;
};

/// Empirical check that a planted subgraph with mu1(S) >= sqrt(d-1) forces a
/// new adjacency eigenvalue >= mu1(S) + (d-1)/mu1(S) - epsilon.
inline TangleForcesReport tangle_forces_nonalon_check(const Graph& base, const Graph& s,
                                                      const CoordinatizedCover& cover,
                                                      double epsilon) {
    auto d_opt = detail::regular_degree(base);
    if (!d_opt || *d_opt < 3) throw NotRegularBase();
    TangleForcesReport rep;
    rep.d = *d_opt;
    rep.mu1_s = mu1(s);
    if (rep.mu1_s < std::sqrt(static_cast<double>(rep.d - 1)) - kMu1Tolerance)
        throw DomainError("mu1(S) below sqrt(d-1)");
    if (!contains_subgraph(cover.total, s)) throw SubgraphNotPresent();
    rep.predicted = rep.mu1_s + (rep.d - 1) / rep.mu1_s - epsilon;
    rep.new_spectral_radius = new_old_spectrum(cover).new_spectral_radius;
    rep.holds = rep.new_spectral_radius >= rep.predicted;
    return rep;
}

}  // namespace nbcover
