#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "morphism.hpp"

namespace nbcover {

namespace detail {

/// Backtracking matcher for injective graph morphisms S -> G, optionally
/// respecting B-graph structures and optionally required to be bijective.
/// Candidate maps are filtered by degree signatures before recursing.
class Matcher {
public:
    Matcher(const Graph& s, const Graph& g, const GraphMorphism* s_proj,
            const GraphMorphism* g_proj, bool bijective)
        : s_(s), g_(g), s_proj_(s_proj), g_proj_(g_proj), bijective_(bijective) {
        order_orbits();
        g_orbit_ = g_.orbit_index();
    }

    /// Calls fn for every injective morphism found; fn returns false to stop.
    void run(const std::function<bool(const GraphMorphism&)>& fn) {
        if (bijective_ &&
            (s_.vertex_count() != g_.vertex_count() ||
             s_.dir_edge_count() != g_.dir_edge_count() ||
             s_.half_loop_count() != g_.half_loop_count()))
            return;
        fn_ = &fn;
        stop_ = false;
        vmap_.assign(s_.vertex_count(), -1);
        emap_.assign(s_.dir_edge_count(), -1);
        vused_.assign(g_.vertex_count(), 0);
        oused_.assign(g_.edge_count(), 0);
        isolated_.clear();
        for (VertexId v = 0; v < s_.vertex_count(); ++v)
            if (s_.degree(v) == 0) isolated_.push_back(v);
        match_orbit(0);
    }

private:
    const Graph& s_;
    const Graph& g_;
    const GraphMorphism* s_proj_;
    const GraphMorphism* g_proj_;
    bool bijective_;
    std::vector<EdgeId> orbit_reps_;  // one directed rep per S edge orbit, connected order
    std::vector<int> g_orbit_;
    std::vector<VertexId> isolated_;

    const std::function<bool(const GraphMorphism&)>* fn_ = nullptr;
    bool stop_ = false;
    std::vector<VertexId> vmap_;
    std::vector<EdgeId> emap_;
    std::vector<char> vused_;
    std::vector<char> oused_;

    void order_orbits() {
        std::vector<char> seen_orbit(s_.dir_edge_count(), 0);
        std::vector<char> seen_vertex(s_.vertex_count(), 0);
        auto take_at = [&](VertexId v) {
            for (EdgeId e : s_.out_edges(v)) {
                if (seen_orbit[e]) continue;
                seen_orbit[e] = seen_orbit[s_.inv(e)] = 1;
                orbit_reps_.push_back(e);
                seen_vertex[s_.head(e)] = 1;
            }
        };
        // expand components one at a time so new orbits touch mapped vertices
        for (VertexId start = 0; start < s_.vertex_count(); ++start) {
            if (seen_vertex[start]) continue;
            seen_vertex[start] = 1;
            size_t frontier = orbit_reps_.size();
            take_at(start);
            while (frontier < orbit_reps_.size()) {
                EdgeId e = orbit_reps_[frontier++];
                take_at(s_.head(e));
                take_at(s_.tail(e));
            }
        }
    }

    bool vertex_compatible(VertexId sv, VertexId gv) const {
        if (s_proj_ && g_proj_ &&
            s_proj_->vertex_map[sv] != g_proj_->vertex_map[gv])
            return false;
        if (bijective_)
            return s_.degree(sv) == g_.degree(gv) &&
                   s_.degree_prime(sv) == g_.degree_prime(gv);
        return g_.degree(gv) >= s_.degree(sv) && g_.degree_prime(gv) >= s_.degree_prime(sv);
    }

    void emit() {
        GraphMorphism m{s_, g_, vmap_, emap_};
        if (!(*fn_)(m)) stop_ = true;
    }

    void match_isolated(size_t i) {
        if (stop_) return;
        if (i == isolated_.size()) {
            emit();
            return;
        }
        VertexId sv = isolated_[i];
        for (VertexId gv = 0; gv < g_.vertex_count() && !stop_; ++gv) {
            if (vused_[gv] || !vertex_compatible(sv, gv)) continue;
            if (bijective_ && g_.degree(gv) != 0) continue;
            vused_[gv] = 1;
            vmap_[sv] = gv;
            match_isolated(i + 1);
            vused_[gv] = 0;
            vmap_[sv] = -1;
        }
    }

    void match_orbit(size_t i) {
        if (stop_) return;
        if (i == orbit_reps_.size()) {
            match_isolated(0);
            return;
        }
        EdgeId e = orbit_reps_[i];
        VertexId u = s_.tail(e), v = s_.head(e);
        for (EdgeId f = 0; f < g_.dir_edge_count() && !stop_; ++f) {
            if (oused_[g_orbit_[f]]) continue;
            if (s_.is_half_loop(e) != g_.is_half_loop(f)) continue;
            if (s_proj_ && g_proj_ && s_proj_->edge_map[e] != g_proj_->edge_map[f]) continue;
            VertexId gu = g_.tail(f), gv = g_.head(f);
            bool new_u = vmap_[u] < 0;
            if (new_u) {
                if (vused_[gu] || !vertex_compatible(u, gu)) continue;
            } else if (vmap_[u] != gu) {
                continue;
            }
            if (new_u) {
                vmap_[u] = gu;
                vused_[gu] = 1;
            }
            bool new_v = vmap_[v] < 0;
            bool ok = new_v ? (!vused_[gv] && vertex_compatible(v, gv)) : vmap_[v] == gv;
            if (ok) {
                if (new_v) {
                    vmap_[v] = gv;
                    vused_[gv] = 1;
                }
                oused_[g_orbit_[f]] = 1;
                emap_[e] = f;
                emap_[s_.inv(e)] = g_.inv(f);
                match_orbit(i + 1);
                oused_[g_orbit_[f]] = 0;
                emap_[e] = -1;
                emap_[s_.inv(e)] = -1;
                if (new_v) {
                    vused_[gv] = 0;
                    vmap_[v] = -1;
                }
            }
            if (new_u) {
                vused_[gu] = 0;
                vmap_[u] = -1;
            }
        }
    }
};

inline void check_edge_bound(const Graph& pattern, int edge_bound) {
    if (pattern.edge_count() > edge_bound) throw SizeBoundExceeded();
}

}  // namespace detail

inline constexpr int kDefaultIsoEdgeBound = 16;

/// Plain graph isomorphism; nullopt when none exists.
inline std::optional<GraphMorphism> find_isomorphism(const Graph& g1, const Graph& g2,
                                                     int edge_bound = kDefaultIsoEdgeBound) {
    detail::check_edge_bound(g1, edge_bound);
    std::optional<GraphMorphism> out;
    detail::Matcher m(g1, g2, nullptr, nullptr, /*bijective=*/true);
    m.run([&](const GraphMorphism& iso) {
        out = iso;
        return false;
    });
    return out;
}

/// Isomorphism of B-graphs (commutes with the projections p1, p2 to a common base).
inline std::optional<GraphMorphism> find_isomorphism(const GraphMorphism& p1,
                                                     const GraphMorphism& p2,
                                                     int edge_bound = kDefaultIsoEdgeBound) {
    detail::check_edge_bound(p1.source, edge_bound);
    std::optional<GraphMorphism> out;
    detail::Matcher m(p1.source, p2.source, &p1, &p2, /*bijective=*/true);
    m.run([&](const GraphMorphism& iso) {
        out = iso;
        return false;
    });
    return out;
}

/// Number of B-graph automorphisms of S (p: S -> B).
inline long long count_automorphisms(const GraphMorphism& p,
                                     int edge_bound = kDefaultIsoEdgeBound) {
    detail::check_edge_bound(p.source, edge_bound);
    long long n = 0;
    detail::Matcher m(p.source, p.source, &p, &p, /*bijective=*/true);
    m.run([&](const GraphMorphism&) {
        ++n;
        return true;
    });
    return n;
}

inline long long count_automorphisms(const Graph& g, int edge_bound = kDefaultIsoEdgeBound) {
    detail::check_edge_bound(g, edge_bound);
    long long n = 0;
    detail::Matcher m(g, g, nullptr, nullptr, /*bijective=*/true);
    m.run([&](const GraphMorphism&) {
        ++n;
        return true;
    });
    return n;
}

/// Injective B-graph morphisms S -> G, i.e. ordered-subgraph embeddings: the
/// count of #[S^<=] cap G for any ordering of S.
inline long long count_monomorphisms(const GraphMorphism& s_proj, const GraphMorphism& g_proj,
                                     int edge_bound = kDefaultIsoEdgeBound) {
    detail::check_edge_bound(s_proj.source, edge_bound);
    long long n = 0;
    detail::Matcher m(s_proj.source, g_proj.source, &s_proj, &g_proj, /*bijective=*/false);
    m.run([&](const GraphMorphism&) {
        ++n;
        return true;
    });
    return n;
}

/// Distinct images of injective B-graph morphisms S -> G: the count of
/// B-subgraphs of G isomorphic to S, #[S] cap G.
inline long long count_subgraph_copies(const GraphMorphism& s_proj, const GraphMorphism& g_proj,
                                       int edge_bound = kDefaultIsoEdgeBound) {
    detail::check_edge_bound(s_proj.source, edge_bound);
    std::set<std::pair<std::vector<VertexId>, std::vector<EdgeId>>> images;
    detail::Matcher m(s_proj.source, g_proj.source, &s_proj, &g_proj, /*bijective=*/false);
    m.run([&](const GraphMorphism& mono) {
        std::vector<VertexId> vs(mono.vertex_map);
        std::vector<EdgeId> es(mono.edge_map);
        std::sort(vs.begin(), vs.end());
        std::sort(es.begin(), es.end());
        images.emplace(std::move(vs), std::move(es));
        return true;
    });
    return static_cast<long long>(images.size());
}

/// Does host contain a subgraph isomorphic to pattern (plain graphs)?
/// On success optionally returns the embedding.
inline bool contains_subgraph(const Graph& host, const Graph& pattern,
                              GraphMorphism* witness = nullptr,
                              int edge_bound = kDefaultIsoEdgeBound) {
    detail::check_edge_bound(pattern, edge_bound);
    bool found = false;
    detail::Matcher m(pattern, host, nullptr, nullptr, /*bijective=*/false);
    m.run([&](const GraphMorphism& mono) {
        found = true;
        if (witness) *witness = mono;
        return false;
    });
    return found;
}

/// Set of graphs up to plain isomorphism, for enumeration dedup. Buckets by a
/// cheap combinatorial invariant, then decides by explicit isomorphism search.
class IsoClassSet {
public:
    /// Returns true when g is a new isomorphism class.
    bool insert(const Graph& g) {
        std::string key = invariant(g);
        auto& bucket = buckets_[key];
        for (int idx : bucket)
            if (find_isomorphism(reps_[idx], g, 1 << 20).has_value()) return false;
        bucket.push_back(static_cast<int>(reps_.size()));
        reps_.push_back(g);
        return true;
    }

    const std::vector<Graph>& representatives() const { return reps_; }

private:
    static std::string invariant(const Graph& g) {
        std::ostringstream os;
        os << g.vertex_count() << "," << g.dir_edge_count() << "," << g.half_loop_count() << ";";
        std::vector<std::pair<int, int>> degs;
        for (VertexId v = 0; v < g.vertex_count(); ++v)
            degs.emplace_back(g.degree(v), g.degree_prime(v));
        std::sort(degs.begin(), degs.end());
        for (auto& d : degs) os << d.first << ":" << d.second << " ";
        os << ";";
        std::vector<std::string> orbit_sigs;
        for (EdgeId e = 0; e < g.dir_edge_count(); ++e) {
            if (e > g.inv(e)) continue;
            int a = g.degree(g.tail(e)), b = g.degree(g.head(e));
            std::ostringstream s;
            s << std::min(a, b) << "-" << std::max(a, b) << (g.is_half_loop(e) ? "h" : "");
            orbit_sigs.push_back(s.str());
        }
        std::sort(orbit_sigs.begin(), orbit_sigs.end());
        for (auto& s : orbit_sigs) os << s << " ";
        return os.str();
    }

    std::map<std::string, std::vector<int>> buckets_;
    std::vector<Graph> reps_;
};

}  // namespace nbcover
