#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "morphism.hpp"

namespace nbcover {

/// Graph with a vertex order, an edge order and an orientation, optionally
/// carrying a B-graph structure (projection to a base graph). The orientation
/// is the set of directed representatives stored in edge_order.
struct OrderedBGraph {
    Graph graph;
    /// projection to the base, when the graph lives over one
    std::optional<GraphMorphism> projection;
    /// vertex ids in order (vertex_order[i] = id of the i-th vertex)
    std::vector<VertexId> vertex_order;
    /// oriented representative of each edge orbit, in order
    std::vector<EdgeId> edge_order;
};

/// Canonical form of an ordered graph; equal keys <=> uniquely isomorphic as
/// ordered graphs (ordered B-graphs when letters are present).
struct OrderedKey {
    int n_vertices = 0;
    /// per edge in order: (tail rank, head rank, half-loop?, letter or -1)
    struct Item {
        int tail = 0, head = 0;
        bool half = false;
        int letter = -1;
        friend bool operator==(const Item&, const Item&) = default;
        friend auto operator<=>(const Item&, const Item&) = default;
    };
    std::vector<Item> edges;

    friend bool operator==(const OrderedKey&, const OrderedKey&) = default;
    friend auto operator<=>(const OrderedKey&, const OrderedKey&) = default;

    std::string to_string() const {
        std::ostringstream os;
        os << "v" << n_vertices;
        for (const Item& it : edges) {
            os << ";" << it.tail << ">" << it.head << (it.half ? "h" : "");
            if (it.letter >= 0) os << "@" << it.letter;
        }
        return os.str();
    }
};

inline OrderedKey ordered_key(const OrderedBGraph& s, bool with_letters = true) {
    OrderedKey key;
    key.n_vertices = s.graph.vertex_count();
    std::vector<int> rank(s.graph.vertex_count(), -1);
    for (int i = 0; i < static_cast<int>(s.vertex_order.size()); ++i) rank[s.vertex_order[i]] = i;
    for (EdgeId e : s.edge_order) {
        OrderedKey::Item it;
        it.tail = rank[s.graph.tail(e)];
        it.head = rank[s.graph.head(e)];
        it.half = s.graph.is_half_loop(e);
        if (with_letters && s.projection) it.letter = s.projection->edge_map[e];
        key.edges.push_back(it);
    }
    return key;
}

/// The unique order-preserving isomorphism a -> b, if one exists. Ordered
/// graphs have no nontrivial automorphisms, so at most one map qualifies.
inline std::optional<GraphMorphism> find_ordered_isomorphism(const OrderedBGraph& a,
                                                             const OrderedBGraph& b) {
    bool with_letters = a.projection.has_value() && b.projection.has_value();
    if (a.projection.has_value() != b.projection.has_value()) return std::nullopt;
    if (ordered_key(a, with_letters) != ordered_key(b, with_letters)) return std::nullopt;
    GraphMorphism m{a.graph, b.graph, std::vector<VertexId>(a.graph.vertex_count(), -1),
                    std::vector<EdgeId>(a.graph.dir_edge_count(), -1)};
    for (size_t i = 0; i < a.vertex_order.size(); ++i)
        m.vertex_map[a.vertex_order[i]] = b.vertex_order[i];
    for (size_t i = 0; i < a.edge_order.size(); ++i) {
        m.edge_map[a.edge_order[i]] = b.edge_order[i];
        m.edge_map[a.graph.inv(a.edge_order[i])] = b.graph.inv(b.edge_order[i]);
    }
    if (!is_morphism(m)) return std::nullopt;
    return m;
}

}  // namespace nbcover
