#include <catch2/catch_amalgamated.hpp>

#include "nbcover/gen.hpp"
#include "nbcover/graph.hpp"
#include "nbcover/io.hpp"
#include "nbcover/morphism.hpp"
#include "nbcover/rng.hpp"

using namespace nbcover;

TEST_CASE("build_graph validates the involution") {
    // smallest whole-loop
    Graph w = build_graph(1, {{0, 0}, {0, 0}}, {1, 0});
    CHECK(w.edge_count() == 1);
    CHECK(w.half_loop_count() == 0);
    CHECK(w.is_whole_loop(0));

    // single half-loop: involution fixed point
    Graph h = build_graph(1, {{0, 0}}, {0});
    CHECK(h.half_loop_count() == 1);
    CHECK(h.edge_count() == 1);

    // fixed edge with tail != head violates h iota = t
    CHECK_THROWS_AS(build_graph(2, {{0, 1}}, {0}), NotOrientationReversing);
    // not an involution
    CHECK_THROWS_AS(build_graph(1, {{0, 0}, {0, 0}, {0, 0}}, {1, 2, 0}), NotInvolution);
    // orientation reversing violated on a 2-orbit
    CHECK_THROWS_AS(build_graph(3, {{0, 1}, {2, 0}}, {1, 0}), NotOrientationReversing);
}

TEST_CASE("bouquet counts") {
    Graph b20 = Graph::bouquet(2, 0);
    CHECK(b20.vertex_count() == 1);
    CHECK(b20.dir_edge_count() == 4);
    CHECK(b20.degree(0) == 4);

    Graph b03 = Graph::bouquet(0, 3);
    CHECK(b03.dir_edge_count() == 3);
    CHECK(b03.degree(0) == 3);
    CHECK(b03.degree_prime(0) == 6);

    Graph b00 = Graph::bouquet(0, 0);
    CHECK(b00.vertex_count() == 1);
    CHECK(order(b00) == -1);
}

TEST_CASE("degree conventions") {
    Graph p = Graph::path(1);
    CHECK(p.degree(0) == 1);
    CHECK(p.degree(1) == 1);
    CHECK_THROWS_AS(p.degree(2), InvalidVertex);
}

TEST_CASE("order") {
    CHECK(order(Graph::theta(1, 1, 1)) == 1);  // 3 - 2
    for (int m = 0; m <= 3; ++m) CHECK(order(Graph::bouquet(m + 1, 0)) == m);
    CHECK(order(Graph::path(4)) == -1);  // a tree
}

TEST_CASE("is_pruned") {
    CHECK(is_pruned(Graph::cycle(5)));
    CHECK_FALSE(is_pruned(Graph::bouquet(0, 1)));  // half-loop has degree 1
    // figure-8
    Graph fig8 = build_graph(1, {{0, 0}, {0, 0}, {0, 0}, {0, 0}}, {1, 0, 3, 2});
    CHECK(is_pruned(fig8));
}

TEST_CASE("prune") {
    CHECK(prune(Graph::path(4)).vertex_count() == 0);  // tree prunes to empty

    // cycle with a pendant path
    Graph g = build_graph(5, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 0}, {0, 2}, {2, 3}, {3, 2},
                              {3, 4}, {4, 3}},
                          {1, 0, 3, 2, 5, 4, 7, 6, 9, 8});
    Graph pg = prune(g);
    CHECK(pg.vertex_count() == 3);
    CHECK(pg.edge_count() == 3);
    CHECK(is_pruned(pg));

    Graph pp = prune(pg);
    CHECK(pp == pg);  // idempotent on pruned input
}

TEST_CASE("degree sum identity on random graphs") {
    Rng rng(12345);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + static_cast<int>(rng.below(6));
        std::vector<DirectedEdge> edges;
        std::vector<EdgeId> inv;
        int orbits = 1 + static_cast<int>(rng.below(8));
        for (int i = 0; i < orbits; ++i) {
            int u = static_cast<int>(rng.below(n)), v = static_cast<int>(rng.below(n));
            if (u == v && rng.below(2) == 0) {
                inv.push_back(static_cast<int>(edges.size()));
                edges.push_back({u, u});  // half-loop
            } else {
                int id = static_cast<int>(edges.size());
                edges.push_back({u, v});
                edges.push_back({v, u});
                inv.push_back(id + 1);
                inv.push_back(id);
            }
        }
        Graph g(n, edges, inv);
        int degree_sum = 0;
        for (int v = 0; v < n; ++v) degree_sum += g.degree(v);
        CHECK(degree_sum == g.dir_edge_count());
    }
}

TEST_CASE("local order formula on enumerated pruned graphs") {
    // ord(S) = (1/2) sum_v (deg'(v) - 2) with half-loops counted twice
    for (const Graph& g : enumerate_connected_pruned(8)) {
        int sum = 0;
        for (VertexId v = 0; v < g.vertex_count(); ++v) sum += g.degree_prime(v) - 2;
        CHECK(sum % 2 == 0);
        CHECK(order(g) == sum / 2);
    }
}

TEST_CASE("check_morphism classification") {
    Graph c3 = Graph::cycle(3);
    auto rep = check_morphism(identity_morphism(c3));
    CHECK(rep.cls == MorphismClass::covering);
    CHECK(rep.degree == 1);

    // inclusion of a path into the cycle is etale but not covering
    Graph p1 = Graph::path(1);
    GraphMorphism incl{p1, c3, {0, 1}, {0, 1}};
    auto rep2 = check_morphism(incl);
    CHECK(rep2.cls == MorphismClass::etale);

    // broken maps throw
    GraphMorphism bad{p1, c3, {0, 2}, {0, 1}};
    CHECK_THROWS_AS(check_morphism(bad), NotAMorphism);

    // two-to-one cover of the length-3 cycle by the length-6 cycle
    Graph c6 = Graph::cycle(6);
    GraphMorphism two{c6, c3, {}, {}};
    two.vertex_map = {0, 1, 2, 0, 1, 2};
    two.edge_map.resize(12);
    for (int i = 0; i < 6; ++i) {
        two.edge_map[2 * i] = 2 * (i % 3);
        two.edge_map[2 * i + 1] = 2 * (i % 3) + 1;
    }
    auto rep3 = check_morphism(two);
    CHECK(rep3.cls == MorphismClass::covering);
    CHECK(rep3.degree == 2);
}

TEST_CASE("graph text format round trip") {
    for (const Graph& g : {Graph::bouquet(2, 1), Graph::theta(2, 3, 4), Graph::cycle(4)}) {
        std::string text = graph_to_text(g);
        Graph back = graph_from_text(text);
        CHECK(back == g);
        CHECK(graph_to_text(back) == text);  // bit-exact
    }
    CHECK_THROWS_AS(graph_from_text("graph 2\nedge 0 0 1\ninv 0 0\n"),
                    HalfLoopHeadTailMismatch);
}
