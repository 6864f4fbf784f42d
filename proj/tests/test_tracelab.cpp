#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numeric>

#include "nbcover/tracelab.hpp"

using namespace nbcover;
using Catch::Approx;

namespace {

ExperimentPlan small_plan() {
    ExperimentPlan plan;
    plan.model = {ModelKind::permutation, Graph::bouquet(2, 0)};
    plan.n_grid = {4, 6, 8};
    plan.k_min = 1;
    plan.k_max = 4;
    plan.trials = 200;
    plan.master_seed = 17;
    return plan;
}

}  // namespace

TEST_CASE("trace power helpers agree") {
    Rng rng(8);
    for (int i = 0; i < 10; ++i) {
        Graph g = random_graph(rng, 5, 5);
        auto counts = snbc_counts_upto(g, 6, 100'000'000);
        auto traces = hashimoto_trace_powers(g, 6);
        for (int k = 1; k <= 6; ++k) {
            CHECK(counts[k] == trace_pow(hashimoto(g).matrix, k));
            CHECK(traces[k] == counts[k]);
        }
    }
}

TEST_CASE("mc_expected_trace") {
    SECTION("n = 1: the unique cover is the base, zero variance") {
        ExperimentPlan plan = small_plan();
        plan.n_grid = {1};
        plan.trials = 50;
        McTraceTable t = mc_expected_trace(plan);
        for (int ki = 0; ki <= plan.k_max - plan.k_min; ++ki) {
            int k = plan.k_min + ki;
            CHECK(t.cells[0][ki].mean ==
                  Approx(static_cast<double>(
                             trace_pow(hashimoto(plan.model.base).matrix, k)))
                      .margin(1e-12));
            CHECK(t.cells[0][ki].stderr_ == 0.0);
        }
    }
    SECTION("determinism: identical plan, any thread count") {
        ExperimentPlan plan = small_plan();
        McTraceTable a = mc_expected_trace(plan, 1);
        McTraceTable b = mc_expected_trace(plan, 2);
        McTraceTable c = mc_expected_trace(plan, 7);
        for (size_t i = 0; i < a.cells.size(); ++i)
            for (size_t j = 0; j < a.cells[i].size(); ++j) {
                CHECK(a.cells[i][j].mean == b.cells[i][j].mean);
                CHECK(a.cells[i][j].stderr_ == b.cells[i][j].stderr_);
                CHECK(a.cells[i][j].mean == c.cells[i][j].mean);
            }
    }
    SECTION("plan validation") {
        ExperimentPlan plan = small_plan();
        plan.n_grid = {6, 4};
        CHECK_THROWS_AS(mc_expected_trace(plan), InsufficientGrid);
    }
}

TEST_CASE("broder_shamir_exact") {
    SECTION("d = 2: exactly 1/n") {
        Graph b1 = Graph::bouquet(1, 0);
        for (int k = 1; k <= 4; ++k) {
            std::vector<EdgeId> edges(k, 0);  // go around f1 k times
            Walk w = walk_from_edges(b1, 0, edges);
            REQUIRE(is_snbc(b1, w));
            for (int n = k; n <= 6; ++n)
                CHECK(broder_shamir_exact(b1, w, n) == Rational(1, n));
        }
    }
    SECTION("exhaustive oracle, d = 4, n <= 5, k <= 4") {
        Graph b = Graph::bouquet(2, 0);
        for (int k = 2; k <= 4; ++k) {
            for (const Walk& w_b : enumerate_snbc(b, k)) {
                for (int n = k; n <= 5; ++n) {
                    // average over all sigma pairs of the cycle indicator
                    long long hits = 0, total = 0;
                    std::vector<int> p1(n), p2(n);
                    std::iota(p1.begin(), p1.end(), 0);
                    do {
                        std::iota(p2.begin(), p2.end(), 0);
                        do {
                            auto cover = build_cover(
                                b, n,
                                {p1, invert_permutation(p1), p2, invert_permutation(p2)});
                            // lift w_b from fibre point 0
                            std::vector<EdgeId> lift;
                            int at = 0;
                            for (EdgeId e : w_b.edges) {
                                lift.push_back(cover.edge_id(e, at));
                                at = cover.assignment.sigma[e][at];
                            }
                            Walk wg = walk_from_edges(cover.total, 0, lift);
                            Graph visited = visited_subgraph(cover.total, wg).graph;
                            bool is_cycle = wg.closed() &&
                                            visited.vertex_count() == k &&
                                            visited.edge_count() == k;
                            if (is_cycle) ++hits;
                            ++total;
                        } while (std::next_permutation(p2.begin(), p2.end()));
                    } while (std::next_permutation(p1.begin(), p1.end()));
                    INFO("k=" << k << " n=" << n);
                    CHECK(Rational(hits, total) == broder_shamir_exact(b, w_b, n));
                }
                break;  // one walk per k is plenty for the oracle here
            }
        }
    }
    SECTION("series check: value = 1/n + c1/n^2 + O(k^4)/n^3") {
        Graph b = Graph::bouquet(2, 0);
        for (int k : {3, 4}) {
            auto walks = enumerate_snbc(b, k);
            for (size_t wi = 0; wi < walks.size(); wi += 7) {
                const Walk& w = walks[wi];
                Rational c1 = broder_shamir_c1(b, w);
                // compare at two large n: n^3 (P - 1/n - c1/n^2) stays bounded
                for (int n : {200, 400}) {
                    Rational p = broder_shamir_exact(b, w, n);
                    Rational rem = (p - Rational(1, n) - c1 / (n * n)) * n * n * n;
                    double bound = 4.0 * std::pow(k, 4);
                    CHECK(std::abs(rem.convert_to<double>()) <= bound);
                }
            }
        }
    }
    SECTION("preconditions") {
        Graph b1 = Graph::bouquet(1, 0);
        Walk w = walk_from_edges(b1, 0, {0, 0, 0});
        CHECK_THROWS_AS(broder_shamir_exact(b1, w, 2), LengthExceedsDegree);
        CHECK_THROWS_AS(broder_shamir_exact(Graph::bouquet(0, 2), w, 5), DomainError);
    }
}

TEST_CASE("fit_expansion") {
    SECTION("recovers planted coefficients from exact synthetic data") {
        // f(k,n) = c0(k) + c1(k)/n + c2(k)/n^2 with known smooth coefficients
        McTraceTable table;
        table.n_grid = {10, 20, 40, 80, 160};
        table.k_min = 1;
        table.k_max = 3;
        auto c0 = [](int k) { return std::pow(3.0, k); };
        auto c1 = [](int k) { return -2.0 * k * k; };
        auto c2 = [](int k) { return 7.0 + k; };
        for (int n : table.n_grid) {
            std::vector<McCell> row;
            for (int k = 1; k <= 3; ++k) {
                McCell cell;
                cell.mean = c0(k) + c1(k) / n + c2(k) / (n * n);
                cell.stderr_ = 1e-6;
                row.push_back(cell);
            }
            table.cells.push_back(row);
        }
        ExpansionEstimate est = fit_expansion_from_table(table, 3);
        for (int ki = 0; ki < 3; ++ki) {
            int k = ki + 1;
            // data is exact, so recovery is limited only by numerics
            double scale = std::abs(c0(k)) + std::abs(c1(k)) + std::abs(c2(k));
            CHECK(std::abs(est.coefficients[ki][0] - c0(k)) <= 1e-9 * scale);
            CHECK(std::abs(est.coefficients[ki][1] - c1(k)) <= 1e-9 * scale * 200);
            CHECK(std::abs(est.coefficients[ki][2] - c2(k)) <= 1e-9 * scale * 200 * 200);
        }
    }
    SECTION("grid too small") {
        McTraceTable table;
        table.n_grid = {10, 20};
        table.k_min = table.k_max = 1;
        table.cells = {{McCell{1, 1e-3}}, {McCell{1, 1e-3}}};
        CHECK_THROWS_AS(fit_expansion_from_table(table, 2), InsufficientGrid);
    }
}

TEST_CASE("mc_nonalon_probability") {
    Graph b = Graph::bouquet(2, 0);
    SECTION("epsilon beyond d - 2 sqrt(d-1) gives p = 0") {
        // new eigenvalues are bounded by d = 4; threshold 2 sqrt 3 + 0.6 > 4
        auto res = mc_nonalon_probability({ModelKind::permutation, b}, {8, 12}, {0.6}, 100, 5);
        CHECK(res.p_hat[0][0] == 0.0);
        CHECK(res.p_hat[1][0] == 0.0);
        CHECK(std::isnan(res.slope[0]));
    }
    SECTION("single trial yields 0 or 1") {
        auto res = mc_nonalon_probability({ModelKind::permutation, b}, {8}, {0.05}, 1, 5);
        CHECK((res.p_hat[0][0] == 0.0 || res.p_hat[0][0] == 1.0));
    }
    SECTION("monotone nonincreasing in epsilon, sample-coupled") {
        auto res = mc_nonalon_probability({ModelKind::permutation, b}, {10, 14},
                                          {0.02, 0.1, 0.3, 0.5}, 400, 99, 2);
        for (size_t i = 0; i < res.n_grid.size(); ++i)
            for (size_t e = 1; e < res.epsilons.size(); ++e)
                CHECK(res.p_hat[i][e] <= res.p_hat[i][e - 1]);
    }
    SECTION("determinism across thread counts") {
        auto a = mc_nonalon_probability({ModelKind::permutation, b}, {10}, {0.1}, 120, 7, 1);
        auto c = mc_nonalon_probability({ModelKind::permutation, b}, {10}, {0.1}, 120, 7, 3);
        CHECK(a.p_hat[0][0] == c.p_hat[0][0]);
    }
    SECTION("non-regular base rejected") {
        CHECK_THROWS_AS(
            mc_nonalon_probability({ModelKind::permutation, Graph::path(1)}, {4}, {0.1}, 2, 1),
            NotRegularBase);
    }
}

TEST_CASE("snbc_large_order_tail") {
    Graph b = Graph::bouquet(2, 0);
    SECTION("r large enough: tail is empty for short walks") {
        auto res = snbc_large_order_tail({ModelKind::permutation, b}, 30, 4, 5, 20, 3);
        CHECK(res.mean == 0.0);
    }
    SECTION("tail shrinks roughly like n^{-r} as n doubles") {
        int k = 8, r = 2, trials = 150;
        auto small = snbc_large_order_tail({ModelKind::permutation, b}, 25, k, r, trials, 3, 2);
        auto big = snbc_large_order_tail({ModelKind::permutation, b}, 50, k, r, trials, 3, 2);
        CHECK(small.mean > 0.0);
        CHECK(big.mean < small.mean);
        CHECK(small.ratio < 1.0);  // comfortably inside the reference bound
        CHECK(big.ratio < 1.0);
    }
}
