// Acceptance suite: one pass/fail line per criterion. Exit code 0 iff all
// selected criteria pass. Run with a list of criterion numbers to restrict.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "nbcover/covers.hpp"
#include "nbcover/gen.hpp"
#include "nbcover/nblang.hpp"
#include "nbcover/reports.hpp"
#include "nbcover/sidestep.hpp"
#include "nbcover/spectra.hpp"
#include "nbcover/tangles.hpp"
#include "nbcover/tracelab.hpp"

using namespace nbcover;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (detail.tellp() < 500) detail << (detail.tellp() ? "; " : "") << what;
        }
    }
};

int g_threads = 2;

// ---------------------------------------------------------------- criterion 1
bool c1_ihara(Check& c) {
    Rng rng(20250810);
    for (int i = 0; i < 200; ++i) {
        Graph g = random_graph(rng, 10, 12);
        IharaResult res = ihara_check(g);
        c.expect(res.holds && res.max_abs_residual < 1e-8,
                 "identity failed on random graph " + std::to_string(i));
        if (!c.ok) return false;
    }
    c.detail << "200/200 exact (residual 0)";
    return c.ok;
}

// ---------------------------------------------------------------- criterion 2
bool c2_trace_walk(Check& c) {
    std::vector<Graph> zoo{Graph::bouquet(1, 0), Graph::bouquet(2, 0), Graph::bouquet(5, 0),
                           Graph::bouquet(0, 3), Graph::bouquet(1, 2), Graph::bouquet(2, 2),
                           Graph::bouquet(0, 10), Graph::cycle(3),    Graph::cycle(5),
                           Graph::theta(1, 2, 2), Graph::theta(1, 1, 1), Graph::path(4)};
    Rng rng(77);
    while (zoo.size() < 42) {
        Graph g = random_graph(rng, 10, 5);
        if (g.dir_edge_count() <= 10) zoo.push_back(g);
    }
    int graphs = 0;
    for (const Graph& g : zoo) {
        if (g.dir_edge_count() > 10) continue;
        ++graphs;
        auto counts = snbc_counts_upto(g, 8, 400'000'000);
        for (int k = 1; k <= 8; ++k) {
            long long t = trace_pow(hashimoto(g).matrix, k);
            c.expect(counts[k] == t, "mismatch at k=" + std::to_string(k));
            if (!c.ok) return false;
        }
    }
    c.detail << graphs << " graphs, k <= 8, exact integer equality";
    return c.ok;
}

// ---------------------------------------------------------------- criterion 3
bool c3_new_old(Check& c) {
    struct Job {
        ModelKind kind;
        Graph base;
        int n;
    };
    std::vector<Job> jobs;
    Graph b20 = Graph::bouquet(2, 0), b11 = Graph::bouquet(1, 1);
    for (int i = 0; i < 20; ++i) jobs.push_back({ModelKind::permutation, b20, 2 + i % 11});
    for (int i = 0; i < 16; ++i) jobs.push_back({ModelKind::full_cycle, b20, 2 + i % 11});
    for (int i = 0; i < 16; ++i)
        jobs.push_back({ModelKind::perm_involution_even, b11, 2 + 2 * (i % 6)});
    for (int i = 0; i < 16; ++i)
        jobs.push_back({ModelKind::perm_involution_odd, b11, 3 + 2 * (i % 5)});
    for (int i = 0; i < 16; ++i)
        jobs.push_back({ModelKind::cycle_involution_even, b11, 2 + 2 * (i % 6)});
    for (int i = 0; i < 16; ++i)
        jobs.push_back({ModelKind::cycle_involution_odd, b11, 3 + 2 * (i % 5)});

    int idx = 0;
    for (const Job& job : jobs) {
        auto cover = sample_cover({job.kind, job.base}, job.n,
                                  derive_seed(33, static_cast<std::uint64_t>(idx)));
        ++idx;
        SpectrumReport rep;
        try {
            rep = new_old_spectrum(cover, 1e-7);
        } catch (const CrossCheckFailed& e) {
            c.expect(false, std::string("cross-check: ") + e.what());
            return false;
        }
        // old + new = all as multisets within 1e-7
        std::vector<double> merged = rep.adjacency_old;
        merged.insert(merged.end(), rep.adjacency_new.begin(), rep.adjacency_new.end());
        std::sort(merged.begin(), merged.end());
        c.expect(merged.size() == rep.adjacency_all.size(), "multiset sizes differ");
        for (size_t i = 0; i < merged.size() && c.ok; ++i)
            c.expect(std::abs(merged[i] - rep.adjacency_all[i]) <= 1e-7,
                     "old + new != all at position " + std::to_string(i));
        // moment identity, k <= 6, tolerance 1e-6
        Eigen::MatrixXi ag = adjacency_matrix(cover.total), ab = adjacency_matrix(cover.base);
        for (int k = 1; k <= 6 && c.ok; ++k) {
            double moment = 0;
            for (double x : rep.adjacency_new) moment += std::pow(x, k);
            double expect = static_cast<double>(trace_pow(ag, k) - trace_pow(ab, k));
            c.expect(std::abs(moment - expect) <= 1e-6 * std::max(1.0, std::abs(expect)),
                     "moment mismatch k=" + std::to_string(k));
        }
        if (!c.ok) return false;
    }
    c.detail << jobs.size() << " covers across all six models";
    return c.ok;
}

// ---------------------------------------------------------------- criterion 4
bool c4_broder_shamir(Check& c) {
    // d = 2: probability is exactly 1/n
    Graph b1 = Graph::bouquet(1, 0);
    for (int k = 1; k <= 4; ++k) {
        Walk w = walk_from_edges(b1, 0, std::vector<EdgeId>(k, 0));
        for (int n = k; n <= 5; ++n)
            c.expect(broder_shamir_exact(b1, w, n) == Rational(1, n), "d=2 value not 1/n");
    }
    // exhaustive oracle without building covers: iterate sigma assignments
    auto run_oracle = [&](const Graph& base, int loops, int n, const Walk& w_b) {
        std::vector<std::vector<int>> perms;
        {
            std::vector<int> p(n);
            std::iota(p.begin(), p.end(), 0);
            do {
                perms.push_back(p);
            } while (std::next_permutation(p.begin(), p.end()));
        }
        int k = w_b.length();
        long long hits = 0, total = 0;
        std::vector<int> choice(loops, 0);
        std::function<void(int)> rec = [&](int li) {
            if (li == loops) {
                // lift from i0 = 0: i_{t+1} = sigma(e_t) i_t
                int at = 0;
                std::vector<char> seen(n, 0);
                seen[0] = 1;
                bool distinct = true;
                for (int t = 0; t < k; ++t) {
                    EdgeId e = w_b.edges[t];
                    int loop_index = e / 2;
                    const std::vector<int>& fwd = perms[choice[loop_index]];
                    int next;
                    if (e % 2 == 0) {
                        next = fwd[at];
                    } else {
                        next = -1;
                        for (int i = 0; i < n; ++i)
                            if (fwd[i] == at) next = i;
                    }
                    at = next;
                    if (t + 1 < k) {
                        if (seen[at]) distinct = false;
                        seen[at] = 1;
                    }
                }
                if (distinct && at == 0) ++hits;
                ++total;
                return;
            }
            for (size_t p = 0; p < perms.size(); ++p) {
                choice[li] = static_cast<int>(p);
                rec(li + 1);
            }
        };
        rec(0);
        return Rational(hits, total);
    };
    for (int k = 1; k <= 4; ++k) {
        Walk w = walk_from_edges(b1, 0, std::vector<EdgeId>(k, 0));
        for (int n = k; n <= 5; ++n)
            c.expect(run_oracle(b1, 1, n, w) == broder_shamir_exact(b1, w, n),
                     "d=2 oracle mismatch");
    }
    Graph b2 = Graph::bouquet(2, 0);
    for (int k = 2; k <= 4; ++k) {
        auto walks = enumerate_snbc(b2, k);
        for (size_t wi = 0; wi < walks.size(); wi += std::max<size_t>(1, walks.size() / 4)) {
            const Walk& w = walks[wi];
            for (int n = k; n <= 5; ++n) {
                c.expect(run_oracle(b2, 2, n, w) == broder_shamir_exact(b2, w, n),
                         "d=4 oracle mismatch at k=" + std::to_string(k) +
                             " n=" + std::to_string(n));
                if (!c.ok) return false;
            }
        }
    }
    c.detail << "rational equality over all sigma, n <= 5, d in {2,4}, k <= 4";
    return c.ok;
}

// ---------------------------------------------------------------- criterion 5
bool c5_expectation(Check& c) {
    // exhaustive oracle over both bouquets for all etale S with <= 4 edges
    for (int loops : {1, 2}) {
        Graph base = Graph::bouquet(loops, 0);
        auto etale = enumerate_etale_bgraphs(base, loops == 1 ? 4 : 4);
        std::vector<std::vector<int>> perms_by_n[5];
        for (int n = 2; n <= 4; ++n) {
            std::vector<int> p(n);
            std::iota(p.begin(), p.end(), 0);
            do {
                perms_by_n[n].push_back(p);
            } while (std::next_permutation(p.begin(), p.end()));
        }
        int tested = 0;
        for (int n = 2; n <= 4; ++n) {
            const auto& perms = perms_by_n[n];
            // precompute covers for every assignment
            std::vector<CoordinatizedCover> covers;
            std::vector<int> choice(loops, 0);
            std::function<void(int)> build = [&](int li) {
                if (li == loops) {
                    std::vector<std::vector<int>> sigma;
                    for (int j = 0; j < loops; ++j) {
                        sigma.push_back(perms[choice[j]]);
                        sigma.push_back(invert_permutation(perms[choice[j]]));
                    }
                    covers.push_back(build_cover(base, n, sigma));
                    return;
                }
                for (size_t p = 0; p < perms.size(); ++p) {
                    choice[li] = static_cast<int>(p);
                    build(li + 1);
                }
            };
            build(0);
            for (const GraphMorphism& s : etale) {
                FibreCounts fc = fibre_counts(s);
                int max_a = 0, max_b = 0;
                for (int a : fc.a) max_a = std::max(max_a, a);
                for (int bcount : fc.b) max_b = std::max(max_b, bcount);
                long long total = 0;
                for (const auto& cover : covers)
                    total += count_monomorphisms(s, cover.projection);
                if (max_a > n || max_b > n) {
                    c.expect(total == 0, "oversized S embedded somewhere");
                    continue;
                }
                Rational expect = expected_ordered_embeddings_exact(s, n);
                c.expect(Rational(total, static_cast<long long>(covers.size())) == expect,
                         "exact expectation mismatch (loops=" + std::to_string(loops) +
                             ", n=" + std::to_string(n) + ")");
                ++tested;
                if (!c.ok) return false;
            }
        }
        c.detail << "bouquet(" << loops << ",0): " << tested << " (S, n) pairs exact; ";
    }

    // Monte-Carlo agreement at n = 8 with 1e4 trials, 4 sigma
    Graph base = Graph::bouquet(2, 0);
    auto etale = enumerate_etale_bgraphs(base, 4);
    int n = 8, trials = 10000;
    std::vector<const GraphMorphism*> live;
    for (const GraphMorphism& s : etale) {
        FibreCounts fc = fibre_counts(s);
        int max_ab = 0;
        for (int a : fc.a) max_ab = std::max(max_ab, a);
        for (int bcount : fc.b) max_ab = std::max(max_ab, bcount);
        if (max_ab <= n) live.push_back(&s);
    }
    std::vector<std::vector<long long>> per_trial = parallel_map<std::vector<long long>>(
        trials, g_threads, [&](int t) {
            auto cover = sample_cover({ModelKind::permutation, base}, n,
                                      derive_seed(4242, static_cast<std::uint64_t>(t)));
            std::vector<long long> counts(live.size());
            for (size_t i = 0; i < live.size(); ++i)
                counts[i] = count_monomorphisms(*live[i], cover.projection);
            return counts;
        });
    int mc_fail = 0;
    for (size_t i = 0; i < live.size(); ++i) {
        long double sum = 0, sumsq = 0;
        for (int t = 0; t < trials; ++t) {
            long double x = per_trial[t][i];
            sum += x;
            sumsq += x * x;
        }
        double mean = static_cast<double>(sum / trials);
        double var = static_cast<double>((sumsq - sum * sum / trials) / (trials - 1));
        double sem = std::sqrt(std::max(0.0, var) / trials);
        double expect = expected_ordered_embeddings_exact(*live[i], n).convert_to<double>();
        if (std::abs(mean - expect) > 4.0 * std::max(sem, 1e-12)) ++mc_fail;
    }
    c.expect(mc_fail == 0, std::to_string(mc_fail) + " of " + std::to_string(live.size()) +
                               " classes outside 4 sigma");
    c.detail << "MC: " << live.size() << " classes within 4 sigma at n=8";
    return c.ok;
}

// ---------------------------------------------------------------- criterion 6
bool c6_automorphisms(Check& c) {
    Graph b2 = Graph::bouquet(2, 0);
    Graph b1 = Graph::bouquet(1, 0);
    int pairs = 0;
    // cycles over the one-loop bouquet have a k-fold automorphism group
    for (int k = 2; k <= 4; ++k) {
        Graph cyc = Graph::cycle(k);
        std::vector<VertexId> vmap(k, 0);
        std::vector<EdgeId> emap(2 * k);
        for (int i = 0; i < k; ++i) {
            emap[2 * i] = 0;
            emap[2 * i + 1] = 1;
        }
        GraphMorphism s{cyc, b1, vmap, emap};
        if (count_automorphisms(s) != k) {
            c.expect(false, "cycle automorphism group size wrong");
            return false;
        }
    }
    auto etale1 = enumerate_etale_bgraphs(b1, 3);
    auto etale2 = enumerate_etale_bgraphs(b2, 3);
    int idx = 0;
    for (const auto* pool : {&etale1, &etale2}) {
        const Graph& base = pool == &etale1 ? b1 : b2;
        for (const GraphMorphism& s : *pool) {
            if (pairs >= 50) break;
            auto cover = sample_cover({ModelKind::permutation, base}, 6,
                                      derive_seed(600, static_cast<std::uint64_t>(idx++)));
            long long aut = count_automorphisms(s);
            long long ordered = count_monomorphisms(s, cover.projection);
            long long copies = count_subgraph_copies(s, cover.projection);
            c.expect(ordered == aut * copies,
                     "identity failed for class " + std::to_string(idx));
            if (!c.ok) return false;
            ++pairs;
        }
    }
    c.detail << pairs << " (S, G) pairs, exact";
    return c.ok;
}

// ---------------------------------------------------------------- criterion 7
bool c7_mu1_order(Check& c) {
    auto graphs = enumerate_connected_pruned(6);
    int equal_general = 0, two_vertex_witnesses = 0;
    for (const Graph& g : graphs) {
        int m = order(g);
        double mu = mu1(g);
        c.expect(mu <= 2.0 * m + 1.0 + 1e-9, "mu1 > 2 ord + 1");
        if (!c.ok) return false;
        if (std::abs(mu - (2.0 * m + 1.0)) <= 1e-9) {
            ++equal_general;
            // every order-0 pruned connected graph is a cycle and attains 1;
            // at positive order the bouquet is the only graph we expect to
            // attain the bound
            if (m == 0)
                c.expect(classify_shape(g) == "cycle", "non-cycle attained mu1 = 1 at order 0");
            else
                c.expect(find_isomorphism(g, Graph::bouquet(m + 1, 0)).has_value(),
                         "equality witness is not the bouquet");
        }
        // whole-loop-free graphs obey the stronger bound
        bool whole_loop_free = true;
        for (EdgeId e = 0; e < g.dir_edge_count(); ++e)
            if (g.is_whole_loop(e)) whole_loop_free = false;
        if (whole_loop_free) c.expect(mu <= m + 1.0 + 1e-9, "whole-loop-free bound violated");
        // two vertices joined by m+2 parallel edges: mu1 = ord + 1
        if (g.vertex_count() == 2 && g.half_loop_count() == 0 && whole_loop_free &&
            g.edge_count() == m + 2) {
            ++two_vertex_witnesses;
            c.expect(std::abs(mu - (m + 1.0)) <= 1e-9, "two-vertex witness off the bound");
        }
        if (!c.ok) return false;
    }
    c.detail << graphs.size() << " pruned graphs <= 6 edges; " << equal_general
             << " general witnesses, " << two_vertex_witnesses << " two-vertex witnesses";
    return c.ok;
}

// ---------------------------------------------------------------- criterion 8
bool c8_tau_tang(Check& c) {
    for (int d = 3; d <= 100; ++d) {
        double s = std::sqrt(static_cast<double>(d - 1));
        int m = tau_tang_formula(d, TauTangVariant::m);
        int mp = tau_tang_formula(d, TauTangVariant::m_prime);
        c.expect(m == static_cast<int>(std::floor((s - 1.0) / 2.0)) + 1, "m(d) mismatch");
        c.expect(mp == static_cast<int>(std::floor(s - 1.0)) + 1, "m'(d) mismatch");
        c.expect(m <= mp, "m > m'");
        if (!c.ok) return false;
    }
    c.expect(tau_tang_formula(4, TauTangVariant::m) == 1, "m(4) != 1");
    c.expect(tau_tang_formula(10, TauTangVariant::m) == 2, "m(10) != 2");
    c.expect(tau_tang_formula(10, TauTangVariant::m_prime) == 3, "m'(10) != 3");
    c.expect(tau_tang_formula(26, TauTangVariant::m) == 3, "m(26) != 3");
    c.expect(tau_tang_formula(26, TauTangVariant::m_prime) == 5, "m'(26) != 5");
    c.detail << "3 <= d <= 100 against the floor expressions";
    return c.ok;
}

// ---------------------------------------------------------------- criterion 9
bool c9_certified_trace(Check& c) {
    TangleQuery q{1.9, 3};
    TangleCatalog cat = enumerate_minimal_tangles(q, 8);
    struct Job {
        ModelKind kind;
        Graph base;
        int n;
    };
    std::vector<Job> jobs;
    Graph b20 = Graph::bouquet(2, 0), b03 = Graph::bouquet(0, 3), b11 = Graph::bouquet(1, 1);
    for (int i = 0; i < 40; ++i) jobs.push_back({ModelKind::permutation, b20, 4 + i % 7});
    for (int i = 0; i < 20; ++i)
        jobs.push_back({ModelKind::perm_involution_even, b03, 4 + 2 * (i % 4)});
    for (int i = 0; i < 20; ++i)
        jobs.push_back({ModelKind::perm_involution_odd, b03, 5 + 2 * (i % 4)});
    for (int i = 0; i < 20; ++i)
        jobs.push_back({ModelKind::cycle_involution_even, b11, 4 + 2 * (i % 4)});

    int tangle_free = 0, with_tangles = 0;
    for (size_t idx = 0; idx < jobs.size(); ++idx) {
        const Job& job = jobs[idx];
        auto cover = sample_cover({job.kind, job.base}, job.n,
                                  derive_seed(909, static_cast<std::uint64_t>(idx)));
        const Graph& g = cover.total;
        bool free = has_tangles(g, q, cat).verdict == TangleVerdict::no_up_to_bound;
        free ? ++tangle_free : ++with_tangles;
        for (int k = 2; k <= 8; ++k) {
            long long cert = certified_trace(g, k, q.nu, q.r, 200'000'000);
            long long trace = trace_pow(hashimoto(g).matrix, k);
            c.expect(cert >= 0 && cert <= trace, "sandwich violated");
            if (free) {
                OrderCounts oc = snbc_counts_by_order(g, k, q.r, 200'000'000);
                long long below = std::accumulate(oc.by_order.begin(), oc.by_order.end(), 0LL);
                c.expect(cert == below, "certified trace != snbc_{<r} on tangle-free G at k=" +
                                            std::to_string(k));
            }
            if (!c.ok) return false;
        }
    }
    c.detail << jobs.size() << " covers (" << tangle_free << " tangle-free, " << with_tangles
             << " with tangles), k <= 8";
    c.expect(tangle_free > 0 && with_tangles > 0, "need both kinds of covers for the check");
    return c.ok;
}

// --------------------------------------------------------------- criterion 10
bool c10_leading_coefficient(Check& c) {
    ExperimentPlan plan;
    plan.model = {ModelKind::permutation, Graph::bouquet(2, 0)};
    plan.n_grid = {2000};
    plan.k_min = 1;
    plan.k_max = 6;
    plan.trials = 1000;
    plan.master_seed = 1010;
    McTraceTable table = mc_expected_trace(plan, g_threads);
    Eigen::MatrixXi hb = hashimoto(plan.model.base).matrix;
    for (int k = 1; k <= 6; ++k) {
        double target = 0;
        for (int kp = 1; kp <= k; ++kp)
            if (k % kp == 0) target += static_cast<double>(trace_pow(hb, kp));
        const McCell& cell = table.cells[0][k - 1];
        double gap = std::abs(cell.mean - target);
        c.expect(gap <= 4.0 * cell.stderr_,
                 "k=" + std::to_string(k) + ": |" + format_number(cell.mean) + " - " +
                     format_number(target) + "| > 4 x " + format_number(cell.stderr_));
        if (c.ok && k == 6)
            c.detail << "k=6: mean " << format_number(cell.mean) << " vs "
                     << format_number(target) << " +- " << format_number(cell.stderr_);
    }
    return c.ok;
}

// --------------------------------------------------------------- criterion 11
bool c11_nonalon_scaling(Check& c) {
    std::vector<double> epsilons{0.05, 0.1, 0.2, 0.4};
    NonAlonScaling res =
        mc_nonalon_probability({ModelKind::permutation, Graph::bouquet(2, 0)}, {100, 200, 400},
                               epsilons, 20000, 1111, g_threads);
    double slope = res.slope[1];  // eps = 0.1
    c.expect(slope >= -1.7 && slope <= -0.4,
             "slope " + format_number(slope) + " outside [-1.7, -0.4]");
    for (size_t i = 0; i < res.n_grid.size(); ++i)
        for (size_t e = 1; e < epsilons.size(); ++e)
            c.expect(res.p_hat[i][e] <= res.p_hat[i][e - 1],
                     "p_hat not monotone in epsilon (sample-coupled)");
    c.detail << "slope(eps=0.1) = " << format_number(slope) << "; p_hat(n) = ";
    for (size_t i = 0; i < res.n_grid.size(); ++i)
        c.detail << (i ? ", " : "") << format_number(res.p_hat[i][1]);
    return c.ok;
}

// --------------------------------------------------------------- criterion 12
bool c12_sidestep(Check& c) {
    // trace moments of the typical-side ensemble
    for (int n : {50, 100}) {
        MatrixModel m = typical_side_ensemble({n});
        int trials = 60000;
        for (int k = 1; k <= 6; ++k) {
            long double sum = 0, sumsq = 0;
            for (int t = 0; t < trials; ++t) {
                auto eigs = m.sampler(n, derive_seed(1212, static_cast<std::uint64_t>(n),
                                                     static_cast<std::uint64_t>(t)));
                long double tr = 0;
                for (auto z : eigs) tr += std::pow(z.real(), k);
                sum += tr;
                sumsq += tr * tr;
            }
            double mean = static_cast<double>(sum / trials);
            double var = static_cast<double>((sumsq - sum * sum / trials) / (trials - 1));
            double sem = std::sqrt(std::max(0.0, var) / trials);
            double expect = std::pow(2.0, k) * n + (uniform45_moment(k) - std::pow(2.0, k)) /
                                                       (static_cast<double>(n) * n);
            c.expect(std::abs(mean - expect) <= 4.0 * std::max(sem, 1e-12),
                     "trace moment outside 4 sigma at n=" + std::to_string(n) +
                         " k=" + std::to_string(k));
        }
    }
    // planted sidestep demo: slope within +-0.5 of -j
    for (int j : {0, 1}) {
        MatrixModel m = planted_model(3.0, j, {{4.0, 1.0}}, {64, 128, 256, 512});
        SidestepDemoReport rep = sidestep_demo(m, j, 0.25, 0.2, 20000, 4321, {4.0}, g_threads);
        c.expect(rep.slopes_within_half,
                 "planted j=" + std::to_string(j) + " slope " + format_number(rep.slopes[0]));
        if (j == 1) c.detail << "planted j=1 slope " << format_number(rep.slopes[0]);
    }
    return c.ok;
}

// --------------------------------------------------------------- criterion 13
bool c13_determinism(Check& c) {
    ExperimentPlan plan;
    plan.model = {ModelKind::perm_involution_even, Graph::bouquet(1, 1)};
    plan.n_grid = {4, 8};
    plan.k_max = 5;
    plan.trials = 120;
    plan.master_seed = 777;
    std::string csv1 = csv_mc_table(mc_expected_trace(plan, 1));
    std::string csv2 = csv_mc_table(mc_expected_trace(plan, 2));
    std::string csv5 = csv_mc_table(mc_expected_trace(plan, 5));
    std::string csv1b = csv_mc_table(mc_expected_trace(plan, 1));
    c.expect(csv1 == csv2 && csv2 == csv5, "trace CSV differs across thread counts");
    c.expect(csv1 == csv1b, "trace CSV differs across reruns");

    auto na1 = mc_nonalon_probability({ModelKind::permutation, Graph::bouquet(2, 0)}, {16, 24},
                                      {0.1, 0.3}, 150, 9, 1);
    auto na3 = mc_nonalon_probability({ModelKind::permutation, Graph::bouquet(2, 0)}, {16, 24},
                                      {0.1, 0.3}, 150, 9, 3);
    c.expect(csv_nonalon(na1) == csv_nonalon(na3), "nonalon CSV differs across thread counts");
    c.detail << "byte-identical CSV at 1/2/5 workers and across reruns";
    return c.ok;
}

struct Criterion {
    int id;
    const char* name;
    std::function<bool(Check&)> run;
    double budget_seconds;  // 0 = no stated budget
};

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
            g_threads = std::atoi(argv[++i]);
            continue;
        }
        selected.insert(std::atoi(argv[i]));
    }
    std::vector<Criterion> criteria{
        {1, "Ihara determinantal identity on 200 random graphs", c1_ihara, 10},
        {2, "Trace(H^k) = snbc(G,k) exactly, m <= 10, k <= 8", c2_trace_walk, 30},
        {3, "new/old spectral decomposition on 100 covers", c3_new_old, 0},
        {4, "Broder-Shamir exact cycle probability vs exhaustive sigma", c4_broder_shamir, 60},
        {5, "permutation-model expectation: exhaustive + Monte-Carlo", c5_expectation, 0},
        {6, "ordered = #Aut x unordered embedding counts", c6_automorphisms, 0},
        {7, "mu1 <= 2 ord + 1 with matching witnesses, <= 6 edges", c7_mu1_order, 0},
        {8, "tangle-power formulas m(d), m'(d), 3 <= d <= 100", c8_tau_tang, 0},
        {9, "certified-trace sandwich and tangle-free agreement", c9_certified_trace, 0},
        {10, "E[Trace(H^k)] at n=2000 vs divisor-sum leading term", c10_leading_coefficient,
         300},
        {11, "non-Alon probability log-log slope and monotonicity", c11_nonalon_scaling, 1800},
        {12, "sidestepping warm-up: trace moments and planted slopes", c12_sidestep, 0},
        {13, "byte-identical outputs for identical plans", c13_determinism, 0},
    };

    int failures = 0;
    for (const Criterion& crit : criteria) {
        if (!selected.empty() && !selected.count(crit.id)) continue;
        Check check;
        auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = crit.run(check);
        } catch (const std::exception& e) {
            check.detail << "exception: " << e.what();
            ok = false;
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (crit.budget_seconds > 0 && secs > crit.budget_seconds) {
            ok = false;
            check.detail << "; over time budget (" << secs << "s > " << crit.budget_seconds
                         << "s)";
        }
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << crit.id << ". " << crit.name << " ("
                  << format_number(secs) << "s)";
        std::string detail = check.detail.str();
        if (!detail.empty()) std::cout << " -- " << detail;
        std::cout << std::endl;
        if (!ok) ++failures;
    }
    if (failures) std::cout << failures << " criterion(s) failed" << std::endl;
    return failures == 0 ? 0 : 1;
}
