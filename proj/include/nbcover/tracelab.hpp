#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "covers.hpp"
#include "nblang.hpp"
#include "parallel.hpp"
#include "spectra.hpp"
#include "walks.hpp"

namespace nbcover {

/// Reproducible Monte-Carlo experiment description. Per-trial seeds are
/// derived as hash(master_seed, n, trial); results are reduced in trial order,
/// so outputs are identical at any thread count.
struct ExperimentPlan {
    ModelSpec model;
    std::vector<int> n_grid;
    int k_min = 1;
    int k_max = 1;
    int trials = 1;
    std::uint64_t master_seed = 0;
    double nu = 2.0;  // certified-trace parameters where applicable
    int r = 2;
};

inline void validate_plan(const ExperimentPlan& plan) {
    if (plan.n_grid.empty()) throw InsufficientGrid("empty n grid");
    for (size_t i = 1; i < plan.n_grid.size(); ++i)
        if (plan.n_grid[i] <= plan.n_grid[i - 1])
            throw InsufficientGrid("n grid must be strictly increasing");
    if (plan.trials < 1) throw DomainError("trials must be >= 1");
    if (plan.k_min < 1 || plan.k_max < plan.k_min) throw DomainError("bad k range");
}

inline std::uint64_t trial_seed(std::uint64_t master, int n, int trial) {
    return derive_seed(master, 0x7274ull, static_cast<std::uint64_t>(n),
                       static_cast<std::uint64_t>(trial));
}

/// snbc(g,k) for every k <= k_max in one DFS over the oriented line graph.
inline std::vector<long long> snbc_counts_upto(const Graph& g, int k_max,
                                               long long budget = kDefaultWalkBudget) {
    std::vector<long long> counts(k_max + 1, 0);
    long long visited = 0;
    std::vector<EdgeId> stack;
    stack.reserve(k_max);
    auto dfs = [&](auto&& self) -> void {
        if (++visited > budget) throw BudgetExceeded();
        EdgeId first = stack.front(), last = stack.back();
        if (g.head(last) == g.tail(first) && g.inv(last) != first)
            counts[static_cast<int>(stack.size())]++;
        if (static_cast<int>(stack.size()) == k_max) return;
        for (EdgeId f : g.out_edges(g.head(last))) {
            if (f == g.inv(last)) continue;
            stack.push_back(f);
            self(self);
            stack.pop_back();
        }
    };
    for (EdgeId e = 0; e < g.dir_edge_count(); ++e) {
        stack.assign(1, e);
        dfs(dfs);
    }
    return counts;
}

/// Trace(H_G^k) for k = 1..k_max: walk DFS (sparse propagation) for short k,
/// dense integer powers for small matrices when the DFS would blow up.
inline std::vector<long long> hashimoto_trace_powers(const Graph& g, int k_max,
                                                     long long budget = 200'000'000) {
    const int m = g.dir_edge_count();
    if (m == 0) return std::vector<long long>(k_max + 1, 0);
    int dmax = 1;
    for (VertexId v = 0; v < g.vertex_count(); ++v) dmax = std::max(dmax, g.degree(v));
    double est = m;
    double level = m;
    for (int j = 1; j < k_max; ++j) {
        level *= std::max(1, dmax - 1);
        est += level;
    }
    if (est <= 20'000'000.0) {
        auto counts = snbc_counts_upto(g, k_max, budget);
        return counts;
    }
    if (m <= 512) {
        std::vector<long long> out(k_max + 1, 0);
        Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> h =
            hashimoto(g).matrix.cast<long long>();
        Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> p = h;
        out[1] = p.trace();
        for (int k = 2; k <= k_max; ++k) {
            p = (p * h).eval();
            out[k] = p.trace();
        }
        return out;
    }
    throw BudgetExceeded("trace computation too large for both paths");
}

struct McCell {
    double mean = 0.0;
    double stderr_ = 0.0;
};

struct McTraceTable {
    std::vector<int> n_grid;
    int k_min = 1, k_max = 1;
    /// cells[n_index][k - k_min]
    std::vector<std::vector<McCell>> cells;
};

using ProgressFn = std::function<void(int trial, int total, int n)>;

enum class TraceStatistic { trace, certified, snbc_order };

/// Exact probability that the lift of an SNBC walk of length k in a bouquet of
/// whole-loops visits a cycle of length k:
///   (n-1)...(n-k+1) * prod_j 1 / [ n (n-1) ... (n - a(f_j) + 1) ]
/// with a(f_j) counting steps over the j-th loop in either direction.
inline Rational broder_shamir_exact(const Graph& base, const Walk& w_b, int n) {
    if (base.vertex_count() != 1 || base.half_loop_count() > 0)
        throw DomainError("broder_shamir_exact requires a bouquet of whole-loops");
    if (!is_snbc(base, w_b)) throw DomainError("walk must be SNBC in the base");
    int k = w_b.length();
    if (k > n) throw LengthExceedsDegree();
    std::vector<int> orbit = base.orbit_index();
    std::vector<int> a(base.edge_count(), 0);
    for (EdgeId e : w_b.edges) a[orbit[e]]++;
    Rational p = 1;
    for (int i = 1; i <= k - 1; ++i) p *= (n - i);
    for (int aj : a)
        if (aj > 0) p /= falling_factorial(n, aj);
    return p;
}

/// First-order coefficient of the 1/n expansion of the cycle probability:
/// c1(w) = -sum_{j1 < j2} a(f_{j1}) a(f_{j2}), from the binomial identity
/// -C(k,2) + sum_j C(a_j,2) with k = sum a_j.
inline Rational broder_shamir_c1(const Graph& base, const Walk& w_b) {
    std::vector<int> orbit = base.orbit_index();
    std::vector<long long> a(base.edge_count(), 0);
    for (EdgeId e : w_b.edges) a[orbit[e]]++;
    long long s = 0;
    for (size_t j1 = 0; j1 < a.size(); ++j1)
        for (size_t j2 = j1 + 1; j2 < a.size(); ++j2) s += a[j1] * a[j2];
    return Rational(-s);
}

/// Per-k weighted least squares of statistic means against 1, 1/n, ...,
/// 1/n^{order-1}, with weights 1/stderr^2 and covariance (X^T W X)^{-1}.
struct ExpansionEstimate {
    int k_min = 1, k_max = 1;
    int order = 1;
    /// per k: fitted coefficients c_0..c_{order-1} and their covariance
    std::vector<std::vector<double>> coefficients;
    std::vector<Eigen::MatrixXd> covariance;
};

namespace detail {

inline McTraceTable mc_statistic_table(const ExperimentPlan& plan, TraceStatistic stat,
                                       int order_m, int threads, const ProgressFn& progress) {
    validate_plan(plan);
    McTraceTable table;
    table.n_grid = plan.n_grid;
    table.k_min = plan.k_min;
    table.k_max = plan.k_max;
    const int nk = plan.k_max - plan.k_min + 1;
    for (int n : plan.n_grid) {
        std::vector<std::vector<long long>> per_trial = parallel_map<std::vector<long long>>(
            plan.trials, threads,
            [&](int trial) {
                auto cover =
                    sample_cover(plan.model, n, trial_seed(plan.master_seed, n, trial));
                std::vector<long long> vals(plan.k_max + 1, 0);
                if (stat == TraceStatistic::trace) {
                    vals = hashimoto_trace_powers(cover.total, plan.k_max);
                } else if (stat == TraceStatistic::certified) {
                    for (int k = plan.k_min; k <= plan.k_max; ++k)
                        vals[k] = certified_trace(cover.total, k, plan.nu, plan.r);
                } else {
                    for (int k = plan.k_min; k <= plan.k_max; ++k) {
                        OrderCounts oc = snbc_counts_by_order(cover.total, k, order_m + 1);
                        vals[k] = oc.by_order[order_m];
                    }
                }
                return vals;
            },
            progress ? std::function<void(int)>([&](int t) { progress(t, plan.trials, n); })
                     : std::function<void(int)>{});
        std::vector<McCell> row(nk);
        for (int ki = 0; ki < nk; ++ki) {
            int k = plan.k_min + ki;
            long double sum = 0, sumsq = 0;
            for (int t = 0; t < plan.trials; ++t) {
                long double x = static_cast<long double>(per_trial[t][k]);
                sum += x;
                sumsq += x * x;
            }
            long double mean = sum / plan.trials;
            long double var =
                plan.trials > 1 ? (sumsq - mean * mean * plan.trials) / (plan.trials - 1) : 0.0L;
            row[ki].mean = static_cast<double>(mean);
            row[ki].stderr_ =
                static_cast<double>(std::sqrt(std::max(0.0L, var) / plan.trials));
        }
        table.cells.push_back(std::move(row));
    }
    return table;
}

}  // namespace detail

/// Monte-Carlo estimate of E[Trace(H_G^k)] over the plan's grid.
inline McTraceTable mc_expected_trace(const ExperimentPlan& plan, int threads = 1,
                                      const ProgressFn& progress = {}) {
    return detail::mc_statistic_table(plan, TraceStatistic::trace, 0, threads, progress);
}

/// Fits c_0(k) + c_1(k)/n + ... + c_{order-1}(k)/n^{order-1} to the table of
/// statistic means. The design uses columns n^{-j}; nearly collinear designs
/// (condition above 1e8 after column scaling) are rejected.
inline ExpansionEstimate fit_expansion_from_table(const McTraceTable& table, int order) {
    const int rows = static_cast<int>(table.n_grid.size());
    if (rows < order + 2) throw InsufficientGrid();
    ExpansionEstimate est;
    est.k_min = table.k_min;
    est.k_max = table.k_max;
    est.order = order;
    Eigen::MatrixXd x(rows, order);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < order; ++j)
            x(i, j) = std::pow(static_cast<double>(table.n_grid[i]), -j);
    for (int ki = 0; ki <= table.k_max - table.k_min; ++ki) {
        Eigen::VectorXd y(rows), w(rows);
        for (int i = 0; i < rows; ++i) {
            y(i) = table.cells[i][ki].mean;
            double se = std::max(table.cells[i][ki].stderr_, 1e-9);
            w(i) = 1.0 / (se * se);
        }
        Eigen::MatrixXd xw = x;
        for (int i = 0; i < rows; ++i) xw.row(i) *= std::sqrt(w(i));
        Eigen::VectorXd scale(order);
        Eigen::MatrixXd xs = xw;
        for (int j = 0; j < order; ++j) {
            scale(j) = xs.col(j).norm();
            if (scale(j) > 0) xs.col(j) /= scale(j);
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(xs, Eigen::ComputeThinU | Eigen::ComputeThinV);
        double cond = svd.singularValues()(0) /
                      std::max(svd.singularValues()(order - 1), 1e-300);
        if (cond > 1e8) throw IllConditioned("1/n design nearly collinear; reduce the order");
        Eigen::VectorXd ys(rows);
        for (int i = 0; i < rows; ++i) ys(i) = y(i) * std::sqrt(w(i));
        Eigen::VectorXd beta = svd.solve(ys);
        for (int j = 0; j < order; ++j)
            if (scale(j) > 0) beta(j) /= scale(j);
        Eigen::MatrixXd xtwx = xw.transpose() * xw;
        est.coefficients.push_back(
            std::vector<double>(beta.data(), beta.data() + order));
        est.covariance.push_back(xtwx.inverse());
    }
    return est;
}

inline ExpansionEstimate fit_expansion(const ExperimentPlan& plan, TraceStatistic stat,
                                       int order, int order_m = 0, int threads = 1,
                                       const ProgressFn& progress = {}) {
    McTraceTable table = detail::mc_statistic_table(plan, stat, order_m, threads, progress);
    return fit_expansion_from_table(table, order);
}

/// Probability of a positive non-Alon count across an n grid, with the
/// log-log slope across the grid. Counts are exact multiset differences
/// computed from the full adjacency spectra.
struct NonAlonScaling {
    std::vector<int> n_grid;
    std::vector<double> epsilons;
    /// p_hat[n_index][eps_index], with stderr alongside
    std::vector<std::vector<double>> p_hat;
    std::vector<std::vector<double>> stderr_;
    /// log-log slope of p_hat vs n for each epsilon (NaN when a p_hat is 0)
    std::vector<double> slope;
};

namespace detail {

inline int nonalon_count_fast(const Graph& total, const Graph& base, double bound) {
    std::vector<double> all = adjacency_eigenvalues(total);
    std::vector<double> old_part = adjacency_eigenvalues(base);
    int count = 0;
    for (double x : all)
        if (std::abs(x) > bound) ++count;
    for (double x : old_part)
        if (std::abs(x) > bound) --count;
    return count;
}

}  // namespace detail

inline NonAlonScaling mc_nonalon_probability(const ModelSpec& model,
                                             const std::vector<int>& n_grid,
                                             const std::vector<double>& epsilons, int trials,
                                             std::uint64_t seed, int threads = 1,
                                             const ProgressFn& progress = {}) {
    auto d_opt = detail::regular_degree(model.base);
    if (!d_opt || *d_opt < 3) throw NotRegularBase();
    const int d = *d_opt;
    const double root = 2.0 * std::sqrt(static_cast<double>(d - 1));
    NonAlonScaling out;
    out.n_grid = n_grid;
    out.epsilons = epsilons;
    for (int n : n_grid) {
        std::vector<std::vector<char>> per_trial = parallel_map<std::vector<char>>(
            trials, threads,
            [&](int trial) {
                auto cover = sample_cover(model, n, trial_seed(seed, n, trial));
                std::vector<double> all = adjacency_eigenvalues(cover.total);
                std::vector<double> old_part = adjacency_eigenvalues(cover.base);
                std::vector<char> hit(epsilons.size(), 0);
                for (size_t e = 0; e < epsilons.size(); ++e) {
                    double bound = root + epsilons[e];
                    int count = 0;
                    for (double x : all)
                        if (std::abs(x) > bound) ++count;
                    for (double x : old_part)
                        if (std::abs(x) > bound) --count;
                    hit[e] = count > 0 ? 1 : 0;
                }
                return hit;
            },
            progress ? std::function<void(int)>([&](int t) { progress(t, trials, n); })
                     : std::function<void(int)>{});
        std::vector<double> p(epsilons.size(), 0.0), se(epsilons.size(), 0.0);
        for (size_t e = 0; e < epsilons.size(); ++e) {
            long long hits = 0;
            for (int t = 0; t < trials; ++t) hits += per_trial[t][e];
            double ph = static_cast<double>(hits) / trials;
            p[e] = ph;
            se[e] = std::sqrt(ph * (1.0 - ph) / trials);
        }
        out.p_hat.push_back(std::move(p));
        out.stderr_.push_back(std::move(se));
    }
    // log-log slope per epsilon
    for (size_t e = 0; e < epsilons.size(); ++e) {
        bool ok = n_grid.size() >= 2;
        for (size_t i = 0; i < n_grid.size(); ++i)
            if (out.p_hat[i][e] <= 0.0) ok = false;
        if (!ok) {
            out.slope.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = static_cast<int>(n_grid.size());
        for (int i = 0; i < m; ++i) {
            double lx = std::log(static_cast<double>(n_grid[i]));
            double ly = std::log(out.p_hat[i][e]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        out.slope.push_back((m * sxy - sx * sy) / (m * sxx - sx * sx));
    }
    return out;
}

/// Empirical mean of snbc_{>= r}(G,k) and its ratio to the reference bound
/// (d-1)^k k^{2r} / n^r.
struct LargeOrderTail {
    double mean = 0.0;
    double stderr_ = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
};

inline LargeOrderTail snbc_large_order_tail(const ModelSpec& model, int n, int k, int r,
                                            int trials, std::uint64_t seed, int threads = 1) {
    auto d_opt = detail::regular_degree(model.base);
    if (!d_opt) throw NotRegularBase();
    const int d = *d_opt;
    std::vector<long long> per_trial = parallel_map<long long>(
        trials, threads, [&](int trial) {
            auto cover = sample_cover(model, n, trial_seed(seed, n, trial));
            OrderCounts oc = snbc_counts_by_order(cover.total, k, r, 100'000'000);
            return oc.at_least_r;
        });
    long double sum = 0, sumsq = 0;
    for (long long x : per_trial) {
        sum += x;
        sumsq += static_cast<long double>(x) * x;
    }
    LargeOrderTail out;
    long double mean = sum / trials;
    out.mean = static_cast<double>(mean);
    long double var = trials > 1 ? (sumsq - mean * mean * trials) / (trials - 1) : 0.0L;
    out.stderr_ = static_cast<double>(std::sqrt(std::max(0.0L, var) / trials));
    out.bound = std::pow(static_cast<double>(d - 1), k) * std::pow(static_cast<double>(k), 2 * r) /
                std::pow(static_cast<double>(n), r);
    out.ratio = out.bound > 0 ? out.mean / out.bound : 0.0;
    return out;
}

}  // namespace nbcover
