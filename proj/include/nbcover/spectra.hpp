#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "charpoly.hpp"
#include "covers_fwd.hpp"
#include "graph.hpp"

namespace nbcover {

/// A_{v,v'} = number of directed edges v -> v' (whole-loop adds 2 to the
/// diagonal, half-loop adds 1); symmetric.
inline Eigen::MatrixXi adjacency_matrix(const Graph& g) {
    Eigen::MatrixXi a = Eigen::MatrixXi::Zero(g.vertex_count(), g.vertex_count());
    for (EdgeId e = 0; e < g.dir_edge_count(); ++e) a(g.tail(e), g.head(e)) += 1;
    return a;
}

/// Adjacency matrix of the oriented line graph: entry (e,e') is 1 iff
/// tail(e') = head(e) and e' != inv(e).
struct HashimotoMatrix {
    Graph graph;
    Eigen::MatrixXi matrix;
};

inline HashimotoMatrix hashimoto(const Graph& g) {
    const int m = g.dir_edge_count();
    Eigen::MatrixXi h = Eigen::MatrixXi::Zero(m, m);
    for (EdgeId e = 0; e < m; ++e)
        for (EdgeId f : g.out_edges(g.head(e)))
            if (f != g.inv(e)) h(e, f) = 1;
    return {g, h};
}

inline std::vector<double> sorted_eigenvalues_sym(const Eigen::MatrixXd& a) {
    if (a.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
    std::vector<double> v(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(v.begin(), v.end());
    return v;
}

inline std::vector<double> adjacency_eigenvalues(const Graph& g) {
    return sorted_eigenvalues_sym(adjacency_matrix(g).cast<double>());
}

inline std::vector<std::complex<double>> sorted_eigenvalues_gen(const Eigen::MatrixXd& a) {
    if (a.rows() == 0) return {};
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> v(a.rows());
    for (int i = 0; i < a.rows(); ++i) v[i] = solver.eigenvalues()[i];
    std::sort(v.begin(), v.end(), [](auto x, auto y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return v;
}

inline std::vector<std::complex<double>> hashimoto_eigenvalues(const Graph& g) {
    return sorted_eigenvalues_gen(hashimoto(g).matrix.cast<double>());
}

namespace detail {

inline double spectral_radius_power_iteration(const Eigen::MatrixXd& h) {
    // power iteration on H + I; the shift makes each block aperiodic
    const int m = static_cast<int>(h.rows());
    Eigen::VectorXd v = Eigen::VectorXd::Ones(m);
    v.normalize();
    double lambda = 0.0;
    int stable = 0;
    for (int it = 0; it < 200000; ++it) {
        Eigen::VectorXd w = h * v + v;
        double norm = w.norm();
        if (norm < 1e-300) return 0.0;  // nilpotent
        w /= norm;
        double next = norm;
        if (std::abs(next - lambda) <= 1e-13 * std::max(1.0, std::abs(next)))
            ++stable;
        else
            stable = 0;
        lambda = next;
        v = w;
        if (stable >= 4) break;
    }
    return std::max(0.0, lambda - 1.0);
}

}  // namespace detail

/// Perron-Frobenius eigenvalue of the Hashimoto matrix; 0 for an empty or
/// nilpotent H. Dense solve for small matrices, power iteration beyond.
inline double mu1(const Graph& g) {
    const int m = g.dir_edge_count();
    if (m == 0) return 0.0;
    Eigen::MatrixXd h = hashimoto(g).matrix.cast<double>();
    if (m <= 256) {
        double r = 0.0;
        for (const auto& z : sorted_eigenvalues_gen(h)) r = std::max(r, std::abs(z));
        return r;
    }
    return detail::spectral_radius_power_iteration(h);
}

/// Adjacency and Hashimoto spectra of a cover split into old and new parts.
struct SpectrumReport {
    std::vector<double> adjacency_all;
    std::vector<double> adjacency_old;
    std::vector<double> adjacency_new;
    std::vector<std::complex<double>> hashimoto_all;
    double mu1_value = 0.0;
    double new_spectral_radius = 0.0;
    std::optional<int> d;  // set when the base is regular
};

namespace detail {

/// Multiset difference all \ old by greedy nearest pairing on sorted lists.
inline std::vector<double> multiset_difference(std::vector<double> all,
                                               const std::vector<double>& old_part) {
    std::vector<bool> taken(all.size(), false);
    for (double x : old_part) {
        int best = -1;
        double best_gap = 0;
        for (size_t i = 0; i < all.size(); ++i) {
            if (taken[i]) continue;
            double gap = std::abs(all[i] - x);
            if (best < 0 || gap < best_gap) {
                best = static_cast<int>(i);
                best_gap = gap;
            }
        }
        if (best >= 0) taken[best] = true;
    }
    std::vector<double> rest;
    for (size_t i = 0; i < all.size(); ++i)
        if (!taken[i]) rest.push_back(all[i]);
    return rest;
}

inline std::optional<int> regular_degree(const Graph& g) {
    if (g.vertex_count() == 0) return std::nullopt;
    int d = g.degree(0);
    for (VertexId v = 1; v < g.vertex_count(); ++v)
        if (g.degree(v) != d) return std::nullopt;
    return d;
}

}  // namespace detail

/// New/old adjacency decomposition of a coordinatized cover. The new part is
/// computed twice: as a multiset difference Spec(A_G) \ Spec(A_B) and by
/// diagonalizing A_G on the subspace of functions with zero sum on every
/// vertex fibre; the two must agree within cross_check_tol.
inline SpectrumReport new_old_spectrum(const CoordinatizedCover& cover,
                                       double cross_check_tol = 1e-7) {
    SpectrumReport rep;
    rep.adjacency_all = adjacency_eigenvalues(cover.total);
    rep.adjacency_old = adjacency_eigenvalues(cover.base);
    rep.adjacency_new = detail::multiset_difference(rep.adjacency_all, rep.adjacency_old);
    rep.hashimoto_all = hashimoto_eigenvalues(cover.total);
    rep.mu1_value = mu1(cover.total);
    rep.d = detail::regular_degree(cover.base);

    // cross-check on the explicit new-function subspace
    const int n = cover.n;
    const int vb = cover.base.vertex_count();
    if (n >= 2) {
        Eigen::MatrixXd a = adjacency_matrix(cover.total).cast<double>();
        Eigen::MatrixXd q = Eigen::MatrixXd::Zero(vb * n, vb * (n - 1));
        for (int v = 0; v < vb; ++v) {
            for (int j = 1; j < n; ++j) {
                // Helmert vector on the fibre {v} x [n]
                double scale = 1.0 / std::sqrt(static_cast<double>(j) * (j + 1));
                for (int i = 0; i < j; ++i) q(v * n + i, v * (n - 1) + j - 1) = scale;
                q(v * n + j, v * (n - 1) + j - 1) = -static_cast<double>(j) * scale;
            }
        }
        std::vector<double> check = sorted_eigenvalues_sym(q.transpose() * a * q);
        if (check.size() != rep.adjacency_new.size()) throw CrossCheckFailed();
        for (size_t i = 0; i < check.size(); ++i)
            if (std::abs(check[i] - rep.adjacency_new[i]) > cross_check_tol) {
                std::ostringstream os;
                os << "new-spectrum cross-check: " << check[i] << " vs "
                   << rep.adjacency_new[i];
                throw CrossCheckFailed(os.str());
            }
        rep.adjacency_new = check;  // subspace computation is the better conditioned one
    } else {
        if (!rep.adjacency_new.empty()) throw CrossCheckFailed("degree-1 cover with new part");
    }
    for (double x : rep.adjacency_new)
        rep.new_spectral_radius = std::max(rep.new_spectral_radius, std::abs(x));
    return rep;
}

/// #{lambda in new : |lambda| > 2 sqrt(d-1) + epsilon}; requires a regular base
/// of degree d >= 3.
inline int non_alon_count(const SpectrumReport& rep, double epsilon) {
    if (!rep.d || *rep.d < 3) throw NotRegularBase();
    double bound = 2.0 * std::sqrt(static_cast<double>(*rep.d - 1)) + epsilon;
    int c = 0;
    for (double x : rep.adjacency_new)
        if (std::abs(x) > bound) ++c;
    return c;
}

struct IharaResult {
    bool holds = false;
    double max_abs_residual = 0.0;
    std::string details;
};

/// Checks det(uI - H) = det(u^2 I - u A + (D - I)) (u+1)^{o1} (u^2-1)^{o2-n}
/// as an exact identity of integer polynomials; D counts half-loops once,
/// o1 = #half-loops, o2 = #non-half-loop edges, n = #V. Negative exponents are
/// handled by cross multiplication.
inline IharaResult ihara_check(const Graph& g, int dense_bound = 200) {
    if (g.dir_edge_count() > dense_bound) throw SizeBoundExceeded();
    const int n = g.vertex_count();
    const int o1 = g.half_loop_count();
    const int o2 = g.whole_edge_count();

    Eigen::MatrixXi h = hashimoto(g).matrix;
    std::vector<std::vector<BigInt>> hm(h.rows(), std::vector<BigInt>(h.rows()));
    for (int i = 0; i < h.rows(); ++i)
        for (int j = 0; j < h.cols(); ++j) hm[i][j] = h(i, j);
    IntPoly lhs = charpoly(hm);

    // det(u^2 I - u A + Q) = det(uI - C) with the companion C = [[A, -Q],[I, 0]]
    Eigen::MatrixXi a = adjacency_matrix(g);
    std::vector<std::vector<BigInt>> comp(2 * n, std::vector<BigInt>(2 * n, 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) comp[i][j] = a(i, j);
        comp[i][n + i] = -(g.degree(i) - 1);
        comp[n + i][i] = 1;
    }
    IntPoly rhs = charpoly(comp);
    rhs = poly_mul(rhs, poly_pow(IntPoly{1, 1}, o1));  // (u+1)^{o1}

    int e2 = o2 - n;
    IntPoly lhs_full = lhs, rhs_full = rhs;
    if (e2 >= 0)
        rhs_full = poly_mul(rhs_full, poly_pow(IntPoly{-1, 0, 1}, e2));
    else
        lhs_full = poly_mul(lhs_full, poly_pow(IntPoly{-1, 0, 1}, -e2));

    size_t deg = std::max(lhs_full.size(), rhs_full.size());
    lhs_full.resize(deg);
    rhs_full.resize(deg);
    IharaResult res;
    res.holds = true;
    BigInt max_coeff = 1, max_diff = 0;
    for (size_t i = 0; i < deg; ++i) {
        BigInt d = lhs_full[i] - rhs_full[i];
        if (d < 0) d = -d;
        if (d > max_diff) max_diff = d;
        BigInt c = lhs_full[i] < 0 ? -lhs_full[i] : lhs_full[i];
        if (c > max_coeff) max_coeff = c;
        if (d != 0) res.holds = false;
    }
    res.max_abs_residual =
        max_diff == 0 ? 0.0
                      : boost::multiprecision::cpp_rational(max_diff, max_coeff)
                            .convert_to<double>();
    if (!res.holds) {
        std::ostringstream os;
        os << "coefficient mismatch, relative residual " << res.max_abs_residual;
        res.details = os.str();
    }
    return res;
}

/// lambda = mu + (d-1)/mu on the real branch mu >= sqrt(d-1).
inline double adjacency_bound_from_hashimoto(int d, double mu_bound) {
    if (d < 3) throw DomainError("d must be >= 3");
    double root = std::sqrt(static_cast<double>(d - 1));
    if (mu_bound < root - 1e-12) throw DomainError("mu below sqrt(d-1)");
    double mu = std::max(mu_bound, root);
    return mu + (d - 1) / mu;
}

/// Inverse of the above: the larger root of mu^2 - lambda mu + (d-1) = 0.
inline double hashimoto_bound_from_adjacency(int d, double lambda_bound) {
    if (d < 3) throw DomainError("d must be >= 3");
    double disc = lambda_bound * lambda_bound - 4.0 * (d - 1);
    if (disc < -1e-12) throw DomainError("lambda below 2 sqrt(d-1)");
    disc = std::max(disc, 0.0);
    return (lambda_bound + std::sqrt(disc)) / 2.0;
}

/// Integer trace of A^k for a small integer matrix.
inline long long trace_pow(const Eigen::MatrixXi& a, int k) {
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> m =
        a.cast<long long>();
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> p =
        Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>::Identity(a.rows(), a.cols());
    for (int i = 0; i < k; ++i) p = (p * m).eval();
    return p.trace();
}

}  // namespace nbcover
