#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace nbcover {

/// (Lambda0, Lambda1) matrix model, represented by its random eigenvalue
/// multiset: every sampled eigenvalue lies in B_{Lambda0}(0) or [-L1, L1].
struct MatrixModel {
    double lambda0 = 0.0;
    double lambda1 = 0.0;
    std::vector<int> n_grid;
    std::function<std::vector<std::complex<double>>(int n, std::uint64_t seed)> sampler;
};

/// Union of discs and real intervals in the complex plane.
struct RegionQuery {
    std::vector<std::pair<std::complex<double>, double>> discs;  // (center, radius)
    std::vector<std::pair<double, double>> intervals;            // real [a, b]

    bool contains(std::complex<double> z) const {
        for (const auto& [c, r] : discs)
            if (std::abs(z - c) <= r) return true;
        if (std::abs(z.imag()) <= 1e-12)
            for (const auto& [a, b] : intervals)
                if (z.real() >= a && z.real() <= b) return true;
        return false;
    }

    void validate() const {
        for (const auto& [c, r] : discs)
            if (r <= 0) throw DomainError("disc radius must be positive");
    }
};

struct EinEout {
    double e_in = 0.0;
    double e_out = 0.0;
    double stderr_in = 0.0;
};

/// Monte-Carlo estimate of the expected number of eigenvalues inside/outside
/// the region; per sample the two counts add to n exactly.
inline EinEout e_in_out(const MatrixModel& model, int n, const RegionQuery& region, int trials,
                        std::uint64_t seed, int threads = 1) {
    region.validate();
    std::vector<int> per_trial = parallel_map<int>(trials, threads, [&](int trial) {
        auto eigs = model.sampler(n, derive_seed(seed, 0xe16e, static_cast<std::uint64_t>(n),
                                                 static_cast<std::uint64_t>(trial)));
        int inside = 0;
        for (auto z : eigs)
            if (region.contains(z)) ++inside;
        return inside;
    });
    long double sum = 0, sumsq = 0;
    for (int x : per_trial) {
        sum += x;
        sumsq += static_cast<long double>(x) * x;
    }
    EinEout out;
    long double mean = sum / trials;
    out.e_in = static_cast<double>(mean);
    out.e_out = static_cast<double>(n - mean);
    long double var = trials > 1 ? (sumsq - mean * mean * trials) / (trials - 1) : 0.0L;
    out.stderr_in = static_cast<double>(std::sqrt(std::max(0.0L, var) / trials));
    return out;
}

/// k-th moment of the uniform distribution on [4,5].
inline double uniform45_moment(int k) {
    return (std::pow(5.0, k + 1) - std::pow(4.0, k + 1)) / (k + 1);
}

/// Each of the n eigenvalues is independently 2 with probability 1 - n^-3 and
/// otherwise uniform on [4,5]; E[Trace(M^k)] = 2^k n + (c_k - 2^k)/n^2.
inline MatrixModel typical_side_ensemble(const std::vector<int>& n_grid) {
    MatrixModel model;
    model.lambda0 = 3.0;
    model.lambda1 = 5.0;
    model.n_grid = n_grid;
    model.sampler = [](int n, std::uint64_t seed) {
        if (n < 2) throw DomainError("typical_side_ensemble requires n >= 2");
        Rng rng(seed);
        double p_exc = 1.0 / (static_cast<double>(n) * n * n);
        std::vector<std::complex<double>> eigs(n);
        for (int i = 0; i < n; ++i)
            eigs[i] = rng.uniform01() < p_exc ? rng.uniform(4.0, 5.0) : 2.0;
        return eigs;
    };
    return model;
}

/// Synthetic model for the sidestepping statement: expected eigenvalue mass
/// n^{-j} C_l at each planted location l, remaining mass inside B_{Lambda0}.
inline MatrixModel planted_model(double lambda0, int j,
                                 const std::vector<std::pair<double, double>>& bases,
                                 const std::vector<int>& n_grid) {
    MatrixModel model;
    model.lambda0 = lambda0;
    model.lambda1 = lambda0;
    for (const auto& [l, c] : bases) model.lambda1 = std::max(model.lambda1, std::abs(l));
    model.n_grid = n_grid;
    model.sampler = [lambda0, j, bases](int n, std::uint64_t seed) {
        Rng rng(seed);
        std::vector<std::complex<double>> eigs(n);
        for (int i = 0; i < n; ++i) {
            double u = rng.uniform01();
            double acc = 0.0;
            bool placed = false;
            for (const auto& [l, c] : bases) {
                acc += c * std::pow(static_cast<double>(n), -j) / n;
                if (u < acc) {
                    eigs[i] = l;
                    placed = true;
                    break;
                }
            }
            if (!placed) eigs[i] = rng.uniform(-0.9 * lambda0, 0.9 * lambda0);
        }
        return eigs;
    };
    return model;
}

struct SidestepDemoReport {
    std::vector<int> n_grid;
    std::vector<double> locations;
    /// e_in[n_index][location_index] for the discs B_{n^-theta}(l)
    std::vector<std::vector<double>> e_in;
    /// Eout of B_{Lambda0+eps}(0) union the discs, per n
    std::vector<double> e_out;
    /// fitted log-log slope of e_in vs n per location (target -j)
    std::vector<double> slopes;
    int planted_j = 0;
    bool slopes_within_half = false;
};

/// Verifies the planted scaling: Ein(B_{n^-theta}(l)) ~ n^{-j} C_l across the
/// grid (slope -j +- 0.5) and Eout of the safe region stays negligible.
inline SidestepDemoReport sidestep_demo(const MatrixModel& model, int j, double theta,
                                        double epsilon, int trials, std::uint64_t seed,
                                        const std::vector<double>& locations, int threads = 1) {
    if (model.n_grid.empty()) throw DomainError("empty n grid");
    for (int n : model.n_grid)
        if (static_cast<double>(trials) < 1e5 / n) throw InsufficientTrials();
    SidestepDemoReport rep;
    rep.n_grid = model.n_grid;
    rep.locations = locations;
    rep.planted_j = j;
    for (int n : model.n_grid) {
        double radius = std::pow(static_cast<double>(n), -theta);
        RegionQuery safe;
        safe.discs.push_back({{0.0, 0.0}, model.lambda0 + epsilon});
        std::vector<RegionQuery> around(locations.size());
        for (size_t li = 0; li < locations.size(); ++li) {
            around[li].discs.push_back({{locations[li], 0.0}, radius});
            safe.discs.push_back({{locations[li], 0.0}, radius});
        }
        std::vector<double> ein(locations.size(), 0.0);
        for (size_t li = 0; li < locations.size(); ++li)
            ein[li] = e_in_out(model, n, around[li], trials,
                               derive_seed(seed, 0x51de, li), threads)
                          .e_in;
        rep.e_in.push_back(std::move(ein));
        rep.e_out.push_back(
            e_in_out(model, n, safe, trials, derive_seed(seed, 0x51de, 999), threads).e_out);
    }
    // slope per location
    bool all_ok = !locations.empty();
    for (size_t li = 0; li < locations.size(); ++li) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (size_t i = 0; i < rep.n_grid.size(); ++i) {
            if (rep.e_in[i][li] <= 0) continue;
            double lx = std::log(static_cast<double>(rep.n_grid[i]));
            double ly = std::log(rep.e_in[i][li]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++m;
        }
        double slope = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx)
                              : std::numeric_limits<double>::quiet_NaN();
        rep.slopes.push_back(slope);
        if (!(std::abs(slope + j) <= 0.5)) all_ok = false;
    }
    rep.slopes_within_half = all_ok;
    return rep;
}

}  // namespace nbcover
