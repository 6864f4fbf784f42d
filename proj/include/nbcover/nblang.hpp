#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "spectra.hpp"
#include "tangles.hpp"
#include "walks.hpp"

namespace nbcover {

/// Word-counting automaton: transition_counts(q,q') = number of letters taking
/// q to q'. The number of accepted words of length k is
/// sum_{q in F} (A^k)_{initial,q}, a polyexponential in the eigenvalues of A.
struct CountAutomaton {
    int states = 0;
    Eigen::MatrixXi transition_counts;
    int initial = 0;
    std::vector<int> accepting;
};

inline std::vector<std::complex<double>> language_eigenvalues(const CountAutomaton& m) {
    return sorted_eigenvalues_gen(m.transition_counts.cast<double>());
}

inline long long automaton_word_count(const CountAutomaton& m, int k) {
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> p =
        Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>::Identity(m.states, m.states);
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> a =
        m.transition_counts.cast<long long>();
    for (int i = 0; i < k; ++i) p = (p * a).eval();
    long long total = 0;
    for (int q : m.accepting) total += p(m.initial, q);
    return total;
}

/// The oriented-line-graph automaton of B: states are directed edges, one
/// letter per non-backtracking continuation. Its eigenvalues are Spec(H_B).
inline CountAutomaton line_automaton(const Graph& b) {
    CountAutomaton m;
    m.states = b.dir_edge_count();
    m.transition_counts = hashimoto(b).matrix;
    m.initial = 0;
    for (int q = 0; q < m.states; ++q) m.accepting.push_back(q);
    return m;
}

// Automaton file format:
//   states N
//   init q
//   accept q1 q2 ...
//   trans q q' count
inline std::string automaton_to_text(const CountAutomaton& m) {
    std::ostringstream os;
    os << "states " << m.states << "\n";
    os << "init " << m.initial << "\n";
    os << "accept";
    for (int q : m.accepting) os << " " << q;
    os << "\n";
    for (int q = 0; q < m.states; ++q)
        for (int p = 0; p < m.states; ++p)
            if (m.transition_counts(q, p) != 0)
                os << "trans " << q << " " << p << " " << m.transition_counts(q, p) << "\n";
    return os.str();
}

inline CountAutomaton automaton_from_text(const std::string& text) {
    std::istringstream is(text);
    CountAutomaton m;
    std::string word;
    bool have_states = false;
    std::vector<std::tuple<int, int, int>> trans;
    while (is >> word) {
        if (word == "states") {
            if (!(is >> m.states)) throw ParseError("automaton: states");
            have_states = true;
        } else if (word == "init") {
            if (!(is >> m.initial)) throw ParseError("automaton: init");
        } else if (word == "accept") {
            std::string rest;
            std::getline(is, rest);
            std::istringstream rs(rest);
            int q;
            while (rs >> q) m.accepting.push_back(q);
        } else if (word == "trans") {
            int q, p, c;
            if (!(is >> q >> p >> c)) throw ParseError("automaton: trans");
            trans.emplace_back(q, p, c);
        } else {
            throw ParseError("automaton: unknown directive " + word);
        }
    }
    if (!have_states || m.states < 0) throw ParseError("automaton: missing states");
    m.transition_counts = Eigen::MatrixXi::Zero(m.states, m.states);
    for (auto [q, p, c] : trans) {
        if (q < 0 || q >= m.states || p < 0 || p >= m.states)
            throw ParseError("automaton: state out of range");
        m.transition_counts(q, p) = c;
    }
    return m;
}

/// Number of non-backtracking words of k letters starting with e and ending
/// with e': [e = e'] for k = 1, (H_B^{k-1})_{e,e'} for k >= 2. Length counts
/// letters (a word of k letters is a walk of k edges), so closed words of
/// k+1 letters from e to e total Trace(H^k).
inline long long nbwalk_count(const Graph& b, EdgeId e, EdgeId e_prime, int k) {
    if (k < 1) throw DomainError("k must be >= 1");
    if (k == 1) return e == e_prime ? 1 : 0;
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> p =
        Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>::Identity(b.dir_edge_count(),
                                                                           b.dir_edge_count());
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> h =
        hashimoto(b).matrix.cast<long long>();
    for (int i = 0; i < k - 1; ++i) p = (p * h).eval();
    return p(e, e_prime);
}

/// B-wording of T: a non-backtracking B-word per directed edge of T with
/// W(inv e) the letterwise-involuted reversal, half-loop edges carrying one
/// half-loop letter, and all words leaving a vertex starting at one B-vertex.
struct Wording {
    Graph t;
    std::vector<std::vector<EdgeId>> words;  // indexed by directed edge of t
};

inline void validate_wording(const Wording& w, const Graph& base) {
    const Graph& t = w.t;
    if (static_cast<int>(w.words.size()) != t.dir_edge_count())
        throw InvalidWording("word count mismatch");
    for (EdgeId e = 0; e < t.dir_edge_count(); ++e) {
        const auto& word = w.words[e];
        if (word.empty()) throw InvalidWording("empty word");
        for (EdgeId l : word)
            if (l < 0 || l >= base.dir_edge_count()) throw InvalidWording("letter out of range");
        for (size_t i = 0; i + 1 < word.size(); ++i) {
            if (base.head(word[i]) != base.tail(word[i + 1]))
                throw InvalidWording("letters do not chain");
            if (base.inv(word[i + 1]) == word[i]) throw InvalidWording("word backtracks");
        }
        const auto& rev = w.words[t.inv(e)];
        if (rev.size() != word.size()) throw InvalidWording("reverse length mismatch");
        for (size_t i = 0; i < word.size(); ++i)
            if (rev[i] != base.inv(word[word.size() - 1 - i]))
                throw InvalidWording("W(inv e) is not the reversed word");
        if (t.is_half_loop(e) &&
            (word.size() != 1 || !base.is_half_loop(word[0])))
            throw InvalidWording("half-loop edge must carry one half-loop letter");
    }
    for (VertexId v = 0; v < t.vertex_count(); ++v) {
        const auto& out = t.out_edges(v);
        if (out.empty()) throw InvalidWording("wording vertex with no incident edge");
        VertexId first = base.tail(w.words[out[0]][0]);
        for (EdgeId e : out)
            if (base.tail(w.words[e][0]) != first)
                throw InvalidWording("words at a common tail start at different base vertices");
    }
}

inline EdgeLengths wording_lengths(const Wording& w) {
    std::vector<EdgeId> reps = w.t.orientation();
    EdgeLengths k(reps.size());
    for (size_t i = 0; i < reps.size(); ++i) k[i] = static_cast<int>(w.words[reps[i]].size());
    return k;
}

/// Realization VLG_{/B}(T, W): the variable-length graph of the word lengths
/// with the i-th edge of each beaded path over the i-th letter.
inline GraphMorphism realize_wording(const Wording& w, const Graph& base) {
    validate_wording(w, base);
    const Graph& t = w.t;
    EdgeLengths lengths = wording_lengths(w);
    Graph s = vlg(t, lengths);
    std::vector<VertexId> vmap(s.vertex_count(), -1);
    std::vector<EdgeId> emap(s.dir_edge_count(), -1);
    for (VertexId v = 0; v < t.vertex_count(); ++v)
        vmap[v] = base.tail(w.words[t.out_edges(v)[0]][0]);
    // vlg lays orbits out in orientation order: recover each beaded path and
    // label it with its word
    std::vector<EdgeId> reps = t.orientation();
    int next_edge = 0, next_bead = t.vertex_count();
    for (size_t i = 0; i < reps.size(); ++i) {
        EdgeId e = reps[i];
        const auto& word = w.words[e];
        if (t.is_half_loop(e)) {
            emap[next_edge] = word[0];
            ++next_edge;
            continue;
        }
        for (int step = 0; step < lengths[i]; ++step) {
            emap[next_edge] = word[step];
            emap[next_edge + 1] = base.inv(word[step]);
            if (step + 1 < lengths[i]) {
                vmap[next_bead] = base.head(word[step]);
                ++next_bead;
            }
            next_edge += 2;
        }
    }
    GraphMorphism proj{std::move(s), base, std::move(vmap), std::move(emap)};
    if (!is_morphism(proj)) throw InvalidWording("realization is not a morphism");
    return proj;
}

/// Wording induced on T = S/V' by a B-graph structure on S.
inline Wording induced_wording(const GraphMorphism& s_proj, const Suppression& sup) {
    Wording w;
    w.t = sup.graph;
    w.words.resize(sup.graph.dir_edge_count());
    for (EdgeId te = 0; te < sup.graph.dir_edge_count(); ++te)
        for (EdgeId se : sup.paths[te]) w.words[te].push_back(s_proj.edge_map[se]);
    return w;
}

/// Least-squares fit of samples against { k^p mu_i^k : p <= degree }.
struct PolyexpFit {
    std::vector<std::complex<double>> bases;
    std::vector<std::vector<std::complex<double>>> polynomials;  // per base, coeffs of k^p
    double residual = 0.0;  // max |f(k) - fit(k)| over the window
    double growth = 0.0;    // max over window of |residual_k|^{1/k}
};

inline PolyexpFit fit_polyexponential(const std::vector<double>& samples, int k_start,
                                      const std::vector<std::complex<double>>& candidate_bases,
                                      int degree, double condition_threshold = 1e12) {
    const int n = static_cast<int>(samples.size());
    const int nb = static_cast<int>(candidate_bases.size());
    const int cols = nb * (degree + 1);
    if (n < cols + 4) throw DomainError("sample window too short for the requested fit");
    Eigen::MatrixXcd design(n, cols);
    for (int row = 0; row < n; ++row) {
        double k = static_cast<double>(k_start + row);
        for (int i = 0; i < nb; ++i) {
            std::complex<double> powk = std::pow(candidate_bases[i], k);
            double kp = 1.0;
            for (int p = 0; p <= degree; ++p) {
                design(row, i * (degree + 1) + p) = powk * kp;
                kp *= k;
            }
        }
    }
    Eigen::VectorXcd rhs(n);
    for (int row = 0; row < n; ++row) rhs(row) = samples[row];
    // normalize columns so conditioning measures collinearity, not magnitude
    Eigen::VectorXd scale(cols);
    for (int j = 0; j < cols; ++j) {
        scale(j) = design.col(j).norm();
        if (scale(j) > 0) design.col(j) /= scale(j);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double cond = svd.singularValues()(0) /
                  std::max(svd.singularValues()(svd.singularValues().size() - 1), 1e-300);
    if (cond > condition_threshold) throw IllConditioned();
    Eigen::VectorXcd coef = svd.solve(rhs);
    Eigen::VectorXcd pred = design * coef;
    for (int j = 0; j < cols; ++j)
        if (scale(j) > 0) coef(j) /= scale(j);

    PolyexpFit fit;
    fit.bases = candidate_bases;
    fit.polynomials.assign(nb, std::vector<std::complex<double>>(degree + 1));
    for (int i = 0; i < nb; ++i)
        for (int p = 0; p <= degree; ++p) fit.polynomials[i][p] = coef(i * (degree + 1) + p);
    for (int row = 0; row < n; ++row) {
        double r = std::abs(pred(row) - rhs(row));
        fit.residual = std::max(fit.residual, r);
        // growth classification reads the tail of the window, where
        // |r_k|^{1/k} reflects the rate rather than transient absolute size
        if (row >= n / 2 && r > 1e-12) {
            double k = static_cast<double>(k_start + row);
            fit.growth = std::max(fit.growth, std::pow(r, 1.0 / k));
        }
    }
    return fit;
}

/// Minimal length vector with mu1(VLG(t, xi)) < nu.
struct Certificate {
    Graph t;
    EdgeLengths xi;
};

namespace detail {

inline void for_each_length_in_box(const Graph& t, int bound,
                                   const std::function<void(const EdgeLengths&)>& fn) {
    std::vector<EdgeId> reps = t.orientation();
    EdgeLengths k(reps.size(), 1);
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == reps.size()) {
            fn(k);
            return;
        }
        if (t.is_half_loop(reps[i])) {
            k[i] = 1;
            rec(i + 1);
            return;
        }
        for (int len = 1; len <= bound; ++len) {
            k[i] = len;
            rec(i + 1);
        }
        k[i] = 1;
    };
    rec(0);
}

}  // namespace detail

/// Minimal elements, in the coordinatewise order, of
/// { k in [1..bound]^{E_T} : mu1(VLG(t,k)) < nu } (half-loop coordinates are
/// pinned to 1). Completeness holds within the box only. The lex scan visits
/// every point coordinatewise below k before k, so a point that no current
/// certificate dominates and that lies in the set is minimal; dominated
/// points are skipped without an eigensolve (the set is an upper set).
inline std::vector<Certificate> certificates(const Graph& t, double nu, int search_bound) {
    if (search_bound < 1 || search_bound > 12) throw BoundTooLarge();
    if (!is_connected(t) || !is_pruned(t))
        throw DomainError("certificates require a pruned connected graph");
    double box_size = 1;
    for (EdgeId e : t.orientation())
        if (!t.is_half_loop(e)) box_size *= search_bound;
    if (box_size > 5e6) throw BoundTooLarge("length box too large");

    std::vector<Certificate> out;
    detail::for_each_length_in_box(t, search_bound, [&](const EdgeLengths& k) {
        for (const Certificate& c : out) {
            bool le = true;
            for (size_t i = 0; i < k.size(); ++i)
                if (c.xi[i] > k[i]) le = false;
            if (le) return;
        }
        if (mu1(vlg(t, k)) < nu - kMu1Tolerance) out.push_back({t, k});
    });
    return out;
}

/// Membership in the box via a certificate list (for the upper-set check).
inline bool certified_by(const std::vector<Certificate>& certs, const EdgeLengths& k) {
    for (const Certificate& c : certs) {
        if (c.xi.size() != k.size()) continue;
        bool le = true;
        for (size_t i = 0; i < k.size(); ++i)
            if (c.xi[i] > k[i]) le = false;
        if (le) return true;
    }
    return false;
}

/// cert_{<nu,<r}(G,k): the number of SNBC walks of length k whose visited
/// subgraph S has mu1(S) < nu and ord(S) < r. Always between 0 and
/// Trace(H^k); equals snbc_{<r}(G,k) on tangle-free graphs.
inline long long certified_trace(const Graph& g, int k, double nu, int r,
                                 long long budget = kDefaultWalkBudget) {
    if (r <= 0) return 0;
    long long count = 0;
    // many walks share a visited subgraph: cache (mu1 < nu, ord) by the
    // sorted orbit set of the traversed edges
    std::map<std::vector<EdgeId>, bool> cache;
    std::vector<int> orbit = g.orbit_index();
    for_each_snbc_edges(
        g, k,
        [&](const std::vector<EdgeId>& edges) {
            std::vector<EdgeId> orbits;
            orbits.reserve(edges.size());
            for (EdgeId e : edges) orbits.push_back(orbit[e]);
            std::sort(orbits.begin(), orbits.end());
            orbits.erase(std::unique(orbits.begin(), orbits.end()), orbits.end());
            auto it = cache.find(orbits);
            if (it == cache.end()) {
                Walk w = walk_from_edges(g, g.tail(edges[0]), edges);
                Graph s = visited_subgraph(g, w).graph;
                bool ok = order(s) < r && mu1(s) < nu - kMu1Tolerance;
                it = cache.emplace(std::move(orbits), ok).first;
            }
            if (it->second) ++count;
        },
        budget);
    return count;
}

}  // namespace nbcover
