#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace nbcover {

// splitmix64; used to derive independent sub-stream seeds from (seed, tag...)
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a) {
    return mix64(seed ^ mix64(a));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix64(derive_seed(seed, a) ^ mix64(b + 0x6a09e667f3bcc909ull));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
    return mix64(derive_seed(seed, a, b) ^ mix64(c + 0xbb67ae8584caa73bull));
}

// Deterministic RNG. Bounded draws are implemented here rather than with
// std::uniform_int_distribution, whose output is implementation-defined;
// results must be reproducible from the seed alone.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // uniform on {0, 1, ..., bound-1}, bound >= 1
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod bound
        for (;;) {
            std::uint64_t r = gen_();
            if (r >= threshold) return r % bound;
        }
    }

    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // uniform permutation of [n] (Fisher-Yates)
    std::vector<int> permutation(int n) {
        std::vector<int> p(n);
        for (int i = 0; i < n; ++i) p[i] = i;
        for (int i = n - 1; i > 0; --i) {
            int j = static_cast<int>(below(static_cast<std::uint64_t>(i) + 1));
            std::swap(p[i], p[j]);
        }
        return p;
    }

    // permutation whose cycle structure is a single n-cycle, uniform over the
    // (n-1)! such permutations: a random ordering read as a cyclic order
    std::vector<int> full_cycle(int n) {
        std::vector<int> ord = permutation(n);
        std::vector<int> p(n);
        for (int i = 0; i < n; ++i) p[ord[i]] = ord[(i + 1) % n];
        return p;
    }

    // uniform perfect matching on [n], n even: fixed-point-free involution
    std::vector<int> perfect_matching(int n) {
        std::vector<int> ord = permutation(n);
        std::vector<int> p(n);
        for (int i = 0; i < n; i += 2) {
            p[ord[i]] = ord[i + 1];
            p[ord[i + 1]] = ord[i];
        }
        return p;
    }

    // involution on [n] with exactly one fixed point, n odd: the fixed point is
    // uniform, the rest a uniform perfect matching
    std::vector<int> near_perfect_matching(int n) {
        int fixed = static_cast<int>(below(static_cast<std::uint64_t>(n)));
        std::vector<int> rest;
        rest.reserve(n - 1);
        for (int i = 0; i < n; ++i)
            if (i != fixed) rest.push_back(i);
        for (int i = n - 2; i > 0; --i) {
            int j = static_cast<int>(below(static_cast<std::uint64_t>(i) + 1));
            std::swap(rest[i], rest[j]);
        }
        std::vector<int> p(n);
        p[fixed] = fixed;
        for (int i = 0; i + 1 < n; i += 2) {
            p[rest[i]] = rest[i + 1];
            p[rest[i + 1]] = rest[i];
        }
        return p;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace nbcover
