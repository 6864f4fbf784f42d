#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace nbcover {

using BigInt = boost::multiprecision::cpp_int;
/// Integer polynomial, coefficients ascending: p[k] is the coefficient of u^k.
using IntPoly = std::vector<BigInt>;

inline IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
    if (a.empty() || b.empty()) return {};
    IntPoly c(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

inline IntPoly poly_pow(IntPoly base, int k) {
    IntPoly r{1};
    while (k > 0) {
        if (k & 1) r = poly_mul(r, base);
        base = poly_mul(base, base);
        k >>= 1;
    }
    return r;
}

/// Characteristic polynomial det(uI - A) of an integer matrix, by the
/// division-free Berkowitz algorithm. Exact; O(n^4) big-integer operations.
inline IntPoly charpoly(const std::vector<std::vector<BigInt>>& A) {
    const int n = static_cast<int>(A.size());
    if (n == 0) return {1};
    // p holds coefficients in descending powers: p[0] u^i + ... + p[i]
    std::vector<BigInt> p{1, -A[0][0]};
    for (int i = 1; i < n; ++i) {
        // Toeplitz column t for the i+1 leading principal submatrix:
        // t = [1, -A[i][i], -(R C), -(R M C), ..., -(R M^{i-2} C)]
        std::vector<BigInt> t(i + 2);
        t[0] = 1;
        t[1] = -A[i][i];
        std::vector<BigInt> y(i);
        for (int r = 0; r < i; ++r) y[r] = A[r][i];  // y = C
        for (int k = 2; k <= i + 1; ++k) {
            BigInt dot = 0;
            for (int c = 0; c < i; ++c) dot += A[i][c] * y[c];
            t[k] = -dot;
            if (k <= i) {
                std::vector<BigInt> y2(i);
                for (int r = 0; r < i; ++r) {
                    BigInt s = 0;
                    for (int c = 0; c < i; ++c) s += A[r][c] * y[c];
                    y2[r] = s;
                }
                y.swap(y2);
            }
        }
        std::vector<BigInt> q(i + 2);
        for (int j = 0; j <= i + 1; ++j) {
            BigInt s = 0;
            for (int k = 0; k <= j && k <= i + 1; ++k) {
                int idx = j - k;
                if (idx < static_cast<int>(p.size())) s += t[k] * p[idx];
            }
            q[j] = s;
        }
        p.swap(q);
    }
    IntPoly ascending(n + 1);
    for (int j = 0; j <= n; ++j) ascending[j] = p[n - j];
    return ascending;
}

}  // namespace nbcover
