#pragma once

// Test-only oracles, deliberately independent of the library's own
// implementations: a cyclic Jacobi eigensolver (vs. power iteration),
// a recursive permutation generator (vs. next_permutation), and the
// classical textbook formulas for the example statistics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dips/generate.hpp"
#include "dips/linalg.hpp"
#include "dips/permutation.hpp"
#include "dips/statistics.hpp"
#include "dips/tensor4.hpp"

namespace oracle {

// eigenvalues of a symmetric matrix by cyclic Jacobi rotations
inline std::vector<double> jacobi_eigenvalues(dips::Matrix a) {
    const std::size_t n = a.rows;
    double scale = 0.0;
    for (double v : a.data) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return std::vector<double>(n, 0.0);
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off = std::max(off, std::abs(a(i, j)));
        if (off <= 1e-15 * scale) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) <= 1e-18 * scale) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    return eig;
}

inline double opnorm(const dips::Matrix& m) {
    dips::Matrix gram = dips::multiply(dips::transpose(m), m);
    double top = 0.0;
    for (double e : jacobi_eigenvalues(gram)) top = std::max(top, e);
    return std::sqrt(std::max(0.0, top));
}

// permutations by explicit recursion (used against the lexicographic stream)
template <class Fn>
void permutations_recursive(std::size_t n, Fn&& fn) {
    std::vector<int> cur;
    std::vector<bool> used(n, false);
    auto go = [&](auto&& self) -> void {
        if (cur.size() == n) {
            fn(cur);
            return;
        }
        for (std::size_t v = 0; v < n; ++v) {
            if (used[v]) continue;
            used[v] = true;
            cur.push_back(static_cast<int>(v));
            self(self);
            cur.pop_back();
            used[v] = false;
        }
    };
    go(go);
}

// mean over one slot by plain nested loops (vs. the library's table machinery)
inline double slot4_mean(const dips::Tensor4& t, std::size_t i, std::size_t j, std::size_t k) {
    double s = 0.0;
    for (std::size_t l = 0; l < t.m(); ++l) s += t(i, j, k, l);
    return s / static_cast<double>(t.m());
}

inline double kendall_direct(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double concordant = 0.0, discordant = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double prod = (x[i] - x[j]) * (y[i] - y[j]);
            if (prod > 0.0) concordant += 1.0;
            else if (prod < 0.0) discordant += 1.0;
        }
    return 2.0 * (concordant - discordant) / (static_cast<double>(n) * (n - 1.0));
}

inline double spearman_direct(const std::vector<double>& x, const std::vector<double>& y) {
    const std::vector<double> rx = dips::ranks_of(x);
    const std::vector<double> ry = dips::ranks_of(y);
    const double n = static_cast<double>(x.size());
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

inline double pearson_direct(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

inline std::vector<double> apply_permutation(const std::vector<double>& v,
                                             const dips::Permutation& p) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[static_cast<std::size_t>(p.map[i])];
    return out;
}

inline bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace oracle
