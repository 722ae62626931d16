#include "dips/generate.hpp"

#include <cmath>
#include <stdexcept>

namespace dips {

double uniform_in(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.unit(); }

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double lo, double hi) {
    Matrix m(rows, cols);
    for (auto& v : m.data) v = uniform_in(rng, lo, hi);
    return m;
}

Tensor4 random_dense_tensor(std::size_t n, Rng& rng, double lo, double hi) {
    std::vector<double> v(n * n * n * n);
    for (auto& x : v) x = uniform_in(rng, lo, hi);
    return Tensor4::dense(n, std::move(v));
}

Tensor4 random_degenerate_tensor(std::size_t n, Rng& rng) {
    const Decomposition dec = hoeffding_decompose(random_dense_tensor(n, rng));
    std::vector<double> v = dec.d.values();
    double big = 0.0;
    for (double x : v) big = std::max(big, std::abs(x));
    if (big > 0.0)
        for (auto& x : v) x /= big;
    return Tensor4::dense(n, std::move(v));
}

Tensor4 random_rectangular_degenerate(std::size_t n, std::size_t m, Rng& rng) {
    std::vector<double> v(n * m * n * m);
    for (auto& x : v) x = uniform_in(rng, -1.0, 1.0);
    auto at = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) -> double& {
        return v[((i * m + j) * n + k) * m + l];
    };
    // means over slots {1,3} and {2,4}, then the signed projection
    Matrix m13(m, m);
    Matrix m24(n, n);
    KahanSum grand;
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = 0; l < m; ++l) {
            KahanSum s;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k) s.add(at(i, j, k, l));
            m13(j, l) = s.value() / static_cast<double>(n * n);
            grand.add(s.value());
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            KahanSum s;
            for (std::size_t j = 0; j < m; ++j)
                for (std::size_t l = 0; l < m; ++l) s.add(at(i, j, k, l));
            m24(i, k) = s.value() / static_cast<double>(m * m);
        }
    const double g = grand.value() / static_cast<double>(n * m * n * m);
    double big = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < m; ++l) {
                    double& x = at(i, j, k, l);
                    x = x - m13(j, l) - m24(i, k) + g;
                    big = std::max(big, std::abs(x));
                }
    if (big > 0.0)
        for (auto& x : v) x /= big;
    return Tensor4::dense(n, m, std::move(v));
}

Matrix random_doubly_centered_zero_diag(std::size_t n, Rng& rng) {
    if (n < 3)
        throw std::invalid_argument("random_doubly_centered_zero_diag: need n >= 3");
    Matrix p = doubly_center(random_matrix(n, n, rng));
    // subtract the doubly centered matrix with matching diagonal:
    // M = diag(x) - (x 1^T + 1 x^T)/n + sum(x) J / n^2 with
    // x_i (1 - 2/n) + sum(x)/n^2 = p_ii
    const double nn = static_cast<double>(n);
    double delta_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) delta_sum += p(i, i);
    const double x_sum = delta_sum * nn / (nn - 1.0);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = nn * (p(i, i) - x_sum / (nn * nn)) / (nn - 2.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double mij = -(x[i] + x[j]) / nn + x_sum / (nn * nn);
            if (i == j) mij += x[i];
            p(i, j) -= mij;
        }
    for (std::size_t i = 0; i < n; ++i) p(i, i) = 0.0;
    return p;
}

Matrix random_psd_unit_diag(std::size_t n, Rng& rng) {
    const Matrix g = random_matrix(n, n, rng);
    Matrix a = multiply(g, transpose(g));
    double dmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) dmax = std::max(dmax, a(i, i));
    if (dmax == 0.0) return Matrix::identity(n);
    for (auto& v : a.data) v /= dmax;
    return a;
}

}  // namespace dips
