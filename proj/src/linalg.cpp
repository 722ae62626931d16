#include "dips/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dips/rng.hpp"

namespace dips {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("multiply: shape mismatch");
    Matrix c(a.rows, b.cols, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

double frobenius_norm(const Matrix& m) {
    KahanSum s;
    for (double v : m.data) s.add(v * v);
    return std::sqrt(s.value());
}

double max_abs(const Matrix& m) {
    double best = 0.0;
    for (double v : m.data) best = std::max(best, std::abs(v));
    return best;
}

Matrix doubly_center(const Matrix& m) {
    const std::size_t r = m.rows, c = m.cols;
    std::vector<double> rmean(r, 0.0), cmean(c, 0.0);
    KahanSum grand;
    for (std::size_t i = 0; i < r; ++i) {
        KahanSum s;
        for (std::size_t j = 0; j < c; ++j) s.add(m(i, j));
        rmean[i] = s.value() / static_cast<double>(c);
        grand.add(s.value());
    }
    for (std::size_t j = 0; j < c; ++j) {
        KahanSum s;
        for (std::size_t i = 0; i < r; ++i) s.add(m(i, j));
        cmean[j] = s.value() / static_cast<double>(r);
    }
    const double g = grand.value() / static_cast<double>(r * c);
    Matrix out(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) out(i, j) = m(i, j) - rmean[i] - cmean[j] + g;
    return out;
}

bool is_doubly_centered(const Matrix& m, double tol) {
    const double scale = std::max(1.0, max_abs(m));
    for (std::size_t i = 0; i < m.rows; ++i) {
        KahanSum s;
        for (std::size_t j = 0; j < m.cols; ++j) s.add(m(i, j));
        if (std::abs(s.value()) > tol * scale * static_cast<double>(m.cols)) return false;
    }
    for (std::size_t j = 0; j < m.cols; ++j) {
        KahanSum s;
        for (std::size_t i = 0; i < m.rows; ++i) s.add(m(i, j));
        if (std::abs(s.value()) > tol * scale * static_cast<double>(m.rows)) return false;
    }
    return true;
}

namespace {

// y = M^T (M x)
void gram_apply(const Matrix& m, const std::vector<double>& x, std::vector<double>& mx,
                std::vector<double>& y) {
    for (std::size_t i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
        mx[i] = s;
    }
    for (std::size_t j = 0; j < m.cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.rows; ++i) s += m(i, j) * mx[i];
        y[j] = s;
    }
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

OpNormResult operator_norm_detail(const Matrix& m, double tol, std::size_t max_iter) {
    if (tol <= 0.0) throw std::invalid_argument("operator_norm: tol must be positive");
    for (double v : m.data)
        if (!std::isfinite(v)) throw std::invalid_argument("operator_norm: non-finite entry");
    OpNormResult res;
    if (m.rows == 0 || m.cols == 0) return res;
    const double fro = frobenius_norm(m);
    if (fro == 0.0) return res;

    std::vector<double> x(m.cols, 1.0 / std::sqrt(static_cast<double>(m.cols)));
    std::vector<double> mx(m.rows), y(m.cols);
    bool restarted = false;
    double lambda = 0.0;
    std::size_t settled = 0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        gram_apply(m, x, mx, y);
        const double ny = norm2(y);
        if (ny <= fro * fro * 1e-300 || !std::isfinite(ny)) {
            if (restarted) {
                res.value = std::sqrt(std::max(0.0, lambda));
                res.converged = false;
                res.iterations = it + 1;
                return res;
            }
            // all-ones start can sit in the null space; restart once from a
            // seeded random direction
            Rng rng(RngSeed{0xD1B54A32D192ED03ull, 0});
            for (auto& v : x) v = rng.normal();
            const double nx = norm2(x);
            for (auto& v : x) v /= nx;
            restarted = true;
            lambda = 0.0;
            settled = 0;
            continue;
        }
        // Rayleigh quotient of M^T M at unit x equals x . y
        double rq = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) rq += x[j] * y[j];
        for (std::size_t j = 0; j < m.cols; ++j) x[j] = y[j] / ny;
        const double diff = std::abs(rq - lambda);
        lambda = rq;
        if (diff <= tol * std::max(std::abs(rq), 1e-300)) {
            if (++settled >= 3) {
                res.value = std::sqrt(std::max(0.0, lambda));
                res.iterations = it + 1;
                return res;
            }
        } else {
            settled = 0;
        }
    }
    res.value = std::sqrt(std::max(0.0, lambda));
    res.converged = false;
    res.iterations = max_iter;
    return res;
}

double operator_norm(const Matrix& m, double tol) {
    return operator_norm_detail(m, tol).value;
}

std::vector<double> solve_spd(Matrix a, std::vector<double> b) {
    if (!a.square() || a.rows != b.size())
        throw std::invalid_argument("solve_spd: shape mismatch");
    const std::size_t n = a.rows;
    double scale = max_abs(a);
    if (scale == 0.0) throw std::invalid_argument("solve_spd: singular matrix");
    // in-place Cholesky a = L L^T
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (d <= scale * 1e-12)
            throw std::invalid_argument("solve_spd: matrix not positive definite");
        const double l = std::sqrt(d);
        a(j, j) = l;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s / l;
        }
    }
    // forward then backward substitution
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a(i, k) * b[k];
        b[i] = s / a(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= a(k, ii) * b[k];
        b[ii] = s / a(ii, ii);
    }
    return b;
}

}  // namespace dips
