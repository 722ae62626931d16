#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace dips {

// Neumaier-compensated accumulator. Partial averages run over up to N^4
// terms, where naive accumulation loses digits the degeneracy checks need.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    bool square() const { return rows == cols; }

    static Matrix identity(std::size_t n);
};

Matrix transpose(const Matrix& m);
Matrix multiply(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);

// Row/column sums and the exact double-centering projection
// m - rowmean - colmean + grandmean.
Matrix doubly_center(const Matrix& m);
bool is_doubly_centered(const Matrix& m, double tol);

struct OpNormResult {
    double value = 0.0;
    bool converged = true;
    std::size_t iterations = 0;
};

// Largest singular value by power iteration on M^T M. Deterministic all-ones
// start; one seeded random restart when the iterate collapses (all-ones lies
// in the null space of doubly centered matrices). Non-convergence after
// max_iter is reported through the flag, returning the best iterate.
OpNormResult operator_norm_detail(const Matrix& m, double tol = 1e-10,
                                  std::size_t max_iter = 10000);
double operator_norm(const Matrix& m, double tol = 1e-10);

// Solves the SPD system a x = b by Cholesky. Throws std::invalid_argument if
// a is not positive definite (within a pivot tolerance).
std::vector<double> solve_spd(Matrix a, std::vector<double> b);

}  // namespace dips
