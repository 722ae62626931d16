#pragma once

#include <cstddef>

#include "dips/linalg.hpp"
#include "dips/rng.hpp"
#include "dips/tensor4.hpp"

namespace dips {

double uniform_in(Rng& rng, double lo, double hi);

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double lo = -1.0,
                     double hi = 1.0);

Tensor4 random_dense_tensor(std::size_t n, Rng& rng, double lo = -1.0, double hi = 1.0);

// Degenerate part of a random dense tensor, rescaled so max |entry| = 1.
Tensor4 random_degenerate_tensor(std::size_t n, Rng& rng);

// Rectangular tensor with the two-slot degeneracy d(.,j,.,l) = d(i,.,k,.) = 0,
// rescaled to max |entry| = 1.
Tensor4 random_rectangular_degenerate(std::size_t n, std::size_t m, Rng& rng);

// Doubly centered matrix with exactly zero diagonal (closed-form correction,
// n >= 3).
Matrix random_doubly_centered_zero_diag(std::size_t n, Rng& rng);

// Gram matrix scaled so the largest diagonal entry is 1.
Matrix random_psd_unit_diag(std::size_t n, Rng& rng);

}  // namespace dips
