#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dips/linalg.hpp"
#include "dips/rng.hpp"
#include "dips/tensor4.hpp"

namespace dips {

enum class Method { exact, heuristic_interval, closed_form };

std::string method_name(Method m);

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
    Method method = Method::exact;
};

struct TaggedValue {
    double value = 0.0;
    Method method = Method::exact;
};

// Everything a tail bound consumes, with provenance per field. Bounds always
// take the upper end of interval-valued constants. B and V describe the
// degenerate part of the decomposition; frob, opnorm and nu are the
// quadratic-form constants and exist only for product tensors (for dense
// input, frob falls back to the Frobenius norm of the degenerate part and
// the other two stay empty).
struct BoundConstants {
    TaggedValue frob;                  // ||C||_F, or ||d_w||_F for dense input
    std::optional<TaggedValue> opnorm; // ||C||_op
    Interval b;                        // max over sigma of ||[d(i,j,sigma(i),sigma(j))]||_op
    TaggedValue v;                     // variance proxy of the degenerate part
    std::optional<TaggedValue> nu;     // Bennett parameter of (C, A)
};

BoundConstants collect_bound_constants(const Tensor4& t, std::size_t exact_cap = 7);

struct DecompositionConstants {
    double v_a = 0.0;
    double b_a = 0.0;
    double v_d = 0.0;
    Interval b_d;
};

// Exact max over all sigma for n <= exact_cap. Above the cap: lower end from
// transposition steepest-ascent local search (`restarts` seeded random
// starts, merged by max), upper end the certified bound ||M||_F with
// M(i,j) = max_{k,l} |d(i,j,k,l)|.
Interval permuted_opnorm_B(const Tensor4& t, std::size_t exact_cap = 7,
                           std::size_t restarts = 20, RngSeed seed = RngSeed{0x0b0d5u, 0},
                           unsigned threads = 0);

// Forces the heuristic interval regardless of size (used to compare the
// local search against the exhaustive answer in tests).
Interval permuted_opnorm_B_heuristic(const Tensor4& t, std::size_t restarts = 20,
                                     RngSeed seed = RngSeed{0x0b0d5u, 0}, unsigned threads = 0);

// Just the certified upper end ||[max_{k,l}|d(i,j,k,l)|]||_F, without the
// local-search lower bound. Dominance checks consume only this.
double certified_b_upper(const Tensor4& t);

// V = (1/N) sum_{i,k} xi(i,k)^2 + (1/N^2) sum d^2 where xi is the double
// centering of d(i,i,k,k) (with the "+" grand-mean term, so sum xi = 0).
double variance_V(const Tensor4& d);

// xi(i,k) table used by variance_V, exposed for the verifier.
Matrix xi_matrix(const Tensor4& d);

// nu = max over i,j and injections of |sum of floor(N/2) products| between
// row i of C and row j of A. Greedy extreme pairing; validated entry by
// entry against brute force over all (sigma, sigma~) when N <= exact_cap.
double bennett_nu(const Matrix& c, const Matrix& a, std::size_t exact_cap = 5);

// Brute-force reference for nu (all sigma pairs); n <= 6 only.
double bennett_nu_brute_force(const Matrix& c, const Matrix& a);

DecompositionConstants decomposition_constants(const Tensor4& w, std::size_t exact_cap = 7);

// The four constants displayed for the graph correlation statistic,
// computed from the edge sets exactly as printed (degrees are out-degrees
// over ordered pairs). Edges are 0-based here.
DecompositionConstants graph_constants(const std::vector<std::pair<int, int>>& ex,
                                   const std::vector<std::pair<int, int>>& ey, std::size_t n,
                                   std::size_t exact_cap = 7);

struct RegressionConstants {
    Matrix q;                      // Q = H diag(e)
    std::vector<double> hat_diag;  // h_ii
    double frob2 = 0.0;            // ||Q||_F^2
    Interval opnorm;               // ||Q||_op (power iteration)
    // denominator v + b*t of the sharp bound: p1 p0 ||Q||_F^2 and
    // max{p1^2, p0^2} ||Q||_op
    double v_exact = 0.0;
    double b_exact = 0.0;
    // the relaxed denominator: p1 p0 sum e_i^2 max h_ii and
    // max{p1^2, p0^2} max|e_i|
    double v_relaxed = 0.0;
    double b_relaxed = 0.0;
};

// Builds the hat matrix H = X (X^T X)^{-1} X^T and Q = H diag(e), checks X is
// column-centered and Q doubly centered, and returns the bound constants for
// the treated proportion p1.
RegressionConstants regression_constants(const Matrix& x, const std::vector<double>& e,
                                         double p1);

}  // namespace dips
