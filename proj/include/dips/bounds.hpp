#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dips/constants.hpp"
#include "dips/linalg.hpp"

namespace dips {

// The universal K of the non-explicit bounds. The source tag records whether
// a user chose it or an explicit-constant form fixed it; defaults are
// illustrative only and never feed pass/fail verification.
struct KParameter {
    double k = 1.0;
    std::string source = "user";  // "user" | "explicit-tail" | "explicit-bennett"

    static KParameter user(double k);
};

struct GridSpec {
    double t_min = 0.0;
    double t_max = 1.0;
    std::size_t points = 50;
};

// ascending grid, inclusive of both endpoints
std::vector<double> make_grid(const GridSpec& spec);
GridSpec parse_grid(const std::string& text);  // "tmin:tmax:points"

struct TailCurve {
    std::string label;
    std::vector<double> grid;
    std::vector<double> bound;  // clamped to [0, 1]
    std::vector<double> raw;    // unclamped (two-term bounds can exceed 1)
    std::vector<std::pair<std::string, double>> constants;
    bool clamped_anywhere = false;
};

TailCurve make_tail_curve(std::string label, const std::vector<double>& grid,
                          const std::function<double(double)>& raw_bound,
                          std::vector<std::pair<std::string, double>> constants = {});

// exp(-t^2 / (400000 V + 10800 B t)): the explicit-constant tail bound for a
// degenerate DIPS with variance proxy V and permuted operator norm B.
double bound_degenerate_tail(double v, double b_upper, double t);

// exp(100000 V lambda^2 / (1 - 5400 B lambda)) on lambda in [0, 1/(5400B)].
double bound_degenerate_mgf(double v, double b_upper, double lambda);

struct BoundValue {
    double value = 1.0;
    bool degenerate = false;  // zero denominators: statistic is a.s. constant
};

// Hanson-Wright forms. C must be doubly centered (checked at 1e-9). The
// general variant consumes an upper bound on max_sigma ||C o A^sigma||_op
// and always uses the upper end of the interval.
BoundValue bound_hanson_wright_general(const Matrix& c, const Interval& max_hadamard,
                                       const KParameter& k, double t);
BoundValue bound_hanson_wright_psd(const Matrix& c, const KParameter& k, double t);

// Bennett forms; C doubly centered with zero diagonal. The explicit form
// carries the proof constants 120 and 540; the other takes K.
double bound_bennett_explicit(const Matrix& c, const Matrix& a, double nu, double t);
double bound_bennett_k(const Matrix& c, const Matrix& a, double nu, const KParameter& k,
                       double t);

struct TwoTermBound {
    double raw = 2.0;
    double value = 1.0;  // clamped
    bool clamped = false;
};

TwoTermBound bound_two_term(const DecompositionConstants& consts, const KParameter& k, double t);

// Displayed bounds of the example statistics, evaluated verbatim.
TwoTermBound bound_mww(std::size_t m, std::size_t n, const KParameter& k, double t);
double bound_pearson(std::size_t n, double max_x_centered, double max_y_centered, double s_x,
                     double s_y, const KParameter& k, double t);
TwoTermBound bound_kendall(std::size_t n, const KParameter& k, double t);
double bound_spearman(std::size_t n, const KParameter& k, double t);
TwoTermBound bound_chatterjee(std::size_t n, const KParameter& k, double t);
TwoTermBound bound_graph(const DecompositionConstants& consts, const KParameter& k, double t);

}  // namespace dips
