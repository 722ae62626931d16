#include "dips/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dips {

KParameter KParameter::user(double k) {
    if (!(k > 0.0)) throw std::invalid_argument("KParameter: K must be positive");
    return KParameter{k, "user"};
}

std::vector<double> make_grid(const GridSpec& spec) {
    if (spec.points < 1) throw std::invalid_argument("grid: needs at least one point");
    if (spec.t_min < 0.0 || spec.t_max < spec.t_min)
        throw std::invalid_argument("grid: need 0 <= t_min <= t_max");
    std::vector<double> g(spec.points);
    if (spec.points == 1) {
        g[0] = spec.t_min;
        return g;
    }
    const double step = (spec.t_max - spec.t_min) / static_cast<double>(spec.points - 1);
    for (std::size_t i = 0; i < spec.points; ++i)
        g[i] = spec.t_min + step * static_cast<double>(i);
    g.back() = spec.t_max;
    return g;
}

GridSpec parse_grid(const std::string& text) {
    GridSpec spec;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    long long pts = 0;
    if (!(in >> spec.t_min >> c1 >> spec.t_max >> c2 >> pts) || c1 != ':' || c2 != ':' ||
        pts < 1 || !in.eof())
        throw std::invalid_argument("grid: expected tmin:tmax:points, got '" + text + "'");
    spec.points = static_cast<std::size_t>(pts);
    return spec;
}

TailCurve make_tail_curve(std::string label, const std::vector<double>& grid,
                          const std::function<double(double)>& raw_bound,
                          std::vector<std::pair<std::string, double>> constants) {
    if (grid.empty()) throw std::invalid_argument("tail curve: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0) throw std::invalid_argument("tail curve: grid must be nonnegative");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw std::invalid_argument("tail curve: grid must be strictly ascending");
    }
    TailCurve curve;
    curve.label = std::move(label);
    curve.grid = grid;
    curve.constants = std::move(constants);
    curve.raw.reserve(grid.size());
    curve.bound.reserve(grid.size());
    for (double t : grid) {
        const double raw = raw_bound(t);
        curve.raw.push_back(raw);
        const double clamped = std::min(1.0, raw);
        if (clamped != raw) curve.clamped_anywhere = true;
        curve.bound.push_back(clamped);
    }
    return curve;
}

namespace {

// exp(-K t^2 / (v + b t)) with the degenerate-denominator convention:
// a zero denominator means the contribution is a.s. constant, so the term
// is 1 at t = 0 and 0 beyond.
double exp_term(double k, double v, double b, double t) {
    if (t == 0.0) return 1.0;
    const double denom = v + b * t;
    if (denom <= 0.0) return 0.0;
    return std::exp(-k * t * t / denom);
}

void require_nonneg_t(double t) {
    if (t < 0.0 || !std::isfinite(t)) throw std::invalid_argument("bound: t must be >= 0");
}

TwoTermBound two_term(double term1, double term2) {
    TwoTermBound out;
    out.raw = term1 + term2;
    out.value = std::min(1.0, out.raw);
    out.clamped = out.value != out.raw;
    return out;
}

}  // namespace

double bound_degenerate_tail(double v, double b_upper, double t) {
    if (v < 0.0 || b_upper < 0.0) throw std::invalid_argument("bound_degenerate_tail: V, B >= 0");
    require_nonneg_t(t);
    if (t == 0.0) return 1.0;
    const double denom = 400000.0 * v + 10800.0 * b_upper * t;
    if (denom <= 0.0) return 0.0;  // degenerate statistic
    return std::exp(-t * t / denom);
}

double bound_degenerate_mgf(double v, double b_upper, double lambda) {
    if (v < 0.0 || b_upper < 0.0) throw std::invalid_argument("bound_degenerate_mgf: V, B >= 0");
    if (lambda < 0.0) throw std::invalid_argument("bound_degenerate_mgf: lambda must be >= 0");
    if (b_upper > 0.0) {
        const double lam_max = 1.0 / (5400.0 * b_upper);
        if (lambda > lam_max)
            throw std::invalid_argument("bound_degenerate_mgf: lambda above 1/(5400 B)");
        if (lambda == lam_max) return std::numeric_limits<double>::infinity();
    }
    return std::exp(100000.0 * v * lambda * lambda / (1.0 - 5400.0 * b_upper * lambda));
}

namespace {

void require_doubly_centered(const Matrix& c, const char* who) {
    if (!is_doubly_centered(c, 1e-9))
        throw std::invalid_argument(std::string(who) + ": C is not doubly centered");
}

}  // namespace

BoundValue bound_hanson_wright_general(const Matrix& c, const Interval& max_hadamard,
                                       const KParameter& k, double t) {
    require_doubly_centered(c, "bound_hanson_wright");
    require_nonneg_t(t);
    if (max_hadamard.upper < 0.0)
        throw std::invalid_argument("bound_hanson_wright: interval must be nonnegative");
    const double fro = frobenius_norm(c);
    const double op = operator_norm(c);
    BoundValue out;
    if (fro == 0.0) {  // C = 0: statistic is a.s. zero
        out.degenerate = true;
        out.value = 1.0;
        return out;
    }
    if (t == 0.0) return out;
    const double denom = fro * fro + (op + max_hadamard.upper) * t;
    out.value = std::exp(-k.k * t * t / denom);
    return out;
}

BoundValue bound_hanson_wright_psd(const Matrix& c, const KParameter& k, double t) {
    require_doubly_centered(c, "bound_hanson_wright");
    require_nonneg_t(t);
    const double fro = frobenius_norm(c);
    const double op = operator_norm(c);
    BoundValue out;
    if (fro == 0.0) {
        out.degenerate = true;
        out.value = 1.0;
        return out;
    }
    if (t == 0.0) return out;
    out.value = std::exp(-k.k * t * t / (fro * fro + op * t));
    return out;
}

namespace {

double bennett_core(const Matrix& c, const Matrix& a, double nu, double t, double k_outer,
                    double k_inner) {
    require_doubly_centered(c, "bound_bennett");
    const double cmax = std::max(1.0, max_abs(c));
    for (std::size_t i = 0; i < c.rows; ++i)
        if (std::abs(c(i, i)) > 1e-12 * cmax)
            throw std::invalid_argument("bound_bennett: C must have zero diagonal");
    require_nonneg_t(t);
    if (t == 0.0) return 1.0;
    if (nu <= 0.0) throw std::invalid_argument("bound_bennett: nu must be positive for t > 0");
    const double n = static_cast<double>(c.rows);
    const double cop = operator_norm(c);
    const double afro = frobenius_norm(a);
    const double denom = k_inner / n * cop * cop * afro * afro;
    if (denom <= 0.0) return 0.0;  // degenerate: the statistic is a.s. constant
    return std::exp(-(t / (k_outer * nu)) * std::log1p(nu * t / denom));
}

}  // namespace

double bound_bennett_explicit(const Matrix& c, const Matrix& a, double nu, double t) {
    return bennett_core(c, a, nu, t, 120.0, 540.0);
}

double bound_bennett_k(const Matrix& c, const Matrix& a, double nu, const KParameter& k,
                       double t) {
    // exp(-(t/(K nu)) log(1 + N nu t / (K ||C||_op^2 ||A||_F^2)))
    return bennett_core(c, a, nu, t, k.k, k.k);
}

TwoTermBound bound_two_term(const DecompositionConstants& consts, const KParameter& k, double t) {
    if (consts.v_a < 0.0 || consts.b_a < 0.0 || consts.v_d < 0.0 || consts.b_d.upper < 0.0)
        throw std::invalid_argument("bound_two_term: constants must be nonnegative");
    require_nonneg_t(t);
    return two_term(exp_term(k.k, consts.v_a, consts.b_a, t),
                    exp_term(k.k, consts.v_d, consts.b_d.upper, t));
}

TwoTermBound bound_mww(std::size_t m, std::size_t n, const KParameter& k, double t) {
    require_nonneg_t(t);
    const double dm = static_cast<double>(m), dn = static_cast<double>(n);
    const double total = dm + dn;
    return two_term(exp_term(k.k, total * dm * dn, total, t),
                    exp_term(k.k, dm * dm * dn * dn / (total * total), std::sqrt(dm * dn), t));
}

double bound_pearson(std::size_t n, double max_x_centered, double max_y_centered, double s_x,
                     double s_y, const KParameter& k, double t) {
    require_nonneg_t(t);
    if (s_x <= 0.0 || s_y <= 0.0) throw std::invalid_argument("bound_pearson: S_X, S_Y > 0");
    const double nn = static_cast<double>(n);
    return exp_term(k.k, 1.0 / nn, max_x_centered * max_y_centered / (s_x * s_y), t);
}

TwoTermBound bound_kendall(std::size_t n, const KParameter& k, double t) {
    require_nonneg_t(t);
    const double nn = static_cast<double>(n);
    return two_term(exp_term(k.k * nn, 1.0, 1.0, t), exp_term(k.k * nn * nn, 1.0, nn, t));
}

double bound_spearman(std::size_t n, const KParameter& k, double t) {
    require_nonneg_t(t);
    return exp_term(k.k * static_cast<double>(n), 1.0, 1.0, t);
}

TwoTermBound bound_chatterjee(std::size_t n, const KParameter& k, double t) {
    require_nonneg_t(t);
    const double nn = static_cast<double>(n);
    return two_term(exp_term(k.k * nn * nn, 1.0, nn, t),
                    exp_term(k.k * nn, 1.0, std::sqrt(nn), t));
}

TwoTermBound bound_graph(const DecompositionConstants& consts, const KParameter& k, double t) {
    return bound_two_term(consts, k, t);
}

}  // namespace dips
