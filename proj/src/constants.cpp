#include "dips/constants.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "dips/parallel.hpp"
#include "dips/permutation.hpp"

namespace dips {

std::string method_name(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::heuristic_interval: return "heuristic-interval";
        case Method::closed_form: return "closed-form";
    }
    return "unknown";
}

namespace {

Matrix permuted_slice(const Tensor4& t, const std::vector<int>& sigma) {
    const std::size_t n = t.n();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = t(i, j, static_cast<std::size_t>(sigma[i]),
                        static_cast<std::size_t>(sigma[j]));
    return m;
}

double certified_upper(const Tensor4& t) {
    const std::size_t n = t.n();
    // ||M_sigma||_op <= ||M_sigma||_F <= ||[max_{k,l}|d(i,j,k,l)|]||_F for every sigma
    if (t.form() == Tensor4::Form::product) {
        const double amax = max_abs(t.a());
        KahanSum s;
        for (double v : t.c().data) s.add(v * v * amax * amax);
        return std::sqrt(s.value());
    }
    KahanSum s;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double best = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l)
                    best = std::max(best, std::abs(t(i, j, k, l)));
            s.add(best * best);
        }
    return std::sqrt(s.value());
}

// Steepest ascent over transpositions and 3-cycles. Plain transpositions
// strand the search in local maxima on a few percent of random instances at
// N = 7; the 3-cycle moves close most of that gap.
double steepest_ascent(const Tensor4& t, std::vector<int>& sigma) {
    const std::size_t n = t.n();
    double current = operator_norm(permuted_slice(t, sigma));
    std::vector<int> candidate;
    for (;;) {
        double best = current;
        std::vector<int> best_map;
        auto consider = [&](const std::vector<int>& map) {
            const double cand = operator_norm(permuted_slice(t, map));
            if (cand > best) {
                best = cand;
                best_map = map;
            }
        };
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) {
                candidate = sigma;
                std::swap(candidate[a], candidate[b]);
                consider(candidate);
            }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                for (std::size_t c = b + 1; c < n; ++c) {
                    candidate = sigma;
                    const int tmp = candidate[a];
                    candidate[a] = candidate[b];
                    candidate[b] = candidate[c];
                    candidate[c] = tmp;
                    consider(candidate);
                    candidate = sigma;
                    const int tmp2 = candidate[a];
                    candidate[a] = candidate[c];
                    candidate[c] = candidate[b];
                    candidate[b] = tmp2;
                    consider(candidate);
                }
        if (best <= current) return current;
        sigma = std::move(best_map);
        current = best;
    }
}

// One restart: ascent from a random start, then up to three random
// double-transposition kicks with re-ascent (reset after any improvement).
// All randomness comes from the restart's own stream.
double local_search_restart(const Tensor4& t, Rng& rng) {
    const std::size_t n = t.n();
    std::vector<int> sigma = sample_uniform(n, rng).map;
    double value = steepest_ascent(t, sigma);
    int kicks_left = 3;
    while (kicks_left > 0) {
        std::vector<int> kicked = sigma;
        for (int s = 0; s < 2; ++s) {
            const std::size_t a = rng.below(n);
            const std::size_t b = rng.below(n);
            std::swap(kicked[a], kicked[b]);
        }
        const double cand = steepest_ascent(t, kicked);
        if (cand > value) {
            value = cand;
            sigma = std::move(kicked);
            kicks_left = 3;
        } else {
            --kicks_left;
        }
    }
    return value;
}

}  // namespace

double certified_b_upper(const Tensor4& t) {
    if (!t.square()) throw std::invalid_argument("certified_b_upper: tensor must be square");
    return certified_upper(t);
}

Interval permuted_opnorm_B_heuristic(const Tensor4& t, std::size_t restarts, RngSeed seed,
                                     unsigned threads) {
    if (!t.square()) throw std::invalid_argument("permuted_opnorm_B: tensor must be square");
    const std::size_t n = t.n();
    Interval out;
    out.method = Method::heuristic_interval;
    out.upper = certified_upper(t);
    if (n == 0) return out;

    auto chunks = parallel_chunk_map<double>(
        restarts, 1, threads, [&](std::size_t, std::size_t r, std::size_t) {
            Rng rng(seed.with_stream(r));
            return local_search_restart(t, rng);
        });
    double lower = 0.0;
    for (double v : chunks) lower = std::max(lower, v);
    out.lower = lower;
    // local search can only ever visit feasible sigma, so lower <= upper holds
    // up to power-iteration tolerance; keep the interval ordered
    out.upper = std::max(out.upper, out.lower);
    return out;
}

Interval permuted_opnorm_B(const Tensor4& t, std::size_t exact_cap, std::size_t restarts,
                           RngSeed seed, unsigned threads) {
    if (!t.square()) throw std::invalid_argument("permuted_opnorm_B: tensor must be square");
    const std::size_t n = t.n();
    if (n <= exact_cap && n <= enumeration_cap) {
        double best = 0.0;
        for_each_permutation(n, [&](const Permutation& sigma) {
            best = std::max(best, operator_norm(permuted_slice(t, sigma.map)));
        });
        return Interval{best, best, Method::exact};
    }
    return permuted_opnorm_B_heuristic(t, restarts, seed, threads);
}

Matrix xi_matrix(const Tensor4& d) {
    if (!d.square()) throw std::invalid_argument("xi_matrix: tensor must be square");
    const std::size_t n = d.n();
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) s(i, k) = d(i, i, k, k);
    return doubly_center(s);
}

double variance_V(const Tensor4& d) {
    if (!d.square()) throw std::invalid_argument("variance_V: tensor must be square");
    const std::size_t n = d.n();
    if (n == 0) return 0.0;
    const Matrix xi = xi_matrix(d);
    KahanSum xi2;
    for (double v : xi.data) xi2.add(v * v);

    KahanSum d2;
    if (d.form() == Tensor4::Form::product) {
        KahanSum c2, a2;
        for (double v : d.c().data) c2.add(v * v);
        for (double v : d.a().data) a2.add(v * v);
        d2.add(c2.value() * a2.value());
    } else {
        for (double v : d.values()) d2.add(v * v);
    }
    const double nn = static_cast<double>(n);
    return xi2.value() / nn + d2.value() / (nn * nn);
}

namespace {

// Largest sum of m products, one factor drawn without replacement from xs,
// the other from ys (both sorted ascending). For a fixed pair of selections
// the ascending pairing maximizes the sum, so a DP over monotone pairings is
// exact. The aligned-extremes greedy is not: with rows
// xs = (-1.0409, -0.6600, -0.1775, 1.4854), ys = (0.7588, 0.8514, 0.9731,
// 1.9694) and m = 2 the optimum pairs the negative -0.1775 with the smallest
// y, which no greedy step of that shape can produce.
double max_pair_sum(const std::vector<double>& xs, const std::vector<double>& ys,
                    std::size_t m) {
    const std::size_t n = xs.size();
    constexpr double none = -1e300;
    std::vector<std::vector<double>> prev(n + 1, std::vector<double>(m + 1, none));
    std::vector<std::vector<double>> cur(n + 1, std::vector<double>(m + 1, none));
    for (std::size_t j = 0; j <= n; ++j) prev[j][0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0][0] = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
            cur[j][0] = 0.0;
            for (std::size_t r = 1; r <= m; ++r) {
                double best = std::max(prev[j][r], cur[j - 1][r]);
                if (prev[j - 1][r - 1] > none / 2.0)
                    best = std::max(best, prev[j - 1][r - 1] + xs[i - 1] * ys[j - 1]);
                cur[j][r] = best;
            }
        }
        std::swap(prev, cur);
    }
    return prev[n][m];
}

double extreme_nu_entry(const std::vector<double>& xs, const std::vector<double>& ys,
                        std::size_t m) {
    const double hi = max_pair_sum(xs, ys, m);
    std::vector<double> neg(ys.size());
    for (std::size_t q = 0; q < ys.size(); ++q) neg[q] = -ys[ys.size() - 1 - q];
    const double lo = -max_pair_sum(xs, neg, m);
    return std::max(std::abs(hi), std::abs(lo));
}

}  // namespace

double bennett_nu_brute_force(const Matrix& c, const Matrix& a) {
    if (c.rows != a.rows || c.cols != a.cols || !c.square())
        throw std::invalid_argument("bennett_nu_brute_force: shape mismatch");
    const std::size_t n = c.rows;
    if (n > 6) throw std::invalid_argument("bennett_nu_brute_force: n too large");
    const std::size_t m = n / 2;
    if (m == 0) return 0.0;

    std::vector<std::vector<int>> perms;
    for_each_permutation(n, [&](const Permutation& p) { perms.push_back(p.map); });

    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& sigma : perms)
                for (const auto& tilde : perms) {
                    double s = 0.0;
                    for (std::size_t k = 0; k < m; ++k)
                        s += c(i, static_cast<std::size_t>(sigma[k])) *
                             a(j, static_cast<std::size_t>(tilde[k]));
                    best = std::max(best, std::abs(s));
                }
    return best;
}

double bennett_nu(const Matrix& c, const Matrix& a, std::size_t exact_cap) {
    if (c.rows != a.rows || c.cols != a.cols)
        throw std::invalid_argument("bennett_nu: shape mismatch");
    if (!c.square()) throw std::invalid_argument("bennett_nu: matrices must be square");
    const std::size_t n = c.rows;
    const std::size_t m = n / 2;
    if (m == 0) return 0.0;

    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> xs(c.data.begin() + static_cast<std::ptrdiff_t>(i * n),
                               c.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
        std::sort(xs.begin(), xs.end());
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> ys(a.data.begin() + static_cast<std::ptrdiff_t>(j * n),
                                   a.data.begin() + static_cast<std::ptrdiff_t>((j + 1) * n));
            std::sort(ys.begin(), ys.end());
            best = std::max(best, extreme_nu_entry(xs, ys, m));
        }
    }

    if (n <= exact_cap && n <= 6) {
        const double brute = bennett_nu_brute_force(c, a);
        if (brute != best)
            throw std::logic_error("bennett_nu: greedy disagrees with brute force");
    }
    return best;
}

BoundConstants collect_bound_constants(const Tensor4& t, std::size_t exact_cap) {
    if (!t.square())
        throw std::invalid_argument("collect_bound_constants: tensor must be square");
    const Decomposition dec = hoeffding_decompose(t);
    BoundConstants out;
    out.b = permuted_opnorm_B(dec.d, exact_cap);
    out.v = TaggedValue{variance_V(dec.d), Method::closed_form};
    if (t.form() == Tensor4::Form::product) {
        out.frob = TaggedValue{frobenius_norm(t.c()), Method::exact};
        out.opnorm = TaggedValue{operator_norm(t.c()), Method::exact};
        out.nu = TaggedValue{bennett_nu(t.c(), t.a()), Method::exact};
    } else {
        KahanSum d2;
        for (double v : dec.d.values()) d2.add(v * v);
        out.frob = TaggedValue{std::sqrt(d2.value()), Method::exact};
    }
    return out;
}

DecompositionConstants decomposition_constants(const Tensor4& w, std::size_t exact_cap) {
    if (!w.square()) throw std::invalid_argument("decomposition_constants: tensor must be square");
    const Decomposition dec = hoeffding_decompose(w);
    const double nn = static_cast<double>(w.n());
    DecompositionConstants out;
    KahanSum a2;
    for (double v : dec.a.data) a2.add(v * v);
    out.v_a = nn * a2.value();
    out.b_a = nn * max_abs(dec.a);
    out.v_d = variance_V(dec.d);
    out.b_d = permuted_opnorm_B(dec.d, exact_cap);
    return out;
}

namespace {

void validate_edges(const std::vector<std::pair<int, int>>& edges, std::size_t n,
                    const char* name) {
    std::set<std::pair<int, int>> seen;
    for (const auto& [u, v] : edges) {
        if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n ||
            static_cast<std::size_t>(v) >= n)
            throw std::invalid_argument(std::string(name) + ": vertex out of range");
        if (u == v) throw std::invalid_argument(std::string(name) + ": self-loop present");
        if (!seen.insert({u, v}).second)
            throw std::invalid_argument(std::string(name) + ": duplicate edge");
    }
}

}  // namespace

DecompositionConstants graph_constants(const std::vector<std::pair<int, int>>& ex,
                                   const std::vector<std::pair<int, int>>& ey, std::size_t n,
                                   std::size_t exact_cap) {
    validate_edges(ex, n, "graph_constants (E_x)");
    validate_edges(ey, n, "graph_constants (E_y)");
    const double nn = static_cast<double>(n);

    Matrix c(n, n), a(n, n);
    for (const auto& [u, v] : ex) c(static_cast<std::size_t>(u), static_cast<std::size_t>(v)) = 1.0;
    for (const auto& [u, v] : ey) a(static_cast<std::size_t>(u), static_cast<std::size_t>(v)) = 1.0;

    auto centered_degrees = [&](const Matrix& adj) {
        std::vector<double> deg(n, 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) deg[i] += adj(i, j);
            total += deg[i];
        }
        const double mean = total / nn;
        for (auto& d : deg) d -= mean;
        return deg;
    };
    const std::vector<double> dx = centered_degrees(c);
    const std::vector<double> dy = centered_degrees(a);

    auto sum_sq = [](const std::vector<double>& v) {
        KahanSum s;
        for (double x : v) s.add(x * x);
        return s.value();
    };
    auto max_abs_of = [](const std::vector<double>& v) {
        double best = 0.0;
        for (double x : v) best = std::max(best, std::abs(x));
        return best;
    };
    const double sx = sum_sq(dx), sy = sum_sq(dy);
    const double mx = static_cast<double>(ex.size());
    const double my = static_cast<double>(ey.size());

    DecompositionConstants out;
    out.v_a = sx * sy / (nn * nn * nn);
    out.b_a = max_abs_of(dx) * max_abs_of(dy) / nn;
    out.v_d = sx * sy / (nn * nn * nn * nn * nn) +
              (mx - sx / nn - 2.0 * mx * mx / (nn * nn)) *
                  (my - sy / nn - 2.0 * my * my / (nn * nn)) / (nn * nn);
    out.b_d = permuted_opnorm_B(Tensor4::product(doubly_center(c), doubly_center(a)), exact_cap);
    return out;
}

RegressionConstants regression_constants(const Matrix& x, const std::vector<double>& e,
                                         double p1) {
    const std::size_t n = x.rows, p = x.cols;
    if (e.size() != n) throw std::invalid_argument("regression_constants: residual length");
    if (p1 <= 0.0 || p1 >= 1.0)
        throw std::invalid_argument("regression_constants: p1 must lie in (0,1)");
    const double scale = std::max(1.0, max_abs(x));
    for (std::size_t j = 0; j < p; ++j) {
        KahanSum s;
        for (std::size_t i = 0; i < n; ++i) s.add(x(i, j));
        if (std::abs(s.value() / static_cast<double>(n)) > 1e-10 * scale)
            throw std::invalid_argument("regression_constants: X is not column-centered");
    }

    const Matrix xt = transpose(x);
    const Matrix xtx = multiply(xt, x);
    // columns of (X^T X)^{-1} X^T via p solves
    Matrix ginv(p, p);
    for (std::size_t j = 0; j < p; ++j) {
        std::vector<double> unit(p, 0.0);
        unit[j] = 1.0;
        std::vector<double> col;
        try {
            col = solve_spd(xtx, unit);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("regression_constants: X^T X is singular");
        }
        for (std::size_t i = 0; i < p; ++i) ginv(i, j) = col[i];
    }
    const Matrix h = multiply(multiply(x, ginv), xt);

    RegressionConstants out;
    out.q = Matrix(n, n);
    out.hat_diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.hat_diag[i] = h(i, i);
        for (std::size_t j = 0; j < n; ++j) out.q(i, j) = h(i, j) * e[j];
    }
    if (!is_doubly_centered(out.q, 1e-8))
        throw std::invalid_argument(
            "regression_constants: Q = H diag(e) is not doubly centered; e must be the "
            "residual of a regression on column-centered X");

    KahanSum q2;
    for (double v : out.q.data) q2.add(v * v);
    out.frob2 = q2.value();
    const double op = operator_norm(out.q);
    out.opnorm = Interval{op, op, Method::exact};

    const double p0 = 1.0 - p1;
    const double pmax2 = std::max(p1 * p1, p0 * p0);
    double e2h = 0.0, hmax = 0.0, emax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        e2h += e[i] * e[i];
        hmax = std::max(hmax, out.hat_diag[i]);
        emax = std::max(emax, std::abs(e[i]));
    }
    out.v_exact = p1 * p0 * out.frob2;
    out.b_exact = pmax2 * op;
    out.v_relaxed = p1 * p0 * e2h * hmax;
    out.b_relaxed = pmax2 * emax;
    return out;
}

}  // namespace dips
