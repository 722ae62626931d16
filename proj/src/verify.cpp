#include "dips/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dips/constants.hpp"
#include "dips/parallel.hpp"

namespace dips {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "fail";
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

DecouplingConstants DecouplingConstants::make(std::size_t n) {
    if (n < 4) throw std::invalid_argument("DecouplingConstants: need N >= 4");
    DecouplingConstants c;
    c.n = n;
    c.n1 = (n + 1) / 2;
    const double nn = static_cast<double>(n);
    const double n1 = static_cast<double>(c.n1);
    const double quad = nn * nn - 3.0 * nn + 1.0;
    c.alpha = nn * (nn - 1.0) * (nn - 2.0) * (nn - 3.0) /
              ((n1 - 1.0) * (nn - n1 - 1.0) * quad);
    c.beta = 1.0 / quad;
    if (!(c.alpha > 0.0) || !(c.beta > 0.0) || c.alpha > 4.0 + 8.0 / (nn - 2.0) + 1e-12)
        throw std::logic_error("DecouplingConstants: alpha/beta out of range");
    return c;
}

namespace {

std::string permutation_witness(const Permutation& p) {
    std::ostringstream out;
    out << "pi=[";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out << ",";
        out << p.map[i];
    }
    out << "]";
    return out.str();
}

EmpiricalTail tail_exact_core(std::size_t n,
                              const std::function<double(const Permutation&)>& value,
                              double expectation, const std::vector<double>& grid) {
    if (n > 8)
        throw std::invalid_argument("empirical_tail: exact mode requires N <= 8");
    EmpiricalTail tail;
    tail.grid = grid;
    tail.exact = true;
    tail.replicates = factorial(n);
    std::vector<std::uint64_t> counts(grid.size(), 0);
    for_each_permutation(n, [&](const Permutation& p) {
        const double centered = value(p) - expectation;
        for (std::size_t g = 0; g < grid.size(); ++g)
            if (centered >= grid[g]) ++counts[g];
    });
    tail.survival.resize(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g)
        tail.survival[g] =
            static_cast<double>(counts[g]) / static_cast<double>(tail.replicates);
    return tail;
}

EmpiricalTail tail_mc_core(std::size_t n,
                           const std::function<double(const Permutation&)>& value,
                           double expectation, const std::vector<double>& grid,
                           std::uint64_t replicates, RngSeed seed, unsigned threads,
                           double delta) {
    if (replicates < 1) throw std::invalid_argument("empirical_tail: replicates >= 1");
    EmpiricalTail tail;
    tail.grid = grid;
    tail.exact = false;
    tail.replicates = replicates;
    tail.seed = seed.seed;
    tail.half_width = std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(replicates)));

    // fixed 4096-replicate chunks; integer exceedance counts merge identically
    // for every thread count
    const std::size_t chunk = 4096;
    auto partials = parallel_chunk_map<std::vector<std::uint64_t>>(
        replicates, chunk, threads,
        [&](std::size_t, std::size_t b, std::size_t e) {
            std::vector<std::uint64_t> counts(grid.size(), 0);
            for (std::size_t r = b; r < e; ++r) {
                Rng rng(seed.with_stream(r));
                const Permutation p = sample_uniform(n, rng);
                const double centered = value(p) - expectation;
                for (std::size_t g = 0; g < grid.size(); ++g)
                    if (centered >= grid[g]) ++counts[g];
            }
            return counts;
        });
    std::vector<std::uint64_t> total(grid.size(), 0);
    for (const auto& part : partials)
        for (std::size_t g = 0; g < grid.size(); ++g) total[g] += part[g];
    tail.survival.resize(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g)
        tail.survival[g] = static_cast<double>(total[g]) / static_cast<double>(replicates);
    return tail;
}

void require_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("empirical_tail: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw std::invalid_argument("empirical_tail: grid must be ascending");
}

}  // namespace

EmpiricalTail empirical_tail_exact(const Tensor4& t, bool include_diagonal,
                                   const std::vector<double>& grid) {
    require_grid(grid);
    const double e = exact_expectation(t, include_diagonal);
    return tail_exact_core(
        t.n(), [&](const Permutation& p) { return evaluate_dips(t, p, include_diagonal); }, e,
        grid);
}

EmpiricalTail empirical_tail_mc(const Tensor4& t, bool include_diagonal,
                                const std::vector<double>& grid, std::uint64_t replicates,
                                RngSeed seed, unsigned threads, double delta) {
    require_grid(grid);
    const double e = exact_expectation(t, include_diagonal);
    return tail_mc_core(
        t.n(), [&](const Permutation& p) { return evaluate_dips(t, p, include_diagonal); }, e,
        grid, replicates, seed, threads, delta);
}

EmpiricalTail empirical_tail_exact_fn(std::size_t n,
                                      const std::function<double(const Permutation&)>& value,
                                      double expectation, const std::vector<double>& grid) {
    require_grid(grid);
    return tail_exact_core(n, value, expectation, grid);
}

EmpiricalTail empirical_tail_mc_fn(std::size_t n,
                                   const std::function<double(const Permutation&)>& value,
                                   double expectation, const std::vector<double>& grid,
                                   std::uint64_t replicates, RngSeed seed, unsigned threads,
                                   double delta) {
    require_grid(grid);
    return tail_mc_core(n, value, expectation, grid, replicates, seed, threads, delta);
}

VerificationReport check_dominance(const TailCurve& curve, const EmpiricalTail& tail) {
    if (curve.grid != tail.grid)
        throw std::invalid_argument("check_dominance: curve and tail grids differ");
    VerificationReport rep;
    rep.name = "dominance";
    rep.statistic = curve.label;
    rep.size = tail.replicates;
    rep.seed = tail.seed;

    double worst_margin = 1.0;
    double worst_t = 0.0;
    bool confident_violation = false;
    for (std::size_t g = 0; g < curve.grid.size(); ++g) {
        const double margin = curve.bound[g] - (tail.survival[g] + tail.half_width);
        if (margin < worst_margin) {
            worst_margin = margin;
            worst_t = curve.grid[g];
        }
        if (tail.survival[g] - tail.half_width > curve.bound[g]) confident_violation = true;
    }
    rep.margin = worst_margin;
    rep.details = {{"worst_t", worst_t}, {"half_width", tail.half_width}};
    if (worst_margin >= 0.0)
        rep.status = Verdict::pass;
    else if (tail.exact || confident_violation)
        rep.status = Verdict::fail;
    else
        rep.status = Verdict::inconclusive;
    if (rep.status == Verdict::fail) {
        std::ostringstream w;
        w << "t=" << worst_t;
        rep.witness = w.str();
    }
    return rep;
}

VerificationReport check_decomposition(const Tensor4& t) {
    if (!t.square()) throw std::invalid_argument("check_decomposition: tensor must be square");
    if (t.n() > 6) throw std::invalid_argument("check_decomposition: N <= 6 (full enumeration)");
    const std::size_t n = t.n();
    VerificationReport rep;
    rep.name = "decomposition";
    rep.statistic = "reconstruction identity, degeneracy, sum a_w = 0";
    rep.size = factorial(n);

    const Decomposition dec = hoeffding_decompose(t);
    const double deg = max_partial_average(dec.d) / dec.d.scale();
    KahanSum asum;
    for (double v : dec.a.data) asum.add(v);
    const double a_total = std::abs(asum.value()) /
                           std::max(1.0, max_abs(dec.a) * static_cast<double>(n * n));

    double worst = 0.0;
    Permutation worst_pi;
    for_each_permutation(n, [&](const Permutation& p) {
        const double lhs = evaluate_dips(t, p, true);
        KahanSum linear;
        for (std::size_t i = 0; i < n; ++i)
            linear.add(dec.a(i, static_cast<std::size_t>(p.map[i])));
        const double rhs = static_cast<double>(n) * linear.value() +
                           evaluate_dips(dec.d, p, true) + dec.constant;
        const double rel = std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
        if (rel > worst) {
            worst = rel;
            worst_pi = p;
        }
    });

    rep.details = {{"worst_reconstruction_rel", worst},
                   {"degeneracy_rel", deg},
                   {"a_sum_rel", a_total}};
    rep.margin = 1e-10 - worst;
    if (worst <= 1e-10 && deg <= 1e-9 && a_total <= 1e-9) {
        rep.status = Verdict::pass;
    } else {
        rep.status = Verdict::fail;
        rep.witness = permutation_witness(worst_pi);
    }
    return rep;
}

VerificationReport check_decoupling_identity(const Tensor4& d, const Permutation& p) {
    if (!d.square()) throw std::invalid_argument("check_decoupling_identity: square tensor");
    const std::size_t n = d.n();
    if (n < 4 || n > 8)
        throw std::invalid_argument("check_decoupling_identity: N must lie in [4, 8]");
    if (p.size() != n) throw std::invalid_argument("check_decoupling_identity: size mismatch");
    if (!is_degenerate(d, 1e-9))
        throw std::invalid_argument("check_decoupling_identity: tensor is not degenerate");

    const DecouplingConstants dc = DecouplingConstants::make(n);
    const double nn = static_cast<double>(n);
    const double n1 = static_cast<double>(dc.n1);

    // statistics of the fixed permutation
    KahanSum s_off, s_swap, s_diag, s_trace;
    for (std::size_t i = 0; i < n; ++i) {
        const auto pi = static_cast<std::size_t>(p.map[i]);
        s_diag.add(d(i, i, pi, pi));
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto pj = static_cast<std::size_t>(p.map[j]);
            s_off.add(d(i, j, pi, pj));
            s_swap.add(d(i, j, pj, pi));
        }
        for (std::size_t k = 0; k < n; ++k) s_trace.add(d(i, i, k, k));
    }
    const double e_off = s_trace.value() / (nn * (nn - 1.0));
    const double e_diag = s_trace.value() / nn;

    // Delta(pi), first from the raw three-term display ...
    const double c1 = (n1 - 1.0) * (nn - n1 - 1.0) / (nn * (nn - 1.0) * (nn - 2.0) * (nn - 3.0));
    const double c2 = 2.0 * (n1 - 1.0) * (nn - n1 - 1.0) / (nn * (nn - 2.0) * (nn - 3.0));
    const double quad = nn * nn - 3.0 * nn + 1.0;
    const double delta_raw = c2 * s_diag.value() - c1 * s_swap.value() - c1 * s_trace.value() -
                             c1 * quad * e_off;
    // ... then from the centered display; the two must agree
    const double delta_centered =
        -c1 * (s_swap.value() - e_off) + c2 * (s_diag.value() - e_diag);

    VerificationReport rep;
    rep.name = "decoupling-identity";
    rep.statistic = "conditional expectation over all I of alpha (tilde-d sum + Delta)";
    rep.size = binomial(n, dc.n1);
    const double delta_rel = std::abs(delta_raw - delta_centered) /
                             std::max({1.0, std::abs(delta_raw), std::abs(delta_centered)});

    // average the restricted sum over every subset I, with J = pi(I)
    KahanSum avg;
    for_each_subset(n, dc.n1, [&](const std::vector<int>& i_set) {
        std::vector<int> j_set;
        j_set.reserve(i_set.size());
        for (int i : i_set) j_set.push_back(p.map[static_cast<std::size_t>(i)]);
        const IndexSplit split = IndexSplit::make(n, i_set, j_set);
        const Tensor4 tilde = tilde_d_restrict(d, split);
        KahanSum s;
        for (int i : split.i_set)
            for (int j : split.i_complement())
                s.add(tilde(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                            static_cast<std::size_t>(p.map[static_cast<std::size_t>(i)]),
                            static_cast<std::size_t>(p.map[static_cast<std::size_t>(j)])));
        avg.add(s.value());
    });
    const double mean_tilde = avg.value() / static_cast<double>(binomial(n, dc.n1));

    const double lhs = dc.alpha * (mean_tilde + delta_raw);
    const double rhs = s_off.value() - e_off;
    const double rel = std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});

    rep.details = {{"alpha", dc.alpha},
                   {"beta", dc.beta},
                   {"identity_rel", rel},
                   {"delta_display_rel", delta_rel},
                   {"lhs", lhs},
                   {"rhs", rhs}};
    rep.margin = 1e-9 - std::max(rel, delta_rel);
    if (rel <= 1e-9 && delta_rel <= 1e-9) {
        rep.status = Verdict::pass;
    } else {
        rep.status = Verdict::fail;
        rep.witness = permutation_witness(p);
    }
    return rep;
}

VerificationReport check_randomization_mgf(const Tensor4& d, double lambda,
                                           std::uint64_t replicates, RngSeed seed,
                                           unsigned threads) {
    const std::size_t n = d.n(), m = d.m();
    if (n > 5 || m > 5)
        throw std::invalid_argument("check_randomization_mgf: N, M <= 5 (enumeration)");
    if (n < 1 || m < 1) throw std::invalid_argument("check_randomization_mgf: empty tensor");

    // rectangular degeneracy d(.,j,.,l) = d(i,.,k,.) = 0
    const double scale = d.scale();
    double worst = 0.0;
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = 0; l < m; ++l) {
            KahanSum s;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k) s.add(d(i, j, k, l));
            worst = std::max(worst, std::abs(s.value() / static_cast<double>(n * n)));
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            KahanSum s;
            for (std::size_t j = 0; j < m; ++j)
                for (std::size_t l = 0; l < m; ++l) s.add(d(i, j, k, l));
            worst = std::max(worst, std::abs(s.value() / static_cast<double>(m * m)));
        }
    if (worst > 1e-9 * scale)
        throw std::invalid_argument(
            "check_randomization_mgf: d(.,j,.,l) = d(i,.,k,.) = 0 violated");
    if (std::abs(lambda) * d.max_abs() * static_cast<double>(n * m) > 0.1)
        throw std::invalid_argument("check_randomization_mgf: |lambda| max|d| N M must be <= 0.1");

    // all decoupled slices d(i,j,pi(i),tau(j)) as flat N*M matrices
    std::vector<std::vector<double>> slices;
    for_each_permutation(n, [&](const Permutation& pi) {
        for_each_permutation(m, [&](const Permutation& tau) {
            std::vector<double> b(n * m);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    b[i * m + j] = d(i, j, static_cast<std::size_t>(pi.map[i]),
                                     static_cast<std::size_t>(tau.map[j]));
            slices.push_back(std::move(b));
        });
    });
    const double n_pairs = static_cast<double>(slices.size());

    KahanSum lhs_acc;
    for (const auto& b : slices) {
        KahanSum s;
        for (double v : b) s.add(v);
        lhs_acc.add(std::exp(lambda * s.value()));
    }
    const double lhs = lhs_acc.value() / n_pairs;

    struct Moments {
        double sum = 0.0;
        double sumsq = 0.0;
    };
    const std::size_t chunk = 4096;
    auto partials = parallel_chunk_map<Moments>(
        replicates, chunk, threads, [&](std::size_t, std::size_t b, std::size_t e) {
            Moments mo;
            KahanSum s1, s2;
            std::vector<double> g(n), gp(m);
            for (std::size_t r = b; r < e; ++r) {
                Rng rng(seed.with_stream(r));
                for (auto& v : g) v = rng.normal();
                for (auto& v : gp) v = rng.normal();
                KahanSum xr;
                for (const auto& bl : slices) {
                    double q = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        double row = 0.0;
                        for (std::size_t j = 0; j < m; ++j) row += bl[i * m + j] * gp[j];
                        q += g[i] * row;
                    }
                    xr.add(std::exp(12.0 * lambda * q));
                }
                const double x = xr.value() / n_pairs;
                s1.add(x);
                s2.add(x * x);
            }
            mo.sum = s1.value();
            mo.sumsq = s2.value();
            return mo;
        });
    KahanSum sum, sumsq;
    for (const auto& mo : partials) {
        sum.add(mo.sum);
        sumsq.add(mo.sumsq);
    }
    const double r = static_cast<double>(replicates);
    const double mean = sum.value() / r;
    const double var = std::max(0.0, sumsq.value() / r - mean * mean);
    const double se = std::sqrt(var / r);

    VerificationReport rep;
    rep.name = "randomization-mgf";
    rep.statistic = "E exp(lambda Q_decoupled) vs Gaussian-chaos estimate (12 lambda)";
    rep.size = replicates;
    rep.seed = seed.seed;
    rep.details = {{"lhs", lhs}, {"rhs_mean", mean}, {"rhs_se", se}, {"lambda", lambda}};
    rep.margin = mean + 4.0 * se - lhs;
    if (lhs > mean + 4.0 * se)
        rep.status = Verdict::fail;
    else if (se > 0.1 * (mean - lhs))
        rep.status = Verdict::inconclusive;
    else
        rep.status = Verdict::pass;
    return rep;
}

VerificationReport check_statistic_bound(const ScorePair& s,
                                         const std::function<double(double)>& bound_at,
                                         const KParameter& k, bool exact,
                                         std::uint64_t replicates, RngSeed seed,
                                         const std::vector<double>& grid, unsigned threads) {
    const double expectation = s.value_from_q(exact_expectation(score_tensor(s), true));
    auto value = [&](const Permutation& p) { return statistic_value(s, p); };
    const EmpiricalTail tail =
        exact ? empirical_tail_exact_fn(s.n(), value, expectation, grid)
              : empirical_tail_mc_fn(s.n(), value, expectation, grid, replicates, seed, threads);
    const TailCurve curve =
        make_tail_curve(score_kind_name(s.kind) + " example bound", grid, bound_at,
                        {{"K", k.k}});
    VerificationReport rep = check_dominance(curve, tail);
    rep.name = "statistic-bound";
    std::ostringstream label;
    label << score_kind_name(s.kind) << " (conditional on supplied K=" << k.k << ")";
    rep.statistic = label.str();
    return rep;
}

}  // namespace dips
