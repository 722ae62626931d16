#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "dips/bounds.hpp"
#include "dips/constants.hpp"
#include "dips/generate.hpp"
#include "dips/json_io.hpp"
#include "dips/parallel.hpp"
#include "dips/permutation.hpp"
#include "dips/statistics.hpp"
#include "dips/tensor4.hpp"
#include "dips/verify.hpp"

namespace {

using dips::json;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_input = 2;
constexpr int exit_verification = 3;

// every option can come from --config <file> (a flat JSON object); explicit
// flags win
struct ConfigBacked {
    json cfg = json::object();

    void load(const std::string& path) {
        cfg = dips::load_json_file(path);
        if (!cfg.is_object()) throw std::invalid_argument("config: expected a JSON object");
    }

    template <class T>
    void fill(const CLI::App& app, const std::string& flag, const std::string& key, T& value) {
        if (app.count(flag) == 0 && cfg.contains(key)) value = cfg.at(key).get<T>();
    }
};

dips::RngSeed seed_of(std::uint64_t seed) { return dips::RngSeed{seed, 0}; }

std::vector<double> grid_from(const std::string& text) {
    return dips::make_grid(dips::parse_grid(text));
}

// shared flags
struct CommonOpts {
    std::string input;
    std::string input2;
    std::string output;
    std::string config;
    std::string grid;
    std::string mode = "mc";
    std::uint64_t seed = 0;
    std::uint64_t replicates = 100000;
    unsigned threads = 0;
    double k = 1.0;
    int include_diagonal = -1;  // -1 unset, 0 false, 1 true
};

bool include_diagonal_required(const CommonOpts& o) {
    if (o.include_diagonal < 0)
        throw std::invalid_argument(
            "--include-diagonal {true|false} is required for raw tensors (the diagonal "
            "convention differs between the statistic families)");
    return o.include_diagonal == 1;
}

int run_decompose(const CommonOpts& o) {
    const dips::Tensor4 t = dips::load_tensor_file(o.input);
    const dips::Decomposition dec = dips::hoeffding_decompose(t);
    dips::KahanSum asum;
    for (double v : dec.a.data) asum.add(v);
    json summary{{"n", t.n()},
                 {"constant", dec.constant},
                 {"a_sum", asum.value()},
                 {"degeneracy_rel", dips::max_partial_average(dec.d) / dec.d.scale()}};
    dips::save_json_file(o.output + ".a.json", dips::matrix_to_json(dec.a));
    dips::save_json_file(o.output + ".d.json", dips::tensor_to_json(dec.d));
    dips::save_json_file(o.output + ".summary.json", summary);
    return exit_ok;
}

json constants_report(const dips::Tensor4& t, std::size_t exact_cap) {
    const dips::DecompositionConstants cc = dips::decomposition_constants(t, exact_cap);
    json rep = dips::decomposition_constants_to_json(cc);
    rep.update(dips::bound_constants_to_json(dips::collect_bound_constants(t, exact_cap)));
    rep["n"] = t.n();
    if (t.form() == dips::Tensor4::Form::product && t.square())
        rep["frob_a"] = {{"value", dips::frobenius_norm(t.a())}, {"method", "exact"}};
    return rep;
}

int run_constants(const CommonOpts& o, std::size_t exact_cap) {
    const dips::Tensor4 t = dips::load_tensor_file(o.input);
    const json rep = constants_report(t, exact_cap);
    if (o.output.empty())
        std::cout << rep.dump(2) << "\n";
    else
        dips::save_json_file(o.output, rep);
    return exit_ok;
}

void write_curve(const dips::TailCurve& curve, const std::string& output) {
    dips::save_json_file(output + ".json", dips::curve_to_json(curve));
    dips::save_text_file(output + ".csv", dips::curve_to_csv(curve));
}

bool looks_psd(const dips::Matrix& a) {
    if (!a.square()) return false;
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = i + 1; j < a.cols; ++j)
            if (std::abs(a(i, j) - a(j, i)) > 1e-9 * std::max(1.0, dips::max_abs(a)))
                return false;
    const double top = dips::operator_norm(a);
    if (top == 0.0) return true;
    // lambda_min(A) = top - ||top I - A||_op for symmetric A
    dips::Matrix shifted(a.rows, a.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            shifted(i, j) = (i == j ? top : 0.0) - a(i, j);
    const double lambda_min = top - dips::operator_norm(shifted);
    return lambda_min >= -1e-8 * top;
}

int run_bound(const CommonOpts& o, const std::string& kind, std::size_t exact_cap,
              bool explicit_constants, bool k_given) {
    const dips::Tensor4 t = dips::load_tensor_file(o.input);
    const std::vector<double> grid = grid_from(o.grid);
    const dips::KParameter k = dips::KParameter::user(o.k);
    dips::TailCurve curve;

    if (kind == "degenerate") {
        const dips::Decomposition dec = dips::hoeffding_decompose(t);
        const double v = dips::variance_V(dec.d);
        const dips::Interval b = dips::permuted_opnorm_B(dec.d, exact_cap);
        curve = dips::make_tail_curve(
            "explicit tail (V, B)", grid,
            [&](double tt) { return dips::bound_degenerate_tail(v, b.upper, tt); },
            {{"V", v}, {"B_lower", b.lower}, {"B_upper", b.upper}});
    } else if (kind == "two-term") {
        const dips::DecompositionConstants cc = dips::decomposition_constants(t, exact_cap);
        curve = dips::make_tail_curve(
            "two-term decomposition bound", grid,
            [&](double tt) { return dips::bound_two_term(cc, k, tt).raw; },
            {{"K", k.k},
             {"V_a", cc.v_a},
             {"B_a", cc.b_a},
             {"V_d", cc.v_d},
             {"B_d_upper", cc.b_d.upper}});
    } else if (kind == "bennett") {
        if (t.form() != dips::Tensor4::Form::product || !t.square())
            throw std::invalid_argument("bound bennett: input must be a square product tensor");
        const double nu = dips::bennett_nu(t.c(), t.a());
        if (explicit_constants) {
            curve = dips::make_tail_curve(
                "combinatorial Bennett (explicit 120/540)", grid,
                [&](double tt) { return dips::bound_bennett_explicit(t.c(), t.a(), nu, tt); },
                {{"nu", nu}});
        } else {
            if (!k_given)
                throw std::invalid_argument("bound bennett: --k required unless --explicit");
            curve = dips::make_tail_curve(
                "combinatorial Bennett (K form)", grid,
                [&](double tt) { return dips::bound_bennett_k(t.c(), t.a(), nu, k, tt); },
                {{"nu", nu}, {"K", k.k}});
        }
    } else if (kind == "hw-general" || kind == "hw-psd") {
        if (t.form() != dips::Tensor4::Form::product || !t.square())
            throw std::invalid_argument("bound hw: input must be a square product tensor");
        if (kind == "hw-psd") {
            if (!looks_psd(t.a()))
                throw std::invalid_argument("bound hw-psd: A is not positive semidefinite");
            curve = dips::make_tail_curve(
                "combinatorial Hanson-Wright (PSD variant)", grid,
                [&](double tt) { return dips::bound_hanson_wright_psd(t.c(), k, tt).value; },
                {{"K", k.k}});
        } else {
            const dips::Interval had = dips::permuted_opnorm_B(t, exact_cap);
            curve = dips::make_tail_curve(
                "combinatorial Hanson-Wright (general variant)", grid,
                [&](double tt) {
                    return dips::bound_hanson_wright_general(t.c(), had, k, tt).value;
                },
                {{"K", k.k}, {"max_hadamard_upper", had.upper}});
        }
    } else {
        throw std::invalid_argument("bound: unknown --bound '" + kind + "'");
    }
    write_curve(curve, o.output);
    return exit_ok;
}

int run_simulate(const CommonOpts& o) {
    const dips::Tensor4 t = dips::load_tensor_file(o.input);
    const bool diag = include_diagonal_required(o);
    const std::vector<double> grid = grid_from(o.grid);
    dips::EmpiricalTail tail;
    if (o.mode == "exact") {
        tail = dips::empirical_tail_exact(t, diag, grid);
    } else if (o.mode == "mc") {
        tail = dips::empirical_tail_mc(t, diag, grid, o.replicates, seed_of(o.seed), o.threads);
    } else {
        throw std::invalid_argument("simulate: --mode must be exact or mc");
    }
    dips::save_json_file(o.output + ".json", dips::tail_to_json(tail));
    dips::save_text_file(o.output + ".csv", dips::tail_to_csv(tail));
    return exit_ok;
}

// ceiling on |Q - E[Q]|, used for automatic dominance grids
double statistic_ceiling(const dips::Tensor4& t, bool include_diagonal) {
    dips::KahanSum s;
    const std::size_t n = t.n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!include_diagonal && i == j) continue;
            double big = 0.0;
            if (t.form() == dips::Tensor4::Form::product) {
                big = std::abs(t.c()(i, j)) * dips::max_abs(t.a());
            } else {
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t l = 0; l < n; ++l)
                        big = std::max(big, std::abs(t(i, j, k, l)));
            }
            s.add(big);
        }
    return 2.0 * s.value();
}

int emit_reports(const std::vector<dips::VerificationReport>& reports,
                 const std::string& output) {
    std::string lines;
    bool any_fail = false;
    for (const auto& r : reports) {
        lines += dips::report_to_json(r).dump() + "\n";
        if (r.status == dips::Verdict::fail) any_fail = true;
    }
    if (output.empty())
        std::cout << lines;
    else
        dips::save_text_file(output, lines);
    return any_fail ? exit_verification : exit_ok;
}

int run_verify(const CommonOpts& o, const std::string& suite, std::size_t count,
               std::size_t size_n, double lambda, const std::string& statistic) {
    std::vector<dips::VerificationReport> reports;
    const dips::RngSeed master = seed_of(o.seed);

    auto push = [&](dips::VerificationReport r, const std::string& name_suffix) {
        r.name += name_suffix;
        r.seed = o.seed;
        reports.push_back(std::move(r));
    };

    if (suite == "decomposition" || suite == "all") {
        for (std::size_t c = 0; c < count; ++c) {
            dips::Rng rng(master.with_stream(1000 + c));
            const std::size_t n = 3 + rng.below(4);
            dips::Tensor4 t = (c % 2 == 0)
                                  ? dips::random_dense_tensor(n, rng)
                                  : dips::Tensor4::product(dips::random_matrix(n, n, rng),
                                                           dips::random_matrix(n, n, rng));
            push(dips::check_decomposition(t), "");
        }
    }
    if (suite == "decoupling" || suite == "all") {
        for (std::size_t c = 0; c < count; ++c) {
            dips::Rng rng(master.with_stream(2000 + c));
            const std::size_t n = 4 + rng.below(3);
            const dips::Tensor4 d = dips::random_degenerate_tensor(n, rng);
            const dips::Permutation p = dips::sample_uniform(n, rng);
            push(dips::check_decoupling_identity(d, p), "");
        }
    }
    if (suite == "randomization" || suite == "all") {
        for (std::size_t c = 0; c < count; ++c) {
            dips::Rng rng(master.with_stream(3000 + c));
            const dips::Tensor4 d = dips::random_rectangular_degenerate(3, 3, rng);
            push(dips::check_randomization_mgf(d, lambda, o.replicates,
                                               master.with_stream(3100 + c), o.threads),
                 "");
        }
    }
    if (suite == "dominance-tail" || suite == "all") {
        for (std::size_t c = 0; c < count; ++c) {
            dips::Rng rng(master.with_stream(4000 + c));
            const dips::Tensor4 d = dips::random_degenerate_tensor(size_n, rng);
            const double v = dips::variance_V(d);
            // dominance only consumes the certified upper end of B
            const dips::Interval b{0.0, dips::certified_b_upper(d),
                                   dips::Method::heuristic_interval};
            const auto grid = dips::make_grid({0.0, statistic_ceiling(d, true), 50});
            const dips::TailCurve curve = dips::make_tail_curve(
                "explicit tail (V, B)", grid,
                [&](double tt) { return dips::bound_degenerate_tail(v, b.upper, tt); },
                {{"V", v}, {"B_upper", b.upper}});
            const dips::EmpiricalTail tail = dips::empirical_tail_mc(
                d, true, grid, o.replicates, master.with_stream(4100 + c), o.threads);
            push(dips::check_dominance(curve, tail), "-tail");
        }
    }
    if (suite == "dominance-bennett" || suite == "all") {
        for (std::size_t c = 0; c < count; ++c) {
            dips::Rng rng(master.with_stream(5000 + c));
            const dips::Matrix cm = dips::random_doubly_centered_zero_diag(size_n, rng);
            const dips::Matrix am = dips::random_matrix(size_n, size_n, rng);
            const dips::Tensor4 t = dips::Tensor4::product(cm, am);
            const double nu = dips::bennett_nu(cm, am);
            const auto grid = dips::make_grid({0.0, statistic_ceiling(t, false), 50});
            const dips::TailCurve curve = dips::make_tail_curve(
                "combinatorial Bennett (explicit 120/540)", grid,
                [&](double tt) { return dips::bound_bennett_explicit(cm, am, nu, tt); },
                {{"nu", nu}});
            const dips::EmpiricalTail tail = dips::empirical_tail_mc(
                t, false, grid, o.replicates, master.with_stream(5100 + c), o.threads);
            push(dips::check_dominance(curve, tail), "-bennett");
        }
    }
    if (suite == "statistic") {
        const dips::KParameter k = dips::KParameter::user(o.k);
        if (statistic == "chatterjee") {
            const dips::ScorePair s = dips::build_chatterjee(size_n);
            const auto grid = dips::make_grid({0.0, 1.5, 50});
            push(dips::check_statistic_bound(
                     s, [&](double tt) { return dips::bound_chatterjee(size_n, k, tt).value; },
                     k, o.mode == "exact", o.replicates, master, grid, o.threads),
                 "");
        } else {
            throw std::invalid_argument("verify --suite statistic supports: chatterjee");
        }
    }
    if (reports.empty()) throw std::invalid_argument("verify: unknown --suite '" + suite + "'");
    return emit_reports(reports, o.output);
}

int run_stats(const CommonOpts& o, const std::string& statistic, std::size_t m_left,
              bool k_given) {
    const dips::KParameter k = dips::KParameter::user(o.k);
    json out;
    out["statistic"] = statistic;

    std::optional<dips::TailCurve> curve;
    const bool want_curve = !o.grid.empty() && k_given;

    if (statistic == "kendall" || statistic == "spearman" || statistic == "pearson") {
        const dips::Sample sample = dips::load_sample_csv(o.input);
        const dips::ScorePair s = dips::build_daniels(sample, dips::parse_score_kind(statistic));
        const dips::Permutation id = dips::Permutation::identity(sample.size());
        out["value"] = dips::statistic_value(s, id);
        out["n"] = sample.size();
        out["normalizer"] = s.normalizer;
        out["constants"] =
            dips::decomposition_constants_to_json(dips::decomposition_constants(dips::score_tensor(s)));
        if (want_curve) {
            const std::size_t n = sample.size();
            const auto grid = grid_from(o.grid);
            if (statistic == "kendall") {
                curve = dips::make_tail_curve(
                    "kendall example bound", grid,
                    [&](double tt) { return dips::bound_kendall(n, k, tt).raw; }, {{"K", k.k}});
            } else if (statistic == "spearman") {
                curve = dips::make_tail_curve(
                    "spearman example bound", grid,
                    [&](double tt) { return dips::bound_spearman(n, k, tt); }, {{"K", k.k}});
            } else {
                double mean_x = 0, mean_y = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    mean_x += sample.x[i];
                    mean_y += sample.y[i];
                }
                mean_x /= static_cast<double>(n);
                mean_y /= static_cast<double>(n);
                double mx = 0, my = 0, sx = 0, sy = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    mx = std::max(mx, std::abs(sample.x[i] - mean_x));
                    my = std::max(my, std::abs(sample.y[i] - mean_y));
                    sx += (sample.x[i] - mean_x) * (sample.x[i] - mean_x);
                    sy += (sample.y[i] - mean_y) * (sample.y[i] - mean_y);
                }
                sx = std::sqrt(sx);
                sy = std::sqrt(sy);
                curve = dips::make_tail_curve(
                    "pearson example bound", grid,
                    [&](double tt) { return dips::bound_pearson(n, mx, my, sx, sy, k, tt); },
                    {{"K", k.k}});
            }
        }
    } else if (statistic == "chatterjee") {
        const dips::Sample sample = dips::load_sample_csv(o.input);
        const dips::Permutation p = dips::chatterjee_permutation(sample);
        out["value"] = dips::chatterjee_xi(p);
        out["n"] = sample.size();
        out["permutation"] = dips::permutation_to_json(p);
        if (want_curve) {
            const std::size_t n = sample.size();
            curve = dips::make_tail_curve(
                "chatterjee example bound", grid_from(o.grid),
                [&](double tt) { return dips::bound_chatterjee(n, k, tt).raw; }, {{"K", k.k}});
        }
    } else if (statistic == "mww") {
        const std::vector<double> pooled = dips::load_pooled_csv(o.input);
        if (m_left == 0 || m_left >= pooled.size())
            throw std::invalid_argument("stats mww: --m must split the pooled sample");
        const std::size_t n_right = pooled.size() - m_left;
        const dips::ScorePair s = dips::build_mww(m_left, n_right, pooled);
        out["value"] =
            dips::statistic_value(s, dips::Permutation::identity(pooled.size()));
        out["m"] = m_left;
        out["n"] = n_right;
        if (want_curve)
            curve = dips::make_tail_curve(
                "mww example bound", grid_from(o.grid),
                [&](double tt) { return dips::bound_mww(m_left, n_right, k, tt).raw; },
                {{"K", k.k}});
    } else if (statistic == "graph") {
        const dips::GraphData gx = dips::load_graph_file(o.input);
        const dips::GraphData gy = dips::load_graph_file(o.input2);
        if (gx.n != gy.n) throw std::invalid_argument("stats graph: graphs must share n");
        const dips::ScorePair s = dips::build_graph_gamma(gx.edges, gy.edges, gx.n);
        out["value"] = dips::statistic_value(s, dips::Permutation::identity(gx.n));
        out["n"] = gx.n;
        const dips::DecompositionConstants gc = dips::graph_constants(gx.edges, gy.edges, gx.n);
        out["constants"] = dips::decomposition_constants_to_json(gc);
        if (want_curve)
            curve = dips::make_tail_curve(
                "graph example bound", grid_from(o.grid),
                [&](double tt) { return dips::bound_graph(gc, k, tt).raw; }, {{"K", k.k}});
    } else if (statistic == "regression") {
        // {"x": [[...]], "e": [...], "treated": int, "p1": optional}
        const json in = dips::load_json_file(o.input);
        if (!in.contains("x") || !in.contains("e") || !in.contains("treated"))
            throw std::invalid_argument("stats regression: expected {x, e, treated}");
        const dips::Matrix x = dips::matrix_from_json(in.at("x"));
        const auto e = in.at("e").get<std::vector<double>>();
        const std::size_t treated = in.at("treated").get<std::size_t>();
        const double p1 = in.contains("p1")
                              ? in.at("p1").get<double>()
                              : static_cast<double>(treated) / static_cast<double>(x.rows);
        const dips::RegressionStatistic stat = dips::regression_bias_statistic(x, e, treated);
        out["value"] =
            dips::evaluate_dips(stat.tensor, dips::Permutation::identity(x.rows), true);
        out["expectation"] = stat.expectation;
        out["n"] = x.rows;
        const dips::RegressionConstants rc = dips::regression_constants(x, e, p1);
        out["constants"] = dips::regression_constants_to_json(rc);
        if (want_curve)
            curve = dips::make_tail_curve(
                "regression-adjustment quadratic-form bound", grid_from(o.grid),
                [&](double tt) {
                    const double denom = rc.v_exact + rc.b_exact * tt;
                    if (tt == 0.0) return 1.0;
                    return denom <= 0.0 ? 0.0 : std::exp(-k.k * tt * tt / denom);
                },
                {{"K", k.k}, {"v", rc.v_exact}, {"b", rc.b_exact}});
    } else {
        throw std::invalid_argument("stats: unknown --statistic '" + statistic + "'");
    }

    if (curve) out["bound"] = dips::curve_to_json(*curve);
    if (o.output.empty())
        std::cout << out.dump(2) << "\n";
    else {
        dips::save_json_file(o.output + ".json", out);
        if (curve) dips::save_text_file(o.output + ".csv", dips::curve_to_csv(*curve));
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"double-indexed permutation statistics: decomposition, constants, tail bounds "
                 "and verification"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string bound_kind = "degenerate";
    std::string suite = "all";
    std::string statistic;
    std::size_t exact_cap = 7;
    std::size_t count = 5;
    std::size_t size_n = 20;
    std::size_t m_left = 0;
    double lambda = 0.01;
    bool explicit_constants = false;

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        auto* in = cmd->add_option("--input", o.input, "input file");
        if (needs_input) in->required();
        cmd->add_option("--input2", o.input2, "second input file (graph statistic)");
        cmd->add_option("--output", o.output, "output path or prefix");
        cmd->add_option("--config", o.config, "JSON config file (flags win)");
        cmd->add_option("--seed", o.seed, "master seed; all randomness flows from it");
        cmd->add_option("--replicates", o.replicates, "Monte Carlo replicates");
        cmd->add_option("--grid", o.grid, "t grid as tmin:tmax:points");
        cmd->add_option("--mode", o.mode, "exact|mc");
        cmd->add_option("--threads", o.threads, "worker cap (0 = all cores)");
        cmd->add_option("--k", o.k, "universal constant K for the K-form bounds");
        cmd->add_option("--include-diagonal", o.include_diagonal,
                        "1/0: include i = j pairs of the DIPS sum (required for raw tensors)")
            ->check(CLI::Range(0, 1));
    };

    CLI::App* cmd_decompose = app.add_subcommand("decompose", "Hoeffding-type decomposition");
    add_common(cmd_decompose, true);

    CLI::App* cmd_constants = app.add_subcommand("constants", "bound constants of a tensor");
    add_common(cmd_constants, true);
    cmd_constants->add_option("--exact-cap", exact_cap, "exhaustive B up to this N");

    CLI::App* cmd_bound = app.add_subcommand("bound", "evaluate a tail bound on a grid");
    add_common(cmd_bound, true);
    cmd_bound->add_option("--bound", bound_kind, "degenerate|two-term|bennett|hw-general|hw-psd");
    cmd_bound->add_option("--exact-cap", exact_cap, "exhaustive B up to this N");
    cmd_bound->add_flag("--explicit", explicit_constants, "use the explicit proof constants");

    CLI::App* cmd_simulate = app.add_subcommand("simulate", "empirical survival function");
    add_common(cmd_simulate, true);

    CLI::App* cmd_verify = app.add_subcommand("verify", "verification suites (JSON lines)");
    add_common(cmd_verify, false);
    cmd_verify->add_option("--suite", suite,
                           "decomposition|decoupling|randomization|dominance-tail|"
                           "dominance-bennett|statistic|all");
    cmd_verify->add_option("--count", count, "instances per suite");
    cmd_verify->add_option("--n", size_n, "tensor size for dominance/statistic suites");
    cmd_verify->add_option("--lambda", lambda, "MGF argument for the randomization suite");
    cmd_verify->add_option("--statistic", statistic, "statistic for --suite statistic");

    CLI::App* cmd_stats = app.add_subcommand("stats", "example statistics and their bounds");
    add_common(cmd_stats, true);
    cmd_stats
        ->add_option("--statistic", statistic,
                     "mww|pearson|kendall|spearman|chatterjee|graph|regression")
        ->required();
    cmd_stats->add_option("--m", m_left, "size of the first sample (mww)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        CLI::App* active = app.get_subcommands().front();
        if (!o.config.empty()) {
            ConfigBacked cb;
            cb.load(o.config);
            cb.fill(*active, "--input", "input", o.input);
            cb.fill(*active, "--output", "output", o.output);
            cb.fill(*active, "--seed", "seed", o.seed);
            cb.fill(*active, "--replicates", "replicates", o.replicates);
            cb.fill(*active, "--grid", "grid", o.grid);
            cb.fill(*active, "--mode", "mode", o.mode);
            cb.fill(*active, "--threads", "threads", o.threads);
            cb.fill(*active, "--k", "k", o.k);
            cb.fill(*active, "--include-diagonal", "include_diagonal", o.include_diagonal);
        }

        const bool k_given = active->count("--k") > 0 ||
                             (!o.config.empty() &&
                              dips::load_json_file(o.config).contains("k"));
        if (active == cmd_decompose) return run_decompose(o);
        if (active == cmd_constants) return run_constants(o, exact_cap);
        if (active == cmd_bound) {
            if (o.grid.empty()) throw std::invalid_argument("bound: --grid is required");
            if (o.output.empty()) throw std::invalid_argument("bound: --output is required");
            return run_bound(o, bound_kind, exact_cap, explicit_constants, k_given);
        }
        if (active == cmd_simulate) {
            if (o.grid.empty()) throw std::invalid_argument("simulate: --grid is required");
            if (o.output.empty()) throw std::invalid_argument("simulate: --output is required");
            return run_simulate(o);
        }
        if (active == cmd_verify) return run_verify(o, suite, count, size_n, lambda, statistic);
        if (active == cmd_stats) return run_stats(o, statistic, m_left, k_given);
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    }
}
