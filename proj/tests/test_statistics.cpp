#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "dips/statistics.hpp"
#include "support.hpp"

using namespace dips;

TEST_CASE("MWW: separated samples and the direct pair count") {
    // all X below all Y
    ScorePair s = build_mww(3, 4, {1, 2, 3, 10, 11, 12, 13});
    CHECK(statistic_value(s, Permutation::identity(7)) == doctest::Approx(12.0));
    // all Y below all X
    s = build_mww(3, 4, {10, 11, 12, 1, 2, 3, 4});
    CHECK(statistic_value(s, Permutation::identity(7)) == doctest::Approx(0.0));

    Rng rng(RngSeed{60, 0});
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> pooled(6);
        for (auto& v : pooled) v = rng.normal();
        const ScorePair sp = build_mww(3, 3, pooled);
        double direct = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 3; j < 6; ++j)
                if (pooled[i] < pooled[j]) direct += 1.0;
        CHECK(statistic_value(sp, Permutation::identity(6)) == doctest::Approx(direct));
    }

    CHECK_THROWS_AS(build_mww(2, 2, {1.0, 2.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(build_mww(0, 4, {1.0, 2.0, 3.0, 4.0}), std::invalid_argument);
}

TEST_CASE("Daniels scores recover the classical coefficients") {
    const std::vector<double> x{0.3, -1.2, 2.4, 0.9, -0.1};

    // perfect concordance / discordance for Kendall
    Sample same = Sample::make(x, x);
    CHECK(statistic_value(build_daniels(same, ScoreKind::kendall), Permutation::identity(5)) ==
          doctest::Approx(1.0));
    std::vector<double> reversed = x;
    for (auto& v : reversed) v = -v;
    Sample anti = Sample::make(x, reversed);
    CHECK(statistic_value(build_daniels(anti, ScoreKind::kendall), Permutation::identity(5)) ==
          doctest::Approx(-1.0));

    Rng rng(RngSeed{61, 0});
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> xs(5), ys(5);
        for (auto& v : xs) v = rng.normal();
        for (auto& v : ys) v = rng.normal();
        const Sample sample = Sample::make(xs, ys);
        const Permutation id = Permutation::identity(5);
        CHECK(statistic_value(build_daniels(sample, ScoreKind::spearman), id) ==
              doctest::Approx(oracle::spearman_direct(xs, ys)).epsilon(1e-12));
        CHECK(statistic_value(build_daniels(sample, ScoreKind::kendall), id) ==
              doctest::Approx(oracle::kendall_direct(xs, ys)).epsilon(1e-12));
        CHECK(statistic_value(build_daniels(sample, ScoreKind::pearson), id) ==
              doctest::Approx(oracle::pearson_direct(xs, ys)).epsilon(1e-12));
    }

    CHECK_THROWS_AS(build_daniels(Sample::make({1, 1, 2}, {1, 2, 3}), ScoreKind::kendall),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_daniels(Sample::make({1, 1, 1}, {1, 1, 1}), ScoreKind::pearson),
                    std::invalid_argument);
}

TEST_CASE("DIPS form equals the classical formula on permuted samples") {
    Rng rng(RngSeed{62, 0});
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 3 + rng.below(10);  // up to 12
        std::vector<double> xs(n), ys(n);
        for (auto& v : xs) v = rng.normal();
        for (auto& v : ys) v = rng.normal();
        const Sample sample = Sample::make(xs, ys);
        const Permutation p = sample_uniform(n, rng);
        const auto yp = oracle::apply_permutation(ys, p);
        CHECK(oracle::close(statistic_value(build_daniels(sample, ScoreKind::kendall), p),
                            oracle::kendall_direct(xs, yp), 1e-10));
        CHECK(oracle::close(statistic_value(build_daniels(sample, ScoreKind::spearman), p),
                            oracle::spearman_direct(xs, yp), 1e-10));
        CHECK(oracle::close(statistic_value(build_daniels(sample, ScoreKind::pearson), p),
                            oracle::pearson_direct(xs, yp), 1e-10));
    }
}

TEST_CASE("Daniels R stays inside [-1, 1]") {
    Rng rng(RngSeed{63, 0});
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t n = 3 + rng.below(8);
        std::vector<double> xs(n), ys(n);
        for (auto& v : xs) v = rng.normal();
        for (auto& v : ys) v = rng.normal();
        const Sample sample = Sample::make(xs, ys);
        const Permutation p = sample_uniform(n, rng);
        for (ScoreKind kind : {ScoreKind::pearson, ScoreKind::kendall, ScoreKind::spearman}) {
            const double r = statistic_value(build_daniels(sample, kind), p);
            CHECK(r <= 1.0 + 1e-12);
            CHECK(r >= -1.0 - 1e-12);
        }
    }
}

TEST_CASE("Kendall R has exact null mean zero at N = 5") {
    const std::vector<double> x{0.3, -1.2, 2.4, 0.9, -0.1};
    const std::vector<double> y{1.0, 0.2, -0.5, 1.7, 0.8};
    const ScorePair s = build_daniels(Sample::make(x, y), ScoreKind::kendall);
    KahanSum mean;
    for_each_permutation(5, [&](const Permutation& p) { mean.add(statistic_value(s, p)); });
    CHECK(std::abs(mean.value() / 120.0) < 1e-13);
    CHECK(std::abs(exact_expectation(score_tensor(s), true)) < 1e-13);
}

TEST_CASE("Chatterjee xi: hand values, reversal invariance, enumeration range") {
    CHECK(chatterjee_xi(Permutation::identity(3)) == doctest::Approx(0.25));
    // 1-based (1,3,2) is 0-based (0,2,1): sum = 2 + 1 = 3, xi = 1 - 9/8
    CHECK(chatterjee_xi(Permutation::from_map({0, 2, 1})) == doctest::Approx(-0.125));
    CHECK_THROWS_AS(chatterjee_xi(Permutation::identity(1)), std::invalid_argument);
    CHECK_THROWS_AS(build_chatterjee(1), std::invalid_argument);

    for (std::size_t n = 3; n <= 8; ++n) {
        std::vector<int> rev(n);
        for (std::size_t i = 0; i < n; ++i) rev[i] = static_cast<int>(n - 1 - i);
        CHECK(chatterjee_xi(Permutation::from_map(rev)) ==
              doctest::Approx(chatterjee_xi(Permutation::identity(n))));
    }

    for (std::size_t n : {3ul, 4ul, 5ul, 6ul}) {
        double best = -2.0, worst = 2.0;
        std::vector<std::vector<int>> argmax;
        for_each_permutation(n, [&](const Permutation& p) {
            const double xi = chatterjee_xi(p);
            if (xi > best + 1e-15) {
                best = xi;
                argmax.clear();
            }
            if (xi >= best - 1e-15) argmax.push_back(p.map);
            worst = std::min(worst, xi);
        });
        CHECK(best == doctest::Approx(1.0 - 3.0 / (n + 1.0)).epsilon(1e-12));
        CHECK(worst >= -0.5);
        // identity and reversal both attain the maximum
        std::vector<int> id(n), rev(n);
        for (std::size_t i = 0; i < n; ++i) {
            id[i] = static_cast<int>(i);
            rev[i] = static_cast<int>(n - 1 - i);
        }
        CHECK(std::count(argmax.begin(), argmax.end(), id) == 1);
        CHECK(std::count(argmax.begin(), argmax.end(), rev) == 1);
    }
}

TEST_CASE("Chatterjee DIPS form agrees with the direct sum for random permutations") {
    Rng rng(RngSeed{64, 0});
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 2 + rng.below(11);
        const Permutation p = sample_uniform(n, rng);
        const ScorePair s = build_chatterjee(n);
        CHECK(statistic_value(s, p) == doctest::Approx(chatterjee_xi(p)).epsilon(1e-13));
    }
}

TEST_CASE("Chatterjee permutation from data") {
    // y increasing in x: identity ranks
    const Sample inc = Sample::make({1, 2, 3, 4}, {10, 20, 30, 40});
    CHECK(chatterjee_permutation(inc) == Permutation::identity(4));
    // x out of order
    const Sample mixed = Sample::make({3, 1, 2}, {30, 10, 20});
    CHECK(chatterjee_permutation(mixed) == Permutation::identity(3));
    CHECK_THROWS_AS(chatterjee_permutation(Sample::make({1, 1, 2}, {1, 2, 3})),
                    std::invalid_argument);
}

TEST_CASE("graph gamma counts common ordered edges") {
    using Edges = std::vector<std::pair<int, int>>;
    Edges ex{{0, 1}, {1, 0}, {2, 3}};
    Edges ey{{1, 2}, {3, 2}};
    const ScorePair disjoint = build_graph_gamma(ex, ey, 4);
    CHECK(statistic_value(disjoint, Permutation::identity(4)) == doctest::Approx(0.0));

    Edges complete;
    for (int u = 0; u < 5; ++u)
        for (int v = 0; v < 5; ++v)
            if (u != v) complete.emplace_back(u, v);
    const ScorePair full = build_graph_gamma(complete, complete, 5);
    CHECK(statistic_value(full, Permutation::identity(5)) == doctest::Approx(20.0));

    Rng rng(RngSeed{65, 0});
    Edges gx, gy;
    for (int u = 0; u < 6; ++u)
        for (int v = 0; v < 6; ++v) {
            if (u == v) continue;
            if (rng.below(2)) gx.emplace_back(u, v);
            if (rng.below(2)) gy.emplace_back(u, v);
        }
    std::set<std::pair<int, int>> sy(gy.begin(), gy.end());
    double common = 0.0;
    for (const auto& e : gx)
        if (sy.count(e)) common += 1.0;
    CHECK(statistic_value(build_graph_gamma(gx, gy, 6), Permutation::identity(6)) ==
          doctest::Approx(common));

    CHECK_THROWS_AS(build_graph_gamma(Edges{{2, 2}}, Edges{}, 4), std::invalid_argument);
}

TEST_CASE("regression bias statistic: constant cases and the MC mean") {
    Rng rng(RngSeed{66, 0});
    const std::size_t n = 8, p = 2;
    Matrix x = random_matrix(n, p, rng);
    for (std::size_t j = 0; j < p; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) x(i, j) -= mean;
    }
    // residual from a random response
    const Matrix xt = transpose(x);
    const Matrix xtx = multiply(xt, x);
    Matrix ginv(p, p);
    for (std::size_t j = 0; j < p; ++j) {
        std::vector<double> unit(p, 0.0);
        unit[j] = 1.0;
        const auto col = solve_spd(xtx, unit);
        for (std::size_t i = 0; i < p; ++i) ginv(i, j) = col[i];
    }
    const Matrix h = multiply(multiply(x, ginv), xt);
    std::vector<double> y(n), e(n);
    for (auto& v : y) v = rng.normal();
    for (std::size_t i = 0; i < n; ++i) {
        e[i] = y[i];
        for (std::size_t j = 0; j < n; ++j) e[i] -= h(i, j) * y[j];
    }

    // treated_count = N: statistic is the full sum for every permutation
    const RegressionStatistic full = regression_bias_statistic(x, e, n);
    const double q_total = evaluate_dips(full.tensor, Permutation::identity(n), true);
    for (int rep = 0; rep < 10; ++rep) {
        const Permutation pi = sample_uniform(n, rng);
        CHECK(evaluate_dips(full.tensor, pi, true) == doctest::Approx(q_total).epsilon(1e-12));
    }
    CHECK(full.expectation == doctest::Approx(q_total).epsilon(1e-10));

    // e = 0: statistic identically zero
    const RegressionStatistic zero = regression_bias_statistic(x, std::vector<double>(n, 0.0), 4);
    CHECK(evaluate_dips(zero.tensor, Permutation::identity(n), true) == 0.0);

    // MC mean within 4 sigma of the closed form
    const RegressionStatistic half = regression_bias_statistic(x, e, 4);
    const std::size_t draws = 100000;
    KahanSum acc, acc2;
    RngSeed seed{555, 0};
    for (std::size_t r = 0; r < draws; ++r) {
        const double v =
            evaluate_dips(half.tensor, sample_uniform(n, seed.with_stream(r)), true);
        acc.add(v);
        acc2.add(v * v);
    }
    const double mean = acc.value() / draws;
    const double var = std::max(0.0, acc2.value() / draws - mean * mean);
    const double se = std::sqrt(var / draws);
    CHECK(std::abs(mean - half.expectation) <= 4.0 * se + 1e-12);

    CHECK_THROWS_AS(regression_bias_statistic(x, e, 0), std::invalid_argument);
    CHECK_THROWS_AS(regression_bias_statistic(x, e, n + 1), std::invalid_argument);
}
