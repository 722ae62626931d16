#include <doctest.h>

#include <cmath>

#include "dips/bounds.hpp"
#include "dips/generate.hpp"
#include "support.hpp"

using namespace dips;

TEST_CASE("main tail bound: value at zero, frozen arithmetic, monotonicity") {
    CHECK(bound_degenerate_tail(3.0, 2.0, 0.0) == 1.0);
    // V=1, B=0, t=2000: t^2 / (400000 V) = 10
    CHECK(bound_degenerate_tail(1.0, 0.0, 2000.0) == doctest::Approx(std::exp(-10.0)).epsilon(1e-14));
    CHECK_THROWS_AS(bound_degenerate_tail(1.0, 1.0, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(bound_degenerate_tail(-1.0, 1.0, 0.5), std::invalid_argument);

    Rng rng(RngSeed{50, 0});
    for (int rep = 0; rep < 5; ++rep) {
        const double v = uniform_in(rng, 0.0, 10.0), b = uniform_in(rng, 0.0, 3.0);
        double prev = 1.0 + 1e-15;
        for (int g = 0; g < 100; ++g) {
            const double cur = bound_degenerate_tail(v, b, 0.37 * g);
            CHECK(cur <= prev);
            prev = cur;
        }
    }
    // degenerate statistic: zero denominators
    CHECK(bound_degenerate_tail(0.0, 0.0, 1.0) == 0.0);
    CHECK(bound_degenerate_tail(0.0, 0.0, 0.0) == 1.0);
}

TEST_CASE("main MGF bound: admissible range and divergence at the edge") {
    CHECK(bound_degenerate_mgf(1.0, 1.0, 0.0) == 1.0);
    CHECK(bound_degenerate_mgf(0.0, 1.0, 1e-5) == 1.0);
    CHECK(bound_degenerate_mgf(1.0, 0.0, 0.001) == doctest::Approx(std::exp(0.1)).epsilon(1e-14));
    CHECK_THROWS_AS(bound_degenerate_mgf(1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bound_degenerate_mgf(1.0, 1.0, -0.1), std::invalid_argument);

    for (double b : {0.5, 1.0, 4.0}) {
        const double lam = 0.999999 / (5400.0 * b);
        CHECK(bound_degenerate_mgf(1.0, b, lam) > 1e6);
        for (double lam2 : {0.1 * lam, 0.5 * lam, 0.9 * lam})
            CHECK(bound_degenerate_mgf(1.0, b, lam2) >= 1.0);
        CHECK(std::isinf(bound_degenerate_mgf(1.0, b, 1.0 / (5400.0 * b))));
    }
}

namespace {

// 8x8 doubly centered block matrix with ||C||_op = 1 and ||C||_F^2 = 4
Matrix hw_example_matrix() {
    Matrix c(8, 8, 0.0);
    for (std::size_t b = 0; b < 4; ++b) {
        const std::size_t o = 2 * b;
        c(o, o) = 0.5;
        c(o, o + 1) = -0.5;
        c(o + 1, o) = -0.5;
        c(o + 1, o + 1) = 0.5;
    }
    return c;
}

}  // namespace

TEST_CASE("Hanson-Wright bounds: frozen example, degenerate flag, centering check") {
    const Matrix c = hw_example_matrix();
    CHECK(frobenius_norm(c) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(operator_norm(c) == doctest::Approx(1.0).epsilon(1e-9));

    const KParameter k = KParameter::user(1.0);
    const BoundValue b0 = bound_hanson_wright_general(c, Interval{1.0, 1.0, Method::exact}, k, 0.0);
    CHECK(b0.value == 1.0);
    // F^2 = 4, op = 1, max-term = 1, t = 2: exp(-4 / (4 + 2*2)) = exp(-1/2)
    const BoundValue b = bound_hanson_wright_general(c, Interval{1.0, 1.0, Method::exact}, k, 2.0);
    CHECK(b.value == doctest::Approx(std::exp(-0.5)).epsilon(1e-9));

    const BoundValue psd0 = bound_hanson_wright_psd(Matrix(4, 4, 0.0), k, 1.0);
    CHECK(psd0.degenerate);
    CHECK(psd0.value == 1.0);

    Matrix notcentered(3, 3, 1.0);
    CHECK_THROWS_AS(bound_hanson_wright_psd(notcentered, k, 1.0), std::invalid_argument);
}

TEST_CASE("Bennett bound: explicit constants, monotone limit in nu, validation") {
    // assemble C (doubly centered, zero diagonal) and A with
    // ||C||_op^2 ||A||_F^2 = 20 at N = 20
    Rng rng(RngSeed{51, 0});
    const Matrix c = random_doubly_centered_zero_diag(20, rng);
    const double cop = operator_norm(c);
    Matrix a(20, 20, 1.0);
    const double alpha = std::sqrt(20.0 / (400.0 * cop * cop));
    for (auto& v : a.data) v *= alpha;
    const double prod = cop * cop * frobenius_norm(a) * frobenius_norm(a);
    REQUIRE(prod == doctest::Approx(20.0).epsilon(1e-9));

    // explicit form at nu = 1, t = 120:
    // exp(-(120/120) log(1 + 120/((540/20) * 20))) = 1/(1 + 2/9) = 9/11
    CHECK(bound_bennett_explicit(c, a, 1.0, 120.0) ==
          doctest::Approx(9.0 / 11.0).epsilon(1e-9));
    CHECK(bound_bennett_explicit(c, a, 1.0, 0.0) == 1.0);

    double prev = 0.0;
    for (double nu : {0.5, 1.0, 2.0, 8.0, 64.0, 512.0}) {
        const double cur = bound_bennett_explicit(c, a, nu, 10.0);
        CHECK(cur >= prev);
        prev = cur;
    }
    CHECK(prev <= 1.0);

    Matrix diag = c;
    diag(3, 3) = 0.5;
    CHECK_THROWS_AS(bound_bennett_explicit(diag, a, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bound_bennett_explicit(c, a, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bound_bennett_explicit(c, a, 1.0, -1.0), std::invalid_argument);

    // K form with K = 120 and the 540/120 ratio folded in differs from the
    // explicit form; just pin its shape at t = 0 and monotonicity
    const KParameter k = KParameter::user(2.0);
    CHECK(bound_bennett_k(c, a, 1.0, k, 0.0) == 1.0);
    CHECK(bound_bennett_k(c, a, 1.0, k, 5.0) < 1.0);
}

TEST_CASE("two-term bound: clamping and degenerate terms") {
    const KParameter k = KParameter::user(1.0);
    DecompositionConstants cc;
    cc.v_a = 1.0;
    cc.b_a = 0.0;
    cc.v_d = 1.0;
    cc.b_d = Interval{0.0, 0.0, Method::exact};
    const TwoTermBound at0 = bound_two_term(cc, k, 0.0);
    CHECK(at0.raw == doctest::Approx(2.0));
    CHECK(at0.value == 1.0);
    CHECK(at0.clamped);

    const TwoTermBound at1 = bound_two_term(cc, k, 1.0);
    CHECK(at1.raw == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));

    DecompositionConstants degenerate_linear;
    degenerate_linear.v_a = 0.0;
    degenerate_linear.b_a = 0.0;
    degenerate_linear.v_d = 1.0;
    degenerate_linear.b_d = Interval{0.0, 0.0, Method::exact};
    const TwoTermBound d1 = bound_two_term(degenerate_linear, k, 1.0);
    CHECK(d1.raw == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("example bounds evaluate their displays verbatim") {
    const KParameter k = KParameter::user(1.0);

    const TwoTermBound ch = bound_chatterjee(10, k, 1.0);
    CHECK(ch.raw == doctest::Approx(std::exp(-100.0 / 11.0) +
                                    std::exp(-10.0 / (1.0 + std::sqrt(10.0))))
                        .epsilon(1e-12));
    CHECK(bound_chatterjee(10, k, 0.0).raw == doctest::Approx(2.0));
    CHECK(bound_chatterjee(10, k, 0.0).value == 1.0);

    // m = n = N/2: first denominator N m n + N t stays positive
    const TwoTermBound mw = bound_mww(4, 4, k, 1.0);
    CHECK(mw.raw > 0.0);
    CHECK(mw.raw == doctest::Approx(std::exp(-1.0 / (8.0 * 16.0 + 8.0)) +
                                    std::exp(-1.0 / (256.0 / 64.0 + 4.0)))
                        .epsilon(1e-12));

    const TwoTermBound kd = bound_kendall(6, k, 0.5);
    CHECK(kd.raw == doctest::Approx(std::exp(-6.0 * 0.25 / 1.5) +
                                    std::exp(-36.0 * 0.25 / (1.0 + 3.0)))
                        .epsilon(1e-12));
    CHECK(bound_spearman(6, k, 0.5) == doctest::Approx(std::exp(-6.0 * 0.25 / 1.5)).epsilon(1e-12));

    CHECK(bound_pearson(10, 2.0, 3.0, 4.0, 5.0, k, 0.5) ==
          doctest::Approx(std::exp(-0.25 / (0.1 + (6.0 / 20.0) * 0.5))).epsilon(1e-12));
    CHECK_THROWS_AS(bound_pearson(10, 1.0, 1.0, 0.0, 1.0, k, 0.5), std::invalid_argument);
}

TEST_CASE("tail curves: grid validation, clamping flags, invariants") {
    CHECK_THROWS_AS(parse_grid("nonsense"), std::invalid_argument);
    CHECK_THROWS_AS(parse_grid("0:1"), std::invalid_argument);
    const GridSpec spec = parse_grid("0:2:5");
    const auto grid = make_grid(spec);
    REQUIRE(grid.size() == 5);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 2.0);

    const KParameter k = KParameter::user(1.0);
    DecompositionConstants cc;
    cc.v_a = cc.v_d = 1.0;
    cc.b_a = 0.0;
    cc.b_d = Interval{0.5, 0.5, Method::exact};
    const TailCurve curve = make_tail_curve(
        "two-term", grid, [&](double t) { return bound_two_term(cc, k, t).raw; });
    CHECK(curve.bound[0] == 1.0);
    CHECK(curve.clamped_anywhere);
    for (std::size_t i = 0; i < curve.bound.size(); ++i) {
        CHECK(curve.bound[i] <= 1.0);
        CHECK(curve.bound[i] >= 0.0);
        if (i > 0) CHECK(curve.bound[i] <= curve.bound[i - 1] + 1e-15);
    }
    CHECK_THROWS_AS(make_tail_curve("bad", {1.0, 1.0}, [](double) { return 1.0; }),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_tail_curve("bad", {-1.0, 1.0}, [](double) { return 1.0; }),
                    std::invalid_argument);
}

TEST_CASE("K parameter must be positive") {
    CHECK_THROWS_AS(KParameter::user(0.0), std::invalid_argument);
    CHECK_THROWS_AS(KParameter::user(-2.0), std::invalid_argument);
    CHECK(KParameter::user(0.5).source == "user");
}
