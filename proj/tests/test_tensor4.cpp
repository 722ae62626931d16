#include <doctest.h>

#include <cmath>
#include <limits>

#include "dips/json_io.hpp"
#include "dips/tensor4.hpp"
#include "support.hpp"

using namespace dips;

TEST_CASE("dense construction enforces the storage invariants") {
    CHECK_THROWS_AS(Tensor4::dense(3, std::vector<double>(80, 0.0)), std::invalid_argument);
    std::vector<double> bad(16, 0.0);
    bad[7] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(Tensor4::dense(2, bad), std::invalid_argument);
    bad[7] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Tensor4::dense(2, bad), std::invalid_argument);
    CHECK_NOTHROW(Tensor4::dense(2, std::vector<double>(16, 1.0)));
}

TEST_CASE("product form evaluates as c(i,j) * a(k,l) and densifies consistently") {
    Rng rng(RngSeed{11, 0});
    const Tensor4 t = Tensor4::product(random_matrix(3, 3, rng), random_matrix(3, 3, rng));
    const Tensor4 d = t.densified();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t l = 0; l < 3; ++l) CHECK(t(i, j, k, l) == d(i, j, k, l));
    CHECK(t.max_abs() == doctest::Approx(d.max_abs()).epsilon(1e-12));
}

TEST_CASE("partial_average of a constant tensor is the constant") {
    const Tensor4 t = Tensor4::constant(4, 4, 2.5);
    for (auto slots : {std::vector<int>{1}, std::vector<int>{4}, std::vector<int>{1, 2, 3, 4}}) {
        const Tensor4 avg = partial_average(t, slots);
        CHECK(avg(1, 2, 3, 0) == doctest::Approx(2.5));
    }
    const Tensor4 z = partial_average(Tensor4::zeros(3, 3), {2});
    CHECK(z.max_abs() == 0.0);
}

TEST_CASE("partial_average over slot 4 matches a direct loop") {
    Rng rng(RngSeed{12, 0});
    const Tensor4 t = random_dense_tensor(3, rng);
    const Tensor4 avg = partial_average(t, {4});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k)
                CHECK(avg(i, j, k, 1) ==
                      doctest::Approx(oracle::slot4_mean(t, i, j, k)).epsilon(1e-13));
}

TEST_CASE("partial_average rejects an empty slot set and bad slot ids") {
    const Tensor4 t = Tensor4::zeros(2, 2);
    CHECK_THROWS_AS(partial_average(t, std::vector<int>{}), std::invalid_argument);
    CHECK_THROWS_AS(partial_average(t, {0}), std::invalid_argument);
    CHECK_THROWS_AS(partial_average(t, {5}), std::invalid_argument);
}

TEST_CASE("degeneracy: zero yes, nonzero constant no, decomposed d yes") {
    CHECK(is_degenerate(Tensor4::zeros(3, 3), 1e-9));
    CHECK_FALSE(is_degenerate(Tensor4::constant(3, 3, 0.7), 1e-9));
    Rng rng(RngSeed{13, 0});
    const Decomposition dec = hoeffding_decompose(random_dense_tensor(4, rng));
    CHECK(is_degenerate(dec.d, 1e-9));
    CHECK_THROWS_AS(is_degenerate(Tensor4::zeros(2, 2), -1.0), std::invalid_argument);
}

TEST_CASE("decomposition of an already degenerate tensor is trivial") {
    Rng rng(RngSeed{14, 0});
    const Tensor4 d0 = random_degenerate_tensor(4, rng);
    const Decomposition dec = hoeffding_decompose(d0);
    CHECK(max_abs(dec.a) < 1e-12);
    CHECK(std::abs(dec.constant) < 1e-12);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t k = 0; k < 4; ++k)
                for (std::size_t l = 0; l < 4; ++l)
                    CHECK(dec.d(i, j, k, l) == doctest::Approx(d0(i, j, k, l)).epsilon(1e-10));
}

TEST_CASE("decomposition of a constant tensor is pure constant") {
    const Decomposition dec = hoeffding_decompose(Tensor4::constant(5, 5, 0.3));
    CHECK(max_abs(dec.a) < 1e-13);
    CHECK(dec.d.max_abs() < 1e-13);
    CHECK(dec.constant == doctest::Approx(25.0 * 0.3));
    CHECK_THROWS_AS(hoeffding_decompose(Tensor4::zeros(2, 3)), std::invalid_argument);
}

TEST_CASE("reconstruction identity holds for every permutation at N = 4") {
    Rng rng(RngSeed{15, 0});
    const Tensor4 w = random_dense_tensor(4, rng);
    const Decomposition dec = hoeffding_decompose(w);
    for_each_permutation(4, [&](const Permutation& p) {
        const double lhs = evaluate_dips(w, p, true);
        double lin = 0.0;
        for (std::size_t i = 0; i < 4; ++i) lin += dec.a(i, static_cast<std::size_t>(p.map[i]));
        const double rhs = 4.0 * lin + evaluate_dips(dec.d, p, true) + dec.constant;
        CHECK(oracle::close(lhs, rhs, 1e-10));
    });
}

TEST_CASE("decomposition is idempotent on its degenerate part") {
    Rng rng(RngSeed{16, 0});
    const Decomposition first = hoeffding_decompose(random_dense_tensor(5, rng));
    const Decomposition second = hoeffding_decompose(first.d);
    CHECK(max_abs(second.a) < 1e-10);
    CHECK(std::abs(second.constant) < 1e-10);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t l = 0; l < 5; ++l)
            CHECK(second.d(i, 2, 3, l) == doctest::Approx(first.d(i, 2, 3, l)).epsilon(1e-10));
}

TEST_CASE("decomposing a product tensor equals decomposing its densified copy") {
    Rng rng(RngSeed{17, 0});
    const Tensor4 t = Tensor4::product(random_matrix(4, 4, rng), random_matrix(4, 4, rng));
    const Decomposition a = hoeffding_decompose(t);
    const Decomposition b = hoeffding_decompose(t.densified());
    CHECK(a.constant == doctest::Approx(b.constant).epsilon(1e-12));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(a.a(i, j) == doctest::Approx(b.a(i, j)).epsilon(1e-12));
}

TEST_CASE("tilde centering kills all four restricted partial averages") {
    Rng rng(RngSeed{18, 0});
    const Tensor4 t = random_dense_tensor(6, rng);
    const SplitBijection sb = sample_split(6, rng);
    const IndexSplit& split = sb.split;
    const Tensor4 tl = tilde_d_restrict(t, split);

    const auto ic = split.i_complement();
    const auto jc = split.j_complement();
    double worst = 0.0;
    for (int j : ic)
        for (int k : split.j_set)
            for (int l : jc) {
                double s = 0.0;
                for (int i : split.i_set) s += tl(i, j, k, l);
                worst = std::max(worst, std::abs(s) / split.i_set.size());
            }
    for (int i : split.i_set)
        for (int j : ic)
            for (int k : split.j_set) {
                double s = 0.0;
                for (int l : jc) s += tl(i, j, k, l);
                worst = std::max(worst, std::abs(s) / jc.size());
            }
    CHECK(worst < 1e-12);
}

TEST_CASE("tilde centering is a projection and maps constants to zero") {
    Rng rng(RngSeed{19, 0});
    const Tensor4 t = random_dense_tensor(5, rng);
    const SplitBijection sb = sample_split(5, rng);
    const Tensor4 once = tilde_d_restrict(t, sb.split);
    const Tensor4 twice = tilde_d_restrict(once, sb.split);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            for (std::size_t k = 0; k < 5; ++k)
                for (std::size_t l = 0; l < 5; ++l)
                    CHECK(twice(i, j, k, l) == doctest::Approx(once(i, j, k, l)).epsilon(1e-11));

    const Tensor4 c = tilde_d_restrict(Tensor4::constant(5, 5, 3.0), sb.split);
    CHECK(c.max_abs() < 1e-12);
}

TEST_CASE("tilde centering validates the split") {
    const Tensor4 t = Tensor4::zeros(4, 4);
    CHECK_THROWS_AS(IndexSplit::make(4, {0, 1, 2}, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(IndexSplit::make(4, {0, 0}, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(IndexSplit::make(4, {0, 7}, {0, 1}), std::invalid_argument);
    const IndexSplit wrong = IndexSplit::make(6, {0, 1, 2}, {3, 4, 5});
    CHECK_THROWS_AS(tilde_d_restrict(t, wrong), std::invalid_argument);
}

TEST_CASE("product-form operations agree with the densified path") {
    Rng rng(RngSeed{25, 0});
    const Tensor4 t = Tensor4::product(random_matrix(4, 4, rng), random_matrix(4, 4, rng));
    const Tensor4 d = t.densified();
    for (auto slots : {std::vector<int>{1}, std::vector<int>{3}, std::vector<int>{2, 4}}) {
        const Tensor4 ap = partial_average(t, slots);
        const Tensor4 ad = partial_average(d, slots);
        CHECK(ap.form() == Tensor4::Form::product);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t l = 0; l < 4; ++l)
                CHECK(ap(i, 1, 2, l) == doctest::Approx(ad(i, 1, 2, l)).epsilon(1e-12));
    }
    CHECK(max_partial_average(t) == doctest::Approx(max_partial_average(d)).epsilon(1e-12));

    // doubly centered factors make the product tensor degenerate, and the
    // product path sees it without densifying
    const Tensor4 centered = Tensor4::product(doubly_center(random_matrix(5, 5, rng)),
                                              doubly_center(random_matrix(5, 5, rng)));
    CHECK(is_degenerate(centered, 1e-9));
    CHECK(is_degenerate(centered.densified(), 1e-9));
}

TEST_CASE("tensor JSON round trip, both forms") {
    Rng rng(RngSeed{20, 0});
    const Tensor4 dense = random_dense_tensor(3, rng);
    const Tensor4 back = tensor_from_json(tensor_to_json(dense));
    CHECK(back.values() == dense.values());

    const Tensor4 prod = Tensor4::product(random_matrix(2, 3, rng), random_matrix(2, 3, rng));
    const Tensor4 pb = tensor_from_json(tensor_to_json(prod));
    CHECK(pb.form() == Tensor4::Form::product);
    CHECK(pb(1, 2, 0, 1) == prod(1, 2, 0, 1));

    CHECK_THROWS_AS(tensor_from_json(json{{"n", 2}, {"form", "sparse"}, {"data", {1.0}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        tensor_from_json(json{{"n", 2}, {"form", "dense"}, {"data", std::vector<double>(7)}}),
        std::invalid_argument);
}
