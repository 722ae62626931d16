#include "dips/permutation.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dips {

Permutation Permutation::identity(std::size_t n) {
    Permutation p;
    p.map.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.map[i] = static_cast<int>(i);
    return p;
}

Permutation Permutation::from_map(std::vector<int> map) {
    std::vector<char> seen(map.size(), 0);
    for (int v : map) {
        if (v < 0 || static_cast<std::size_t>(v) >= map.size() || seen[static_cast<std::size_t>(v)])
            throw std::invalid_argument("Permutation: map is not a bijection");
        seen[static_cast<std::size_t>(v)] = 1;
    }
    Permutation p;
    p.map = std::move(map);
    return p;
}

Permutation sample_uniform(std::size_t n, Rng& rng) {
    if (n == 0) throw std::invalid_argument("sample_uniform: n must be at least 1");
    Permutation p;
    p.map.resize(n);
    p.map[0] = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t j = rng.below(i + 1);
        p.map[i] = p.map[j];
        p.map[j] = static_cast<int>(i);
    }
    return p;
}

Permutation sample_uniform(std::size_t n, RngSeed seed) {
    Rng rng(seed);
    return sample_uniform(n, rng);
}

std::uint64_t factorial(std::size_t n) {
    if (n > 20) throw std::invalid_argument("factorial: overflow beyond 20!");
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

PermutationEnumerator::PermutationEnumerator(std::size_t n) : n_(n) {
    if (n > enumeration_cap)
        throw std::invalid_argument("enumerate_all: n = " + std::to_string(n) +
                                    " exceeds the cap of " + std::to_string(enumeration_cap) +
                                    " (10! = 3,628,800 permutations)");
    current_.resize(n);
    for (std::size_t i = 0; i < n; ++i) current_[i] = static_cast<int>(i);
}

bool PermutationEnumerator::next(Permutation& out) {
    if (done_) return false;
    if (fresh_) {
        fresh_ = false;
    } else if (!std::next_permutation(current_.begin(), current_.end())) {
        done_ = true;
        return false;
    }
    out.map = current_;
    return true;
}

double evaluate_dips(const Tensor4& t, const Permutation& p, bool include_diagonal) {
    if (!t.square()) throw std::invalid_argument("evaluate_dips: tensor must be square");
    if (p.size() != t.n()) throw std::invalid_argument("evaluate_dips: dimension mismatch");
    const std::size_t n = t.n();
    KahanSum s;
    if (t.form() == Tensor4::Form::product) {
        const Matrix& c = t.c();
        const Matrix& a = t.a();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t pi = static_cast<std::size_t>(p.map[i]);
            for (std::size_t j = 0; j < n; ++j) {
                if (!include_diagonal && i == j) continue;
                s.add(c(i, j) * a(pi, static_cast<std::size_t>(p.map[j])));
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t pi = static_cast<std::size_t>(p.map[i]);
            for (std::size_t j = 0; j < n; ++j) {
                if (!include_diagonal && i == j) continue;
                s.add(t(i, j, pi, static_cast<std::size_t>(p.map[j])));
            }
        }
    }
    return s.value();
}

double evaluate_decoupled_dips(const Tensor4& t, const Permutation& pi, const Permutation& tau) {
    if (pi.size() != t.n() || tau.size() != t.m())
        throw std::invalid_argument("evaluate_decoupled_dips: dimension mismatch");
    KahanSum s;
    for (std::size_t i = 0; i < t.n(); ++i)
        for (std::size_t j = 0; j < t.m(); ++j)
            s.add(t(i, j, static_cast<std::size_t>(pi.map[i]), static_cast<std::size_t>(tau.map[j])));
    return s.value();
}

double exact_expectation(const Tensor4& t, bool include_diagonal) {
    if (!t.square()) throw std::invalid_argument("exact_expectation: tensor must be square");
    const std::size_t n = t.n();
    if (n == 0) return 0.0;
    if (n < 2) {
        // only the diagonal pair (i,i) exists
        if (!include_diagonal)
            throw std::invalid_argument("exact_expectation: off-diagonal part needs n >= 2");
        return t(0, 0, 0, 0);
    }

    double sum_all, sum_ieqj, sum_keql, sum_both;
    if (t.form() == Tensor4::Form::product) {
        const Matrix& c = t.c();
        const Matrix& a = t.a();
        KahanSum sc, sa, tc, ta;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                sc.add(c(i, j));
                sa.add(a(i, j));
            }
        for (std::size_t i = 0; i < n; ++i) {
            tc.add(c(i, i));
            ta.add(a(i, i));
        }
        sum_all = sc.value() * sa.value();
        sum_ieqj = tc.value() * sa.value();
        sum_keql = sc.value() * ta.value();
        sum_both = tc.value() * ta.value();
    } else {
        KahanSum s_all, s_ieqj, s_keql, s_both;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t l = 0; l < n; ++l) {
                        const double v = t(i, j, k, l);
                        s_all.add(v);
                        if (i == j) s_ieqj.add(v);
                        if (k == l) s_keql.add(v);
                        if (i == j && k == l) s_both.add(v);
                    }
        sum_all = s_all.value();
        sum_ieqj = s_ieqj.value();
        sum_keql = s_keql.value();
        sum_both = s_both.value();
    }

    const double nn = static_cast<double>(n);
    const double off = (sum_all - sum_ieqj - sum_keql + sum_both) / (nn * (nn - 1.0));
    const double diag = sum_both / nn;
    return include_diagonal ? off + diag : off;
}

SplitBijection SplitBijection::make(IndexSplit split, std::vector<int> map) {
    if (map.size() != split.n) throw std::invalid_argument("SplitBijection: map size mismatch");
    Permutation::from_map(map);  // bijectivity
    std::vector<char> in_j(split.n, 0);
    for (int v : split.j_set) in_j[static_cast<std::size_t>(v)] = 1;
    std::vector<char> in_i(split.n, 0);
    for (int v : split.i_set) in_i[static_cast<std::size_t>(v)] = 1;
    for (std::size_t i = 0; i < split.n; ++i) {
        const bool want_j = in_i[i] != 0;
        if ((in_j[static_cast<std::size_t>(map[i])] != 0) != want_j)
            throw std::invalid_argument("SplitBijection: map does not send I to J and I^c to J^c");
    }
    SplitBijection sb;
    sb.split = std::move(split);
    sb.map = std::move(map);
    return sb;
}

std::vector<int> sample_subset(std::size_t n, std::size_t k, Rng& rng) {
    if (k > n) throw std::invalid_argument("sample_subset: k exceeds n");
    std::vector<int> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<int>(i);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.below(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

SplitBijection sample_split(std::size_t n, Rng& rng) {
    if (n < 2) throw std::invalid_argument("sample_split: n must be at least 2");
    const std::size_t half = (n + 1) / 2;
    std::vector<int> i_set = sample_subset(n, half, rng);
    std::vector<int> j_set = sample_subset(n, half, rng);
    IndexSplit split = IndexSplit::make(n, i_set, j_set);

    auto shuffled = [&](std::vector<int> v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = rng.below(i);
            std::swap(v[i - 1], v[j]);
        }
        return v;
    };
    const std::vector<int> j_img = shuffled(split.j_set);
    const std::vector<int> ic = split.i_complement();
    const std::vector<int> jc_img = shuffled(split.j_complement());

    std::vector<int> map(n, -1);
    for (std::size_t r = 0; r < split.i_set.size(); ++r)
        map[static_cast<std::size_t>(split.i_set[r])] = j_img[r];
    for (std::size_t r = 0; r < ic.size(); ++r)
        map[static_cast<std::size_t>(ic[r])] = jc_img[r];
    return SplitBijection::make(std::move(split), std::move(map));
}

SplitBijection sample_split(std::size_t n, RngSeed seed) {
    Rng rng(seed);
    return sample_split(n, rng);
}

double evaluate_split_dips(const Tensor4& t, const SplitBijection& sb) {
    KahanSum s;
    const std::vector<int> ic = sb.split.i_complement();
    for (int i : sb.split.i_set)
        for (int j : ic)
            s.add(t(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                    static_cast<std::size_t>(sb.map[static_cast<std::size_t>(i)]),
                    static_cast<std::size_t>(sb.map[static_cast<std::size_t>(j)])));
    return s.value();
}

}  // namespace dips
