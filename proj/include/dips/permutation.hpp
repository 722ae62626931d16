#pragma once

#include <cstdint>
#include <vector>

#include "dips/rng.hpp"
#include "dips/tensor4.hpp"

namespace dips {

struct Permutation {
    std::vector<int> map;  // 0-based images; map[i] is the image of i

    static Permutation identity(std::size_t n);
    static Permutation from_map(std::vector<int> map);  // validates bijectivity

    std::size_t size() const { return map.size(); }
    int operator()(std::size_t i) const { return map[i]; }
    bool operator==(const Permutation& o) const { return map == o.map; }
};

// Uniform over S_n, inside-out Fisher-Yates. Deterministic given the seed.
Permutation sample_uniform(std::size_t n, Rng& rng);
Permutation sample_uniform(std::size_t n, RngSeed seed);

inline constexpr std::size_t enumeration_cap = 10;  // 10! = 3,628,800

std::uint64_t factorial(std::size_t n);

// All n! permutations in lexicographic order. Refuses n > enumeration_cap.
class PermutationEnumerator {
public:
    explicit PermutationEnumerator(std::size_t n);
    // Writes the next permutation; returns false once exhausted.
    bool next(Permutation& out);

private:
    std::size_t n_;
    std::vector<int> current_;
    bool fresh_ = true;
    bool done_ = false;
};

template <class Fn>
void for_each_permutation(std::size_t n, Fn&& fn) {
    PermutationEnumerator en(n);
    Permutation p;
    while (en.next(p)) fn(p);
}

// Q = sum over pairs (i,j) (all pairs, or i != j) of w(i,j,pi(i),pi(j)).
// Product tensors are evaluated through their factors without densifying.
double evaluate_dips(const Tensor4& t, const Permutation& p, bool include_diagonal);

// Decoupled variant: sum over i in [N], j in [M] of d(i,j,pi(i),tau(j)).
double evaluate_decoupled_dips(const Tensor4& t, const Permutation& pi, const Permutation& tau);

// Closed-form E[Q] under uniform pi: the off-diagonal pairs contribute with
// weight 1/(N(N-1)) over k != l, the diagonal ones with weight 1/N over k.
double exact_expectation(const Tensor4& t, bool include_diagonal);

// Bijections I -> J and I^c -> J^c packed as one full map of [n].
struct SplitBijection {
    IndexSplit split;
    std::vector<int> map;

    static SplitBijection make(IndexSplit split, std::vector<int> map);  // validates ranges
};

// I, J independent uniform subsets of size ceil(n/2); the two bijections
// uniform and independent.
SplitBijection sample_split(std::size_t n, Rng& rng);
SplitBijection sample_split(std::size_t n, RngSeed seed);

// sum over i in I, j in I^c of t(i,j,map(i),map(j))
double evaluate_split_dips(const Tensor4& t, const SplitBijection& sb);

// Uniform k-subset of [n], sorted.
std::vector<int> sample_subset(std::size_t n, std::size_t k, Rng& rng);

}  // namespace dips
