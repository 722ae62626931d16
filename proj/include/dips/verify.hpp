#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dips/bounds.hpp"
#include "dips/permutation.hpp"
#include "dips/rng.hpp"
#include "dips/statistics.hpp"
#include "dips/tensor4.hpp"

namespace dips {

enum class Verdict { pass, fail, inconclusive };

std::string verdict_name(Verdict v);

struct VerificationReport {
    std::string name;
    Verdict status = Verdict::pass;
    std::string statistic;  // what was measured
    double margin = 0.0;    // worst slack; negative on fail
    std::uint64_t size = 0; // replicates or enumeration size
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> details;
    std::string witness;  // failing input, when there is one
};

// alpha and beta of the decoupling split at N1 = ceil(N/2); alpha obeys the
// ceiling 4 + 8/(N-2).
struct DecouplingConstants {
    double alpha = 0.0;
    double beta = 0.0;
    std::size_t n = 0;
    std::size_t n1 = 0;

    static DecouplingConstants make(std::size_t n);
};

struct EmpiricalTail {
    std::vector<double> grid;
    std::vector<double> survival;
    double half_width = 0.0;  // 0 in exact mode
    bool exact = false;
    std::uint64_t replicates = 0;
    std::uint64_t seed = 0;
};

// Survival function of Q - E[Q] on the grid: the true law by full
// enumeration (N <= 8), or Monte Carlo with a two-sided DKW-style uniform
// half-width sqrt(log(2/delta) / (2R)) at delta = 1e-3.
EmpiricalTail empirical_tail_exact(const Tensor4& t, bool include_diagonal,
                                   const std::vector<double>& grid);
EmpiricalTail empirical_tail_mc(const Tensor4& t, bool include_diagonal,
                                const std::vector<double>& grid, std::uint64_t replicates,
                                RngSeed seed, unsigned threads = 0, double delta = 1e-3);

// Same estimators for a statistic given by an arbitrary value function over
// permutations (used for the example statistics, which rescale Q).
EmpiricalTail empirical_tail_exact_fn(std::size_t n,
                                      const std::function<double(const Permutation&)>& value,
                                      double expectation, const std::vector<double>& grid);
EmpiricalTail empirical_tail_mc_fn(std::size_t n,
                                   const std::function<double(const Permutation&)>& value,
                                   double expectation, const std::vector<double>& grid,
                                   std::uint64_t replicates, RngSeed seed, unsigned threads = 0,
                                   double delta = 1e-3);

// Pass iff the empirical survival (plus the half-width in MC mode) never
// exceeds the bound; a confident crossing fails, a band straddling the
// boundary is inconclusive.
VerificationReport check_dominance(const TailCurve& curve, const EmpiricalTail& tail);

// Reconstruction identity over all permutations (N <= 6), degeneracy of d_w
// and sum a_w = 0.
VerificationReport check_decomposition(const Tensor4& t);

// The conditional-expectation identity from the decoupling proof: averaging
// alpha (sum tilde-d + Delta(pi)) over every subset I reproduces the centered
// off-diagonal sum. Delta(pi) is computed from both of its displays, which
// must agree.
VerificationReport check_decoupling_identity(const Tensor4& d, const Permutation& p);

// Randomization inequality at small N, M: exact expectation over (pi, tau)
// against the Gaussian-chaos side estimated over `replicates` Gaussian draws.
VerificationReport check_randomization_mgf(const Tensor4& d, double lambda,
                                           std::uint64_t replicates, RngSeed seed,
                                           unsigned threads = 0);

// Dominance of an example-statistic bound against the exact or MC null law.
// The verdict is conditional on the supplied K, and the report says so.
VerificationReport check_statistic_bound(const ScorePair& s,
                                         const std::function<double(double)>& bound_at,
                                         const KParameter& k, bool exact,
                                         std::uint64_t replicates, RngSeed seed,
                                         const std::vector<double>& grid, unsigned threads = 0);

template <class Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
    std::vector<int> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = static_cast<int>(i);
    for (;;) {
        fn(static_cast<const std::vector<int>&>(idx));
        std::size_t pos = k;
        while (pos > 0) {
            --pos;
            if (idx[pos] < static_cast<int>(n - k + pos)) break;
            if (pos == 0) return;
        }
        if (idx[pos] >= static_cast<int>(n - k + pos)) return;
        ++idx[pos];
        for (std::size_t q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
    }
}

std::uint64_t binomial(std::size_t n, std::size_t k);

}  // namespace dips
