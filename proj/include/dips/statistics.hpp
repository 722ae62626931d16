#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dips/linalg.hpp"
#include "dips/permutation.hpp"
#include "dips/tensor4.hpp"

namespace dips {

enum class ScoreKind { mww, pearson, kendall, spearman, chatterjee, graph, custom };

std::string score_kind_name(ScoreKind k);
ScoreKind parse_score_kind(const std::string& name);

// Score matrices of a statistic in DIPS form. The statistic value at a
// permutation is value_from_q(sum_ij c(i,j) a(pi(i),pi(j))):
// Daniels statistics divide by the normalizer, Chatterjee's xi is
// 1 - normalizer * Q, everything else is Q itself.
struct ScorePair {
    Matrix c;
    Matrix a;
    ScoreKind kind = ScoreKind::custom;
    double normalizer = 1.0;

    std::size_t n() const { return c.rows; }
    double value_from_q(double q) const;
};

Tensor4 score_tensor(const ScorePair& s);
double statistic_value(const ScorePair& s, const Permutation& p);

struct Sample {
    std::vector<double> x;
    std::vector<double> y;

    static Sample make(std::vector<double> x, std::vector<double> y);
    std::size_t size() const { return x.size(); }
};

// Mann-Whitney-Wilcoxon: C = [1(i < m and j >= m)], A = [1(z_k < z_l)] over
// the pooled values. Ties in the pooled sample are rejected.
ScorePair build_mww(std::size_t m, std::size_t n, const std::vector<double>& pooled);

// Daniels' generalized correlation with Pearson, Kendall or Spearman scores.
// Ties in x or y are rejected for the rank-based scores. The normalizer is
// the Daniels denominator sqrt(sum c^2) sqrt(sum a^2).
ScorePair build_daniels(const Sample& sample, ScoreKind score);

// Chatterjee's rank correlation of a permutation:
// 1 - 3/(N^2-1) * sum |pi(i+1) - pi(i)|. Both the direct sum and its DIPS
// form (c_{ij} = 1(i-j=1)) are computed and must agree exactly.
double chatterjee_xi(const Permutation& p);
ScorePair build_chatterjee(std::size_t n);

// Rank permutation feeding xi_N for observed data: ranks of y in the order
// of increasing x (0-based); ties rejected.
Permutation chatterjee_permutation(const Sample& sample);

// Friedman-Rafsky graph correlation: indicator score matrices over ordered
// edge pairs (undirected graphs supply both orientations).
ScorePair build_graph_gamma(const std::vector<std::pair<int, int>>& ex,
                            const std::vector<std::pair<int, int>>& ey, std::size_t n);

struct RegressionStatistic {
    Tensor4 tensor = Tensor4::zeros(0, 0);  // product form, C = treated-block indicator
    double expectation = 0.0;               // closed form under uniform pi
};

// Q_{T_omega} for the regression-adjustment bias term: the treated set is
// pi({0..treated_count-1}) under complete randomization.
RegressionStatistic regression_bias_statistic(const Matrix& x, const std::vector<double>& e,
                                              std::size_t treated_count);

// 0-based ranks (values 0..n-1); throws on ties.
std::vector<double> ranks_of(const std::vector<double>& v);

}  // namespace dips
