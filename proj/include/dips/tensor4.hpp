#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "dips/linalg.hpp"

namespace dips {

// Fourth-order tensor w(i,j,k,l) with i,k in [0,n) and j,l in [0,m).
// Dense storage is a flat row-major array of n*m*n*m values. Product storage
// keeps the factor pair (C, A), both n x m, with w(i,j,k,l) = c(i,j)*a(k,l),
// and is densified only on demand and never above n,m = 64 (N^4 doubles at
// N = 64 is ~134 MB).
class Tensor4 {
public:
    enum class Form { dense, product };
    static constexpr std::size_t densify_cap = 64;

    static Tensor4 dense(std::size_t n, std::size_t m, std::vector<double> values);
    static Tensor4 dense(std::size_t n, std::vector<double> values);
    static Tensor4 product(Matrix c, Matrix a);
    static Tensor4 zeros(std::size_t n, std::size_t m);
    static Tensor4 constant(std::size_t n, std::size_t m, double value);

    Form form() const { return form_; }
    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }
    bool square() const { return n_ == m_; }

    double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
        if (form_ == Form::dense)
            return values_[((i * m_ + j) * n_ + k) * m_ + l];
        return c_(i, j) * a_(k, l);
    }

    const std::vector<double>& values() const;  // dense only
    const Matrix& c() const;                    // product only
    const Matrix& a() const;                    // product only

    Tensor4 densified() const;
    double max_abs() const;
    // tolerance scale used by the degeneracy tests: max(1, max|entry|)
    double scale() const;

private:
    Form form_ = Form::dense;
    std::size_t n_ = 0, m_ = 0;
    std::vector<double> values_;
    Matrix c_, a_;
};

// Linear part, degenerate part and constant of the decomposition
//   Q_w(pi) = N * sum_i a(i, pi(i)) + Q_d(pi) + constant
// with constant = N^2 * grand mean. d has all four single-slot partial
// averages equal to zero and the entries of a sum to zero.
struct Decomposition {
    Matrix a;
    Tensor4 d = Tensor4::zeros(0, 0);
    double constant = 0.0;
};

// Index pair (I, J), both of size ceil(n/2), for the decoupled split of [n].
struct IndexSplit {
    std::size_t n = 0;
    std::vector<int> i_set;  // sorted
    std::vector<int> j_set;  // sorted

    static IndexSplit make(std::size_t n, std::vector<int> i_set, std::vector<int> j_set);
    std::vector<int> i_complement() const;
    std::vector<int> j_complement() const;
};

// Mean of the tensor over the given slots (subset of {1,2,3,4}), broadcast
// back to the full shape. Product tensors stay in product form.
Tensor4 partial_average(const Tensor4& t, std::initializer_list<int> slots);
Tensor4 partial_average(const Tensor4& t, const std::vector<int>& slots);

// Largest absolute value among the four single-slot partial averages.
double max_partial_average(const Tensor4& t);

// True when every single-slot partial average is below tol * scale.
bool is_degenerate(const Tensor4& t, double tol);

Decomposition hoeffding_decompose(const Tensor4& t);

// Centering of the tensor restricted to I x I^c x J x J^c: the 16-term
// inclusion-exclusion over restricted slot ranges. Entries outside the
// restriction are zero. All four restricted single-slot partial averages of
// the result vanish.
Tensor4 tilde_d_restrict(const Tensor4& t, const IndexSplit& split);

}  // namespace dips
