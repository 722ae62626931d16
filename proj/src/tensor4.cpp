#include "dips/tensor4.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace dips {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

}  // namespace

Tensor4 Tensor4::dense(std::size_t n, std::size_t m, std::vector<double> values) {
    if (values.size() != n * m * n * m)
        throw std::invalid_argument("Tensor4::dense: storage length must equal n*m*n*m");
    require_finite(values, "Tensor4::dense");
    Tensor4 t;
    t.form_ = Form::dense;
    t.n_ = n;
    t.m_ = m;
    t.values_ = std::move(values);
    return t;
}

Tensor4 Tensor4::dense(std::size_t n, std::vector<double> values) {
    return dense(n, n, std::move(values));
}

Tensor4 Tensor4::product(Matrix c, Matrix a) {
    if (c.rows != a.rows || c.cols != a.cols)
        throw std::invalid_argument("Tensor4::product: factor shapes must match");
    require_finite(c.data, "Tensor4::product (c)");
    require_finite(a.data, "Tensor4::product (a)");
    Tensor4 t;
    t.form_ = Form::product;
    t.n_ = c.rows;
    t.m_ = c.cols;
    t.c_ = std::move(c);
    t.a_ = std::move(a);
    return t;
}

Tensor4 Tensor4::zeros(std::size_t n, std::size_t m) {
    return dense(n, m, std::vector<double>(n * m * n * m, 0.0));
}

Tensor4 Tensor4::constant(std::size_t n, std::size_t m, double value) {
    return dense(n, m, std::vector<double>(n * m * n * m, value));
}

const std::vector<double>& Tensor4::values() const {
    if (form_ != Form::dense) throw std::logic_error("Tensor4::values: not a dense tensor");
    return values_;
}

const Matrix& Tensor4::c() const {
    if (form_ != Form::product) throw std::logic_error("Tensor4::c: not a product tensor");
    return c_;
}

const Matrix& Tensor4::a() const {
    if (form_ != Form::product) throw std::logic_error("Tensor4::a: not a product tensor");
    return a_;
}

Tensor4 Tensor4::densified() const {
    if (form_ == Form::dense) return *this;
    if (n_ > densify_cap || m_ > densify_cap)
        throw std::invalid_argument("Tensor4::densified: product tensor too large to densify");
    std::vector<double> v(n_ * m_ * n_ * m_);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < m_; ++j)
            for (std::size_t k = 0; k < n_; ++k)
                for (std::size_t l = 0; l < m_; ++l) v[idx++] = c_(i, j) * a_(k, l);
    return dense(n_, m_, std::move(v));
}

double Tensor4::max_abs() const {
    if (form_ == Form::dense) {
        double best = 0.0;
        for (double v : values_) best = std::max(best, std::abs(v));
        return best;
    }
    return dips::max_abs(c_) * dips::max_abs(a_);
}

double Tensor4::scale() const { return std::max(1.0, max_abs()); }

IndexSplit IndexSplit::make(std::size_t n, std::vector<int> i_set, std::vector<int> j_set) {
    const std::size_t half = (n + 1) / 2;
    auto check = [&](std::vector<int>& s, const char* name) {
        if (s.size() != half)
            throw std::invalid_argument(std::string("IndexSplit: |") + name +
                                        "| must be ceil(n/2)");
        std::sort(s.begin(), s.end());
        for (std::size_t r = 0; r < s.size(); ++r) {
            if (s[r] < 0 || static_cast<std::size_t>(s[r]) >= n)
                throw std::invalid_argument("IndexSplit: index out of range");
            if (r > 0 && s[r] == s[r - 1])
                throw std::invalid_argument("IndexSplit: duplicate index");
        }
    };
    check(i_set, "I");
    check(j_set, "J");
    IndexSplit sp;
    sp.n = n;
    sp.i_set = std::move(i_set);
    sp.j_set = std::move(j_set);
    return sp;
}

namespace {

std::vector<int> complement_of(const std::vector<int>& s, std::size_t n) {
    std::vector<char> in(n, 0);
    for (int v : s) in[static_cast<std::size_t>(v)] = 1;
    std::vector<int> out;
    out.reserve(n - s.size());
    for (std::size_t v = 0; v < n; ++v)
        if (!in[v]) out.push_back(static_cast<int>(v));
    return out;
}

}  // namespace

std::vector<int> IndexSplit::i_complement() const { return complement_of(i_set, n); }
std::vector<int> IndexSplit::j_complement() const { return complement_of(j_set, n); }

namespace {

// Broadcastable table over the four slots; reduced slots have extent 1.
struct Table4 {
    std::array<std::size_t, 4> dim{};
    std::vector<double> v;

    double at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
        if (dim[0] == 1) i = 0;
        if (dim[1] == 1) j = 0;
        if (dim[2] == 1) k = 0;
        if (dim[3] == 1) l = 0;
        return v[((i * dim[1] + j) * dim[2] + k) * dim[3] + l];
    }
};

Table4 table_of(const Tensor4& t) {
    Table4 tab;
    tab.dim = {t.n(), t.m(), t.n(), t.m()};
    tab.v = t.densified().values();
    return tab;
}

// Mean of `in` over one slot, either over the full extent or over a
// restricted index set. Compensated accumulation: these sums feed the
// degeneracy checks at N^3-term counts.
Table4 reduce_slot(const Table4& in, int slot, const std::vector<int>* range) {
    Table4 out;
    out.dim = in.dim;
    out.dim[slot] = 1;
    out.v.assign(out.dim[0] * out.dim[1] * out.dim[2] * out.dim[3], 0.0);
    std::vector<KahanSum> acc(out.v.size());

    std::vector<std::size_t> idx;
    if (range) {
        for (int r : *range) idx.push_back(static_cast<std::size_t>(r));
    } else {
        for (std::size_t r = 0; r < in.dim[slot]; ++r) idx.push_back(r);
    }
    if (idx.empty()) throw std::invalid_argument("reduce_slot: empty index range");

    std::array<std::size_t, 4> d = in.dim;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < out.dim[0]; ++i)
        for (std::size_t j = 0; j < out.dim[1]; ++j)
            for (std::size_t k = 0; k < out.dim[2]; ++k)
                for (std::size_t l = 0; l < out.dim[3]; ++l) {
                    std::array<std::size_t, 4> at{i, j, k, l};
                    KahanSum& s = acc[pos];
                    for (std::size_t r : idx) {
                        at[slot] = r;
                        s.add(in.v[((at[0] * d[1] + at[1]) * d[2] + at[2]) * d[3] + at[3]]);
                    }
                    out.v[pos] = s.value() / static_cast<double>(idx.size());
                    ++pos;
                }
    return out;
}

// All 2^4 partial means, indexed by the bitmask of averaged slots.
// ranges[slot] restricts that slot's average (nullptr = full range).
std::vector<Table4> all_partial_means(const Tensor4& t,
                                      const std::array<const std::vector<int>*, 4>& ranges) {
    std::vector<Table4> tables(16);
    tables[0] = table_of(t);
    for (unsigned mask = 1; mask < 16; ++mask) {
        const unsigned low = mask & (mask - 1);
        const int slot = std::countr_zero(mask);
        tables[mask] = reduce_slot(tables[low], slot, ranges[slot]);
    }
    return tables;
}

unsigned slots_to_mask(const std::vector<int>& slots) {
    unsigned mask = 0;
    for (int s : slots) {
        if (s < 1 || s > 4) throw std::invalid_argument("slots must lie in {1,2,3,4}");
        mask |= 1u << (s - 1);
    }
    if (mask == 0) throw std::invalid_argument("slot set must be nonempty");
    return mask;
}

}  // namespace

Tensor4 partial_average(const Tensor4& t, const std::vector<int>& slots) {
    const unsigned mask = slots_to_mask(slots);
    if (t.form() == Tensor4::Form::product) {
        // averaging factors slot-wise keeps the product structure
        Matrix c = t.c(), a = t.a();
        auto average_rows = [](Matrix& m) {
            for (std::size_t j = 0; j < m.cols; ++j) {
                KahanSum s;
                for (std::size_t i = 0; i < m.rows; ++i) s.add(m(i, j));
                const double mean = s.value() / static_cast<double>(m.rows);
                for (std::size_t i = 0; i < m.rows; ++i) m(i, j) = mean;
            }
        };
        auto average_cols = [](Matrix& m) {
            for (std::size_t i = 0; i < m.rows; ++i) {
                KahanSum s;
                for (std::size_t j = 0; j < m.cols; ++j) s.add(m(i, j));
                const double mean = s.value() / static_cast<double>(m.cols);
                for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = mean;
            }
        };
        if (mask & 1u) average_rows(c);
        if (mask & 2u) average_cols(c);
        if (mask & 4u) average_rows(a);
        if (mask & 8u) average_cols(a);
        return Tensor4::product(std::move(c), std::move(a));
    }

    Table4 tab = table_of(t);
    const std::array<const std::vector<int>*, 4> full{nullptr, nullptr, nullptr, nullptr};
    for (int slot = 0; slot < 4; ++slot)
        if (mask & (1u << slot)) tab = reduce_slot(tab, slot, full[slot]);

    const std::size_t n = t.n(), m = t.m();
    std::vector<double> out(n * m * n * m);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < m; ++l) out[pos++] = tab.at(i, j, k, l);
    return Tensor4::dense(n, m, std::move(out));
}

Tensor4 partial_average(const Tensor4& t, std::initializer_list<int> slots) {
    return partial_average(t, std::vector<int>(slots));
}

double max_partial_average(const Tensor4& t) {
    double worst = 0.0;
    for (int slot = 1; slot <= 4; ++slot) {
        if (t.form() == Tensor4::Form::product) {
            // slot average of c(i,j)a(k,l) factorizes; max |entry| is the
            // product of factor maxima
            const Matrix& f = (slot <= 2) ? t.c() : t.a();
            const Matrix& other = (slot <= 2) ? t.a() : t.c();
            const bool rows = (slot == 1 || slot == 3);
            double fmax = 0.0;
            if (rows) {
                for (std::size_t j = 0; j < f.cols; ++j) {
                    KahanSum s;
                    for (std::size_t i = 0; i < f.rows; ++i) s.add(f(i, j));
                    fmax = std::max(fmax, std::abs(s.value() / static_cast<double>(f.rows)));
                }
            } else {
                for (std::size_t i = 0; i < f.rows; ++i) {
                    KahanSum s;
                    for (std::size_t j = 0; j < f.cols; ++j) s.add(f(i, j));
                    fmax = std::max(fmax, std::abs(s.value() / static_cast<double>(f.cols)));
                }
            }
            worst = std::max(worst, fmax * dips::max_abs(other));
        } else {
            Table4 tab = reduce_slot(table_of(t), slot - 1, nullptr);
            for (double v : tab.v) worst = std::max(worst, std::abs(v));
        }
    }
    return worst;
}

bool is_degenerate(const Tensor4& t, double tol) {
    if (tol < 0.0) throw std::invalid_argument("is_degenerate: tol must be nonnegative");
    return max_partial_average(t) <= tol * t.scale();
}

Decomposition hoeffding_decompose(const Tensor4& t) {
    if (!t.square()) throw std::invalid_argument("hoeffding_decompose: tensor must be square");
    const std::size_t n = t.n();
    const std::array<const std::vector<int>*, 4> full{nullptr, nullptr, nullptr, nullptr};
    const Tensor4 w = t.densified();
    const std::vector<Table4> means = all_partial_means(w, full);
    const double g = means[15].v[0];

    Decomposition dec;
    dec.constant = static_cast<double>(n * n) * g;

    // linear part: pairs of slots (1,3) and (2,4)
    dec.a = Matrix(n, n);
    const Table4& m24 = means[(1u << 1) | (1u << 3)];  // keeps slots 1,3
    const Table4& m13 = means[(1u << 0) | (1u << 2)];  // keeps slots 2,4
    const Table4& m234 = means[14];                    // keeps slot 1
    const Table4& m134 = means[13];                    // keeps slot 2
    const Table4& m124 = means[11];                    // keeps slot 3
    const Table4& m123 = means[7];                     // keeps slot 4
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double first = m24.at(i, 0, j, 0) - m234.at(i, 0, 0, 0) -
                                 m124.at(0, 0, j, 0) + g;
            const double second = m13.at(0, i, 0, j) - m134.at(0, i, 0, 0) -
                                  m123.at(0, 0, 0, j) + g;
            dec.a(i, j) = first + second;
        }

    // degenerate part: signed sum of all sixteen partial means
    std::vector<double> d(n * n * n * n);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    double acc = 0.0;
                    for (unsigned mask = 0; mask < 16; ++mask) {
                        const double term = means[mask].at(i, j, k, l);
                        acc += (std::popcount(mask) & 1u) ? -term : term;
                    }
                    d[pos++] = acc;
                }
    dec.d = Tensor4::dense(n, std::move(d));
    return dec;
}

Tensor4 tilde_d_restrict(const Tensor4& t, const IndexSplit& split) {
    if (!t.square()) throw std::invalid_argument("tilde_d_restrict: tensor must be square");
    if (split.n != t.n()) throw std::invalid_argument("tilde_d_restrict: split size mismatch");
    const std::size_t n = t.n();
    const std::vector<int> ic = split.i_complement();
    const std::vector<int> jc = split.j_complement();
    const std::array<const std::vector<int>*, 4> ranges{&split.i_set, &ic, &split.j_set, &jc};
    const Tensor4 w = t.densified();
    const std::vector<Table4> means = all_partial_means(w, ranges);

    std::vector<double> out(n * n * n * n, 0.0);
    for (int i : split.i_set)
        for (int j : ic)
            for (int k : split.j_set)
                for (int l : jc) {
                    double acc = 0.0;
                    for (unsigned mask = 0; mask < 16; ++mask) {
                        const double term =
                            means[mask].at(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                                           static_cast<std::size_t>(k), static_cast<std::size_t>(l));
                        acc += (std::popcount(mask) & 1u) ? -term : term;
                    }
                    out[((static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)) * n +
                         static_cast<std::size_t>(k)) *
                            n +
                        static_cast<std::size_t>(l)] = acc;
                }
    return Tensor4::dense(n, std::move(out));
}

}  // namespace dips
