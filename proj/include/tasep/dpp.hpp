#pragma once

#include "tasep/dynamics.hpp"
#include "tasep/matrix.hpp"
#include "tasep/operators.hpp"
#include "tasep/toeplitz.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace tasep {

// Levels 1..N of an interlacing array; x[i-1][j-1] = x^(i)_j.
struct LevelArray {
    std::vector<std::vector<long>> x;
    int n() const { return static_cast<int>(x.size()); }
    long at(int i, int j) const { return x[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]; }
    bool interlacing() const {
        for (int i = 1; i < n(); ++i)
            for (int j = 1; j <= i; ++j)
                if (!(at(i + 1, j + 1) < at(i, j) && at(i, j) <= at(i + 1, j))) return false;
        return true;
    }
};

// Biorthogonal system for initial strict positions y, driven on (r, t].
template <class S>
class BiorthSystem {
public:
    BiorthSystem(Config y, Rates<S> rates, int r, int t) : y_(std::move(y)), rates_(std::move(rates)), r_(r), t_(t) {
        validate_config(y_);
        n_ = static_cast<int>(y_.size());
        if (rates_.n_particles() < n_ || rates_.horizon() < t_) throw std::invalid_argument("biorthogonal system: not enough rate parameters");
        require_ordered(rates_, 1, n_, "biorthogonal system");
        m_ = Matrix<S>(static_cast<std::size_t>(n_), static_cast<std::size_t>(n_));
        for (int i = 1; i <= n_; ++i)
            for (int j = 1; j <= n_; ++j) {
                S acc(0);
                for (long z = support_lo(j); z <= support_hi(j); ++z) acc += virtual_q_entry(i, n_, z, rates_) * psi_top(j, z);
                m_(i - 1, j - 1) = acc;
            }
        for (int i = 1; i <= n_; ++i)
            for (int j = 1; j < i; ++j)
                if (m_(i - 1, j - 1) != S(0) && ScalarTraits<S>::exact) throw std::logic_error("M is not upper-triangular");
        minv_ = upper_triangular_inverse(m_);
    }

    int n() const { return n_; }
    const Config& y() const { return y_; }
    const Rates<S>& rates() const { return rates_; }
    const Matrix<S>& m() const { return m_; }
    const Matrix<S>& m_inverse() const { return minv_; }

    // Support of Psi^(N)_k.
    long support_lo(int k) const { return y_[static_cast<std::size_t>(k - 1)] - (n_ - k); }
    long support_hi(int k) const { return y_[static_cast<std::size_t>(k - 1)] + (t_ - r_); }

    S psi_top(int k, long x) const {
        auto op = Composition::rstar_chain(r_, t_).then(Composition::qinv_chain(k + 1, n_));
        return entry(op, rates_, x, y_[static_cast<std::size_t>(k - 1)]);
    }

    // Psi^(n)_k = Q_{(n,N]} o Psi^(N)_k.
    S psi(int level, int k, long x) const {
        if (level == n_) return psi_top(k, x);
        auto op = Composition::q_chain(level + 1, n_).then(Composition::rstar_chain(r_, t_)).then(Composition::qinv_chain(k + 1, n_));
        return entry(op, rates_, x, y_[static_cast<std::size_t>(k - 1)]);
    }

    S phi(int level, int i, long x) const {
        S acc(0);
        for (int j = i; j <= level; ++j) acc += minv_(i - 1, j - 1) * virtual_q_entry(j, level, x, rates_);
        return acc;
    }

    S kernel(int m, long x, int level, long xp) const {
        S acc(0);
        if (level > m) acc -= entry(Composition::q_chain(m + 1, level), rates_, x, xp);
        for (int i = 1; i <= level; ++i) acc += psi(m, i, x) * phi(level, i, xp);
        return acc;
    }

    // sum_x Psi^(n)_i(x) Phi^(n)_j(x): finite part plus closed-form geometric tail.
    S biorthogonality_sum(int level, int i, int j) const {
        long lo = support_lo(i), hi = support_hi(i);
        S acc(0);
        for (long x = lo; x <= hi; ++x) acc += psi(level, i, x) * phi(level, j, x);
        if (level == n_) return acc;
        // For x > hi: Psi^(n)_i(x) = sum_l A_l q_l^{-x}, Phi^(n)_j(x) = sum_j' B_j' q_j'^x.
        const int k = n_ - level;
        for (int l = level + 1; l <= n_; ++l) {
            const S& ql = rates_.q_at(l);
            S den(1);
            for (int s = level + 1; s <= n_; ++s)
                if (s != l) den *= rates_.q_at(s) - ql;
            S a(0);
            for (long z = lo; z <= hi; ++z) a += psi_top(i, z) * ipow(ql, z + k - 1);
            a /= den;
            for (int jp = j; jp <= level; ++jp) {
                const S& qj = rates_.q_at(jp);
                S b = minv_(j - 1, jp - 1) * ipow(qj, level - jp);
                for (int s = jp + 1; s <= level; ++s) b /= rates_.q_at(s) - qj;
                S rho = qj / ql;
                acc += a * b * ipow(rho, hi + 1) / (S(1) - rho);
            }
        }
        return acc;
    }

private:
    Config y_;
    Rates<S> rates_;
    int r_ = 0, t_ = 0, n_ = 0;
    Matrix<S> m_, minv_;
};

// Weight of an array under the measure with virtual auxiliaries, or with
// finite auxiliaries x_0^(k-1) = aux[k-1] when given.
template <class S>
S dpp_weight(const LevelArray& a, const BiorthSystem<S>& sys, int r, int t, const std::optional<std::vector<long>>& aux = std::nullopt) {
    const int n = sys.n();
    const Rates<S>& rates = sys.rates();
    if (a.n() != n || !a.interlacing()) return S(0);
    S w(1);
    for (int k = 1; k <= n; ++k) {
        const S& q = rates.q_at(k);
        Matrix<S> m(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
        for (int i = 1; i <= k; ++i)
            for (int j = 1; j <= k; ++j) {
                long xj = a.at(k, j);
                if (i == 1) {
                    if (aux) {
                        long x0 = (*aux)[static_cast<std::size_t>(k - 1)];
                        m(0, j - 1) = xj < x0 ? ipow(q, xj - x0) : S(0);
                    } else {
                        m(0, j - 1) = ipow(q, xj);
                    }
                } else {
                    long xi = a.at(k - 1, i - 1);
                    m(i - 1, j - 1) = xj < xi ? ipow(q, xj - xi) : S(0);
                }
            }
        w *= determinant(m);
    }
    Matrix<S> psi(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) psi(i - 1, j - 1) = sys.psi_top(i, a.at(n, j));
    w *= determinant(psi);
    S z = sign_power<S>(static_cast<long>(n) * (n - 1) / 2) * rates.normalization(r, t, n);
    for (int j = 1; j <= n; ++j) {
        long e = sys.y()[static_cast<std::size_t>(j - 1)];
        if (aux) e -= (*aux)[static_cast<std::size_t>(j - 1)];
        z *= ipow(rates.q_at(j), e);
    }
    return w / z;
}

// The Qdag form with frozen points x0 - k; requires x0 <= y_N (strict).
template <class S>
S dpp_weight_qdag(const LevelArray& a, const BiorthSystem<S>& sys, int r, int t, long x0) {
    const int n = sys.n();
    const Rates<S>& rates = sys.rates();
    if (x0 > sys.y().back()) throw std::invalid_argument("dpp_weight_qdag: auxiliary point too large");
    if (a.n() != n || !a.interlacing()) return S(0);
    S w(1);
    for (int k = 1; k <= n; ++k) {
        const S& q = rates.q_at(k);
        Matrix<S> m(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
        for (int i = 1; i <= k; ++i)
            for (int j = 1; j <= k; ++j) {
                long xi = i == k ? x0 - k : a.at(k - 1, i);
                long xj = a.at(k, j);
                m(i - 1, j - 1) = xj >= xi ? ipow(q, xj - xi) : S(0);
            }
        w *= determinant(m);
    }
    Matrix<S> psi(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) psi(i - 1, j - 1) = sign_power<S>(n - i) * sys.psi_top(i, a.at(n, j));
    w *= determinant(psi);
    S z = rates.normalization(r, t, n);
    for (int i = 1; i <= n; ++i) z *= ipow(rates.q_at(i), sys.y()[static_cast<std::size_t>(i - 1)] + i - x0);
    return w / z;
}

// Calls visit on every interlacing array whose left edge is `edge` and whose
// top level lies in [lo, hi].
void for_each_array_with_left_edge(const Config& edge, long lo, long hi, const std::function<void(const LevelArray&)>& visit);

// Sum of weights over arrays with left edge y' (strict).
template <class S>
S dpp_left_edge_marginal(const Config& yp, const BiorthSystem<S>& sys, int r, int t) {
    const int n = sys.n();
    long lo = sys.support_lo(1), hi = sys.support_hi(1);
    for (int k = 1; k <= n; ++k) {
        lo = std::min(lo, sys.support_lo(k));
        hi = std::max(hi, sys.support_hi(k));
    }
    S total(0);
    for_each_array_with_left_edge(yp, lo, hi, [&](const LevelArray& a) { total += dpp_weight(a, sys, r, t); });
    return total;
}

template <class S>
using KernelFn = std::function<S(int, long, int, long)>;

// Kernel values on levels x [lo, hi], both arguments.
template <class S>
class CorrelationKernelTable {
public:
    CorrelationKernelTable() = default;
    CorrelationKernelTable(const KernelFn<S>& k, std::vector<int> levels, long lo, long hi, unsigned threads = 0)
        : levels_(std::move(levels)), lo_(lo), hi_(hi) {
        width_ = static_cast<std::size_t>(hi_ - lo_ + 1);
        const std::size_t dim = levels_.size() * width_;
        values_.assign(dim * dim, S(0));
        if (threads == 0) threads = default_threads();
        threads = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, dim)));
        auto fill = [&](std::size_t row_begin, std::size_t row_end) {
            for (std::size_t a = row_begin; a < row_end; ++a) {
                int m = levels_[a / width_];
                long x = lo_ + static_cast<long>(a % width_);
                for (std::size_t b = 0; b < dim; ++b)
                    values_[a * dim + b] = k(m, x, levels_[b / width_], lo_ + static_cast<long>(b % width_));
            }
        };
        if (threads == 1) {
            fill(0, dim);
        } else {
            std::vector<std::thread> pool;
            for (unsigned i = 0; i < threads; ++i) {
                std::size_t b = dim * i / threads, e = dim * (i + 1) / threads;
                pool.emplace_back(fill, b, e);
            }
            for (auto& th : pool) th.join();
        }
    }

    long lo() const { return lo_; }
    long hi() const { return hi_; }
    const std::vector<int>& levels() const { return levels_; }
    bool covers(int level, long x) const {
        return x >= lo_ && x <= hi_ && std::find(levels_.begin(), levels_.end(), level) != levels_.end();
    }
    const S& at(int m, long x, int n, long xp) const {
        const std::size_t dim = levels_.size() * width_;
        return values_[index(m, x) * dim + index(n, xp)];
    }

private:
    std::size_t index(int level, long x) const {
        auto it = std::find(levels_.begin(), levels_.end(), level);
        if (it == levels_.end() || x < lo_ || x > hi_) throw std::out_of_range("kernel table does not cover entry");
        return static_cast<std::size_t>(it - levels_.begin()) * width_ + static_cast<std::size_t>(x - lo_);
    }

    std::vector<int> levels_;
    long lo_ = 0, hi_ = -1;
    std::size_t width_ = 0;
    std::vector<S> values_;
};

// det(I - chi K chi) with chi(k_i, x) = 1{lower <= x < s_i}.
template <class S>
S fredholm_det(const CorrelationKernelTable<S>& table, const std::vector<Query>& query, long lower) {
    std::vector<std::pair<int, long>> idx;
    for (const Query& q : query)
        for (long x = lower; x < q.s; ++x) idx.emplace_back(q.k, x);
    Matrix<S> m(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b)
            m(a, b) = (a == b ? S(1) : S(0)) - table.at(idx[a].first, idx[a].second, idx[b].first, idx[b].second);
    return determinant(m);
}

template <class S>
struct FredholmResult {
    S value{};
    S previous{};
    long lower = 0;  // lower window edge of `value`
    int growth_steps = 0;
    bool stabilized = false;
};

class FredholmNotStabilized : public std::runtime_error {
public:
    FredholmNotStabilized(const std::string& msg, double last, double prev) : std::runtime_error(msg), last(last), prev(prev) {}
    double last, prev;
};

constexpr long kWindowStep = 5;
constexpr double kStabilizationTol = 1e-12;

inline long initial_lower_edge(const Config& y, int t) {
    return y.back() - static_cast<long>(y.size()) - t - 2;
}

// Grows the window downward by kWindowStep until two successive
// determinants agree (exactly for rationals).
template <class S>
FredholmResult<S> fredholm_stabilized(const CorrelationKernelTable<S>& table, const std::vector<Query>& query, long l0,
                                      int max_steps = 8) {
    FredholmResult<S> res;
    res.lower = l0;
    if (query.empty()) {
        res.value = res.previous = S(1);
        res.stabilized = true;
        return res;
    }
    res.value = fredholm_det(table, query, l0);
    for (int step = 1; step <= max_steps; ++step) {
        long next = l0 - kWindowStep * step;
        if (next < table.lo()) break;
        S v = fredholm_det(table, query, next);
        res.previous = res.value;
        res.value = v;
        res.lower = next;
        res.growth_steps = step;
        bool same = ScalarTraits<S>::exact ? (v == res.previous) : (std::abs(to_double(S(v - res.previous))) < kStabilizationTol);
        if (same) {
            res.stabilized = true;
            return res;
        }
    }
    throw FredholmNotStabilized("Fredholm determinant did not stabilize", to_double(res.value), to_double(res.previous));
}

}  // namespace tasep
