#pragma once

#include "tasep/combinatorics.hpp"
#include "tasep/dynamics.hpp"
#include "tasep/matrix.hpp"
#include "tasep/toeplitz.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace tasep {

// Weakly decreasing integer vector of length N (entries may be negative).
using WeylPoint = std::vector<long>;

inline bool is_weyl(const WeylPoint& v) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i] < v[i + 1]) return false;
    return true;
}

// Strict positions Y_k to weak coordinates Y_k + k, and back.
inline WeylPoint to_weak(const Config& y) {
    WeylPoint w(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) w[k] = y[k] + static_cast<long>(k) + 1;
    return w;
}
inline Config to_strict(const WeylPoint& w) {
    Config y(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) y[k] = w[k] - static_cast<long>(k) - 1;
    return y;
}

// det(Qdag_{(i,N]}(y'_i - i, lambda_j - j)).
template <class S>
S lambda_kernel(const WeylPoint& lambda, const WeylPoint& yp, const Rates<S>& rates) {
    const std::size_t n = lambda.size();
    if (yp.size() != n) throw std::invalid_argument("lambda_kernel: length mismatch");
    Matrix<S> m(n, n);
    for (std::size_t i = 1; i <= n; ++i) {
        auto op = Composition::qdag_chain(static_cast<int>(i) + 1, static_cast<int>(n));
        for (std::size_t j = 1; j <= n; ++j)
            m(i - 1, j - 1) = entry(op, rates, yp[i - 1] - static_cast<long>(i), lambda[j - 1] - static_cast<long>(j));
    }
    return determinant(m);
}

// det((-1)^{N-j} Qinv_{(j,N]}(mu_i - i, y_j - j)).
template <class S>
S lambda_inverse_kernel(const WeylPoint& y, const WeylPoint& mu, const Rates<S>& rates) {
    const std::size_t n = y.size();
    if (mu.size() != n) throw std::invalid_argument("lambda_inverse_kernel: length mismatch");
    Matrix<S> m(n, n);
    for (std::size_t j = 1; j <= n; ++j) {
        auto op = Composition::qinv_chain(static_cast<int>(j) + 1, static_cast<int>(n));
        S sign = sign_power<S>(static_cast<long>(n - j));
        for (std::size_t i = 1; i <= n; ++i)
            m(i - 1, j - 1) = sign * entry(op, rates, mu[i - 1] - static_cast<long>(i), y[j - 1] - static_cast<long>(j));
    }
    return determinant(m);
}

// Unnormalized det(R_{(r,t]}(mu_i - i, lambda_j - j)).
template <class S>
S r_kernel(const WeylPoint& mu, const WeylPoint& lambda, const Rates<S>& rates, int r, int t) {
    const std::size_t n = mu.size();
    if (lambda.size() != n) throw std::invalid_argument("r_kernel: length mismatch");
    if (r > t) throw std::invalid_argument("r_kernel: r > t");
    auto op = Composition::r_chain(r, t);
    Matrix<S> m(n, n);
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j)
            m(i - 1, j - 1) = entry(op, rates, mu[i - 1] - static_cast<long>(i), lambda[j - 1] - static_cast<long>(j));
    return determinant(m);
}

template <class S>
S r_kernel_normalized(const WeylPoint& mu, const WeylPoint& lambda, const Rates<S>& rates, int r, int t) {
    return r_kernel(mu, lambda, rates, r, t) / rates.normalization(r, t, static_cast<int>(mu.size()));
}

// Doob transform s_lambda(q)/s_mu(q) R(mu, lambda); a transition kernel on partitions.
template <class S>
S r_kernel_hat(const WeylPoint& mu, const WeylPoint& lambda, const Rates<S>& rates, int r, int t) {
    if (!mu.empty() && mu.back() < 0) throw std::invalid_argument("r_kernel_hat: mu must be a partition");
    S v = r_kernel_normalized(mu, lambda, rates, r, t);
    if (v == S(0)) return v;
    std::vector<S> q(rates.q.begin(), rates.q.begin() + static_cast<long>(mu.size()));
    auto part = [](const WeylPoint& w) { return Partition(std::vector<int>(w.begin(), w.end())); };
    return v * schur(part(lambda), q) / schur(part(mu), q);
}

// Calls visit on every weakly decreasing v with lo[i] <= v[i] <= hi[i].
void for_each_weyl_in_box(const WeylPoint& lo, const WeylPoint& hi, const std::function<void(const WeylPoint&)>& visit);

// Transition probability Y(r) = y -> Y(t) = y' (strict positions) via Lambda^{-1} R Lambda.
template <class S>
S transition_kernel(const Config& y, const Config& yp, const Rates<S>& rates, int r, int t) {
    validate_config(y);
    validate_config(yp);
    const std::size_t n = y.size();
    if (yp.size() != n) throw std::invalid_argument("transition_kernel: length mismatch");
    if (r > t) throw std::invalid_argument("transition_kernel: r > t");
    const WeylPoint wy = to_weak(y), wyp = to_weak(yp);
    const long steps = t - r;
    WeylPoint mlo(n), mhi(n);
    for (std::size_t i = 0; i < n; ++i) {
        mlo[i] = wy[i] - static_cast<long>(n - 1 - i);
        mhi[i] = wy[i];
    }
    S total(0);
    for_each_weyl_in_box(mlo, mhi, [&](const WeylPoint& mu) {
        S a = lambda_inverse_kernel(wy, mu, rates);
        if (a == S(0)) return;
        WeylPoint llo(n), lhi(n);
        for (std::size_t i = 0; i < n; ++i) {
            llo[i] = std::max(mu[i], wyp[i]);
            lhi[i] = mu[i] + steps;
        }
        for_each_weyl_in_box(llo, lhi, [&](const WeylPoint& lam) {
            S b = r_kernel(mu, lam, rates, r, t);
            if (b == S(0)) return;
            total += a * b * lambda_kernel(lam, wyp, rates);
        });
    });
    S pref(1);
    for (std::size_t i = 0; i < n; ++i) pref *= ipow(rates.q_at(static_cast<int>(i) + 1), wyp[i] - wy[i]);
    return pref * total / rates.normalization(r, t, static_cast<int>(n));
}

// Array x^(i)_j, 1 <= j <= i <= N, with the auxiliary entries x^(k-1)_k and x^(k-1)_0.
struct TriangularArray {
    int n = 0;
    std::vector<std::vector<long>> x;  // x[i-1][j-1]
    std::vector<long> aux_right;       // aux_right[k-1] = x^(k-1)_k
    std::vector<long> aux_left;        // aux_left[k-1] = x^(k-1)_0

    long at(int i, int j) const { return x[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]; }
    // Entry with auxiliaries; level 0 has only auxiliaries.
    long ext(int i, int j) const;
    bool strictly_interlacing() const;
};

template <class S>
struct DetEquality {
    S lhs;
    S rhs;
    bool interlacing = true;
};

template <class S>
DetEquality<S> det_equality_check(const TriangularArray& a, const Rates<S>& rates) {
    DetEquality<S> out{S(0), S(0), a.strictly_interlacing()};
    if (!out.interlacing) return out;
    S lhs(1), rhs(1);
    for (int k = 1; k <= a.n; ++k) {
        const S& q = rates.q_at(k);
        Matrix<S> ml(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
        Matrix<S> mr(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
        for (int i = 1; i <= k; ++i)
            for (int j = 1; j <= k; ++j) {
                long xj = a.at(k, j);
                long up = a.ext(k - 1, i);
                long lo = a.ext(k - 1, i - 1);
                ml(i - 1, j - 1) = xj >= up ? ipow(q, xj - up) : S(0);
                mr(i - 1, j - 1) = xj < lo ? ipow(q, xj - lo) : S(0);
            }
        lhs *= ipow(q, a.ext(k - 1, k)) * determinant(ml);
        rhs *= ipow(q, a.ext(k - 1, 0)) * determinant(mr);
    }
    out.lhs = lhs;
    out.rhs = rhs;
    return out;
}

template <class S>
void require_ordered(const Rates<S>& rates, int lo, int hi, const char* what) {
    for (int l = lo; l < hi; ++l)
        if (!(rates.q_at(l) < rates.q_at(l + 1)))
            throw RegimeError(std::string(what) + ": q_" + std::to_string(l) + " < q_" + std::to_string(l + 1));
}

// Q_{[j,k]}(x_0^{(j-1)}, y) with the virtual-variable convention.
template <class S>
S virtual_q_entry(int j, int k, long y, const Rates<S>& rates) {
    if (k < j) return S(0);
    require_ordered(rates, j, k, "virtual_q_entry");
    const S& qj = rates.q_at(j);
    S den(1);
    for (int l = j + 1; l <= k; ++l) den *= rates.q_at(l) - qj;
    return ipow(qj, y + k - j) / den;
}

}  // namespace tasep
