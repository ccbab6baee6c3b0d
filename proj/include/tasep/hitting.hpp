#pragma once

#include "tasep/dpp.hpp"
#include "tasep/dynamics.hpp"
#include "tasep/operators.hpp"
#include "tasep/toeplitz.hpp"

#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tasep {

// How strictly parameter predicates are enforced. `continuation` admits any
// positive, pairwise distinct q (the analytically continued formulas).
enum class RegimePolicy { enforce, continuation };

// y_i with y_{N+1} = -infinity; strict positions, 1-based.
inline long curve(const Config& y, int i) {
    if (i > static_cast<int>(y.size())) return std::numeric_limits<long>::min();
    return y.at(static_cast<std::size_t>(i - 1));
}

namespace detail {

template <class S>
std::vector<S> poly_times_linear(std::vector<S> c, const S& a, const S& b) {  // c(z) * (a + b z)
    std::vector<S> out(c.size() + 1, S(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
        out[i] += c[i] * a;
        out[i + 1] += c[i] * b;
    }
    return out;
}

template <class S>
void check_pq(const Rates<S>& rates, int j, int k, int r, int t, RegimePolicy policy, const char* what) {
    for (int l = j; l <= k; ++l) {
        if (!(rates.q_at(l) > S(0))) throw RegimeError(std::string(what) + ": q_" + std::to_string(l) + " > 0");
        if (policy == RegimePolicy::enforce) {
            for (int i = r + 1; i <= t; ++i)
                if (!(rates.q_at(l) * rates.p_at(i) < S(1)))
                    throw RegimeError(std::string(what) + ": q_" + std::to_string(l) + " * p_" + std::to_string(i) + " < 1");
        }
    }
}

}  // namespace detail

// Coefficient of z^{x-y+k-j+1} in prod_{l=j..k}(q_l - z) prod_{l=r+1..t}(1 + p_l z).
template <class S>
S s_kernel(int j, int k, int r, int t, long x, long y, const Rates<S>& rates) {
    if (j < 1 || j > k + 1 || r > t) throw std::invalid_argument("s_kernel: index range");
    std::vector<S> c{S(1)};
    for (int l = j; l <= k; ++l) c = detail::poly_times_linear(c, rates.q_at(l), S(-1));
    for (int l = r + 1; l <= t; ++l) c = detail::poly_times_linear(c, S(1), rates.p_at(l));
    long e = x - y + k - j + 1;
    if (e < 0 || e >= static_cast<long>(c.size())) return S(0);
    return c[static_cast<std::size_t>(e)];
}

class RepeatedParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Residue form of Sbar_{[j,k],(r,t]}(x, y).
template <class S>
S sbar_kernel(int j, int k, int r, int t, long x, long y, const Rates<S>& rates, RegimePolicy policy = RegimePolicy::enforce) {
    if (j < 1 || j > k || r > t) throw std::invalid_argument("sbar_kernel: index range");
    detail::check_pq(rates, j, k, r, t, policy, "sbar_kernel");
    for (int a = j; a <= k; ++a)
        for (int b = a + 1; b <= k; ++b)
            if (rates.q_at(a) == rates.q_at(b))
                throw RepeatedParameter("sbar_kernel: q_" + std::to_string(a) + " = q_" + std::to_string(b) +
                                        "; perturb with perturb_repeated_q");
    S pref(1);
    for (int l = j; l <= k; ++l) pref *= rates.q_at(l) - S(1);
    S total(0);
    for (int i = j; i <= k; ++i) {
        const S& qi = rates.q_at(i);
        S den(1);
        for (int l = j; l <= k; ++l)
            if (l != i) den *= rates.q_at(l) - qi;
        for (int l = r + 1; l <= t; ++l) den *= S(1) + rates.p_at(l) * qi;
        total += ipow(qi, y - x + k - j) / den;
    }
    return pref * total;
}

// Separates coincident q values: the m-th repeat of a value v becomes v(1 + m eps).
Rates<double> perturb_repeated_q(const Rates<double>& rates, double eps = 0x1p-40);

// Series form prod(q_l - 1) (Qbar_{[j,k]} o (R*_{(r,t]})^{-1})(x, y), truncated after `terms` sites.
template <class S>
S sbar_series(int j, int k, int r, int t, long x, long y, const Rates<S>& rates, long terms) {
    // (R*)^{-1}(u, y) = [z^{u-y}] 1 / prod(1 + p z)
    std::vector<S> inv(static_cast<std::size_t>(terms) + 1, S(0));
    inv[0] = S(1);
    for (int l = r + 1; l <= t; ++l) {
        const S& p = rates.p_at(l);
        for (std::size_t d = 1; d < inv.size(); ++d) inv[d] -= p * inv[d - 1];
    }
    auto bar = Composition::qbar(j, k);
    S pref(1);
    for (int l = j; l <= k; ++l) pref *= rates.q_at(l) - S(1);
    S total(0);
    for (long d = 0; d <= terms; ++d) total += entry(bar, rates, x, y + d) * inv[static_cast<std::size_t>(d)];
    return pref * total;
}

// Law of the first time m in {start..n} that S_m > y_{m+1}, for the walk with
// S_start = z1 and steps P(S_l = b | S_{l-1} = a) = (q_l - 1) q_l^{b-a} 1{b < a}.
template <class S>
struct HittingLaw {
    long z1 = 0;
    int start = 0;
    int horizon = 0;
    std::map<std::pair<int, long>, S> hits;  // (m, z) -> P(tau = m, S_m = z), m < horizon
    S tail{};                                 // P(tau >= horizon), by survival recursion

    S at(int m, long z) const {
        auto it = hits.find({m, z});
        return it == hits.end() ? S(0) : it->second;
    }
    S total_before_horizon() const {
        S acc(0);
        for (const auto& [key, v] : hits) acc += v;
        return acc;
    }
};

namespace detail {

// P(S_m <= y_{m+1} for m = k..n-1 | S_k = x).
template <class S>
S survival(int k, long x, const Config& y, int n, const Rates<S>& rates) {
    if (k >= n) return S(1);
    if (x > curve(y, k + 1)) return S(0);
    if (k + 1 == n) return S(1);
    // Below `safe` every continuation stays under the curve.
    long safe = std::numeric_limits<long>::max();
    for (int m = k + 1; m <= n - 1; ++m) safe = std::min(safe, curve(y, m + 1) + (m - (k + 1)));
    const S& q = rates.q_at(k + 1);
    long c = std::min(safe, x - 1);
    S acc = ipow(q, c + 1 - x);  // sum_{x' <= c} (q - 1) q^{x'-x}
    for (long xp = c + 1; xp <= x - 1; ++xp) acc += (q - S(1)) * ipow(q, xp - x) * survival(k + 1, xp, y, n, rates);
    return acc;
}

}  // namespace detail

template <class S>
HittingLaw<S> hitting_law(long z1, const Config& y, int n, const Rates<S>& rates, int start = 0) {
    if (n > static_cast<int>(y.size()) || start < 0 || start > n) throw std::invalid_argument("hitting_law: horizon out of range");
    HittingLaw<S> law;
    law.z1 = z1;
    law.start = start;
    law.horizon = n;
    if (z1 > curve(y, start + 1) && start < n) {
        law.hits[{start, z1}] = S(1);
        law.tail = S(0);
        return law;
    }
    if (start == n) {
        law.tail = S(1);
        return law;
    }
    // Surviving mass restricted to sites that can still hit before the horizon.
    const long floor = curve(y, n);
    std::map<long, S> alive{{z1, S(1)}};
    for (int m = start + 1; m <= n - 1; ++m) {
        const S& q = rates.q_at(m);
        std::map<long, S> next;
        for (const auto& [x, mass] : alive)
            for (long z = floor + 1; z < x; ++z) next[z] += mass * (q - S(1)) * ipow(q, z - x);
        alive.clear();
        for (const auto& [z, mass] : next) {
            if (z > curve(y, m + 1)) law.hits[{m, z}] += mass;
            else alive[z] += mass;
        }
    }
    law.tail = detail::survival(start, z1, y, n, rates);
    return law;
}

// Solution h^n_k(l, x), 0 <= l <= k, of the terminal-boundary value problem on [lo, hi].
template <class S>
class BvpTable {
public:
    BvpTable(int n, int k, const Config& y, const Rates<S>& rates, long lo, long hi) : n_(n), k_(k), lo_(lo), hi_(hi) {
        if (k < 0 || k >= n || n > static_cast<int>(y.size())) throw std::invalid_argument("bvp_solve: need 0 <= k < n <= N");
        for (int l = 0; l <= k; ++l) {
            long b = curve(y, n - l);
            if (b < lo || b > hi) throw std::invalid_argument("bvp_solve: window must contain the boundary points");
        }
        const std::size_t w = static_cast<std::size_t>(hi - lo + 1);
        rows_.assign(static_cast<std::size_t>(k) + 1, std::vector<S>(w, S(0)));
        const S& qk = rates.q_at(n - k);
        for (long x = lo; x <= hi; ++x) rows_[static_cast<std::size_t>(k)][static_cast<std::size_t>(x - lo)] = ipow(qk, x - curve(y, n - k));
        for (int l = k - 1; l >= 0; --l) {
            const S& q = rates.q_at(n - l);
            const long b = curve(y, n - l);
            auto& row = rows_[static_cast<std::size_t>(l)];
            for (long x = lo; x <= hi; ++x) {
                S acc(0);
                if (x <= b) {
                    for (long u = x + 1; u <= b; ++u) acc += ipow(q, x - u) * value(l + 1, u);
                } else {
                    for (long u = b + 1; u <= x; ++u) acc -= ipow(q, x - u) * value(l + 1, u);
                }
                row[static_cast<std::size_t>(x - lo)] = acc;
            }
        }
    }

    int n() const { return n_; }
    int k() const { return k_; }
    long lo() const { return lo_; }
    long hi() const { return hi_; }
    const S& value(int l, long x) const {
        if (l < 0 || l > k_ || x < lo_ || x > hi_) throw std::out_of_range("bvp table: entry outside window");
        return rows_[static_cast<std::size_t>(l)][static_cast<std::size_t>(x - lo_)];
    }

private:
    int n_, k_;
    long lo_, hi_;
    std::vector<std::vector<S>> rows_;
};

template <class S>
BvpTable<S> bvp_solve(int n, int k, const Rates<S>& rates, const Config& y, long lo, long hi) {
    return BvpTable<S>(n, k, y, rates, lo, hi);
}

// Phi^(n)_{n-k} o R*_{(r,t]} o Qinv_{(n-l,n]} evaluated at x.
template <class S>
S bvp_closed_form(int n, int k, int l, long x, const BiorthSystem<S>& sys, int r, int t) {
    auto op = Composition::rstar_chain(r, t).then(Composition::qinv_chain(n - l + 1, n));
    // Phi has unbounded support; the operator has offsets in [-(t-r), l].
    S acc(0);
    for (long z = x - l; z <= x + (t - r); ++z) acc += sys.phi(n, n - k, z) * entry(op, sys.rates(), z, x);
    return acc;
}

// P(tau* = k) / prod_{j=l..k-1}(q_{n-j} - 1) for the right-moving walk started at S*_{l-1} = x.
template <class S>
S bvp_hitting_rep(int n, int k, int l, long x, const Rates<S>& rates, const Config& y) {
    if (x > curve(y, n - l)) throw std::invalid_argument("bvp_hitting_rep: representation holds only for x <= y_{n-l}");
    if (l > k || k >= n) throw std::invalid_argument("bvp_hitting_rep: need l <= k < n");
    // Mass at S*_{m-1} on paths that have stayed weakly left of the curve.
    std::map<long, S> mass{{x, S(1)}};
    for (int m = l; m < k; ++m) {
        const S& q = rates.q_at(n - m);
        const long b = curve(y, n - m);
        std::map<long, S> next;
        for (const auto& [a, w] : mass)
            for (long z = a + 1; z <= b; ++z) next[z] += w * (q - S(1)) * ipow(q, a - z);
        mass = std::move(next);
    }
    const S& qk = rates.q_at(n - k);
    const long bk = curve(y, n - k);
    S prob(0);
    for (const auto& [a, w] : mass) prob += w * ipow(qk, a - bk);  // P(step lands right of y_{n-k})
    S den(1);
    for (int j = l; j <= k - 1; ++j) den *= rates.q_at(n - j) - S(1);
    return prob / den;
}

enum class GMode { sum, hitting };

// G^(n)_{j,k}(z1, z2). The sum mode reads h values from `tables[i]` = h^n_{n-i}.
template <class S>
class GFunction {
public:
    GFunction(int n, const Config& y, const Rates<S>& rates, long lo, long hi) : n_(n), y_(y), rates_(rates) {
        for (int kk = 0; kk < n; ++kk) tables_.emplace_back(n, kk, y, rates, lo, hi);
    }

    S operator()(int j, int k, long z1, long z2, GMode mode) const {
        if (k < 0 || k > n_ - 1 || j < 0 || j > n_ - k - 1) throw std::invalid_argument("g_function: index range");
        return mode == GMode::sum ? by_sum(j, k, z1, z2) : by_hitting(j, k, z1, z2);
    }

    S by_sum(int j, int k, long z1, long z2) const {
        S acc(0);
        for (int i = j + 1; i <= n_ - k; ++i)
            acc += entry(Composition::q_chain(j + 1, i), rates_, z1, curve(y_, i)) * tables_[static_cast<std::size_t>(n_ - i)].value(k, z2);
        return acc;
    }

    S by_hitting(int j, int k, long z1, long z2) const {
        HittingLaw<S> law = hitting_law(z1, y_, n_, rates_, j);
        S acc(0);
        for (const auto& [key, prob] : law.hits) {
            auto [m, z] = key;
            if (m >= n_ - k) continue;
            acc += prob * qhat(m + 1, n_ - k, z, z2);
        }
        S den(1);
        for (int l = j + 1; l <= n_ - k; ++l) den *= rates_.q_at(l) - S(1);
        return acc / den;
    }

    // Qhat_{[a,b]} = prod(q - 1) Qbar_{[a,b]}.
    S qhat(int a, int b, long x, long y) const {
        S pref(1);
        for (int l = a; l <= b; ++l) pref *= rates_.q_at(l) - S(1);
        return pref * entry(Composition::qbar(a, b), rates_, x, y);
    }

private:
    int n_;
    Config y_;
    Rates<S> rates_;
    std::vector<BvpTable<S>> tables_;
};

// Sbar^{epi(y)}_{[1,n],(r,t]}(x, x').
template <class S>
S sbar_epi(int n, int r, int t, long x, long xp, const Config& y, const Rates<S>& rates, RegimePolicy policy = RegimePolicy::enforce) {
    HittingLaw<S> law = hitting_law(x, y, n, rates);
    S acc(0);
    for (const auto& [key, prob] : law.hits) {
        auto [k, z] = key;
        acc += sbar_kernel(k + 1, n, r, t, z, xp, rates, policy) * prob;
    }
    S den(1);
    for (int l = 1; l <= n; ++l) den *= rates.q_at(l) - S(1);
    return acc / den;
}

template <class S>
void check_hitting_regime(const Rates<S>& rates, int n, int t, RegimePolicy policy) {
    RegimeReport rep = evaluate_regime(rates, t);
    if (policy == RegimePolicy::enforce) {
        if (!rep.in_regime()) throw RegimeError(rep.failures.front());
    } else if (!rep.positive) {
        throw RegimeError(rep.failures.front());
    }
    for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b)
            if (rates.q_at(a) == rates.q_at(b)) throw RegimeError("q_" + std::to_string(a) + " != q_" + std::to_string(b));
}

// Kernel in hitting form, initial strict positions y, time t.
template <class S>
class HittingKernel {
public:
    HittingKernel(Config y, Rates<S> rates, int t, RegimePolicy policy = RegimePolicy::enforce)
        : y_(std::move(y)), rates_(std::move(rates)), t_(t), policy_(policy) {
        validate_config(y_);
        check_hitting_regime(rates_, static_cast<int>(y_.size()), t_, policy_);
    }

    S operator()(int m, long x, int n, long xp) const {
        S acc(0);
        if (n > m) acc -= entry(Composition::q_chain(m + 1, n), rates_, x, xp);
        // S_{[1,m],(0,t]}(x, z) vanishes unless x - t <= z <= x + m.
        for (long z = x - t_; z <= x + m; ++z) {
            S s = s_kernel(1, m, 0, t_, x, z, rates_);
            if (s == S(0)) continue;
            acc += s * sbar_epi(n, 0, t_, z, xp, y_, rates_, policy_);
        }
        return acc;
    }

private:
    Config y_;
    Rates<S> rates_;
    int t_;
    RegimePolicy policy_;
};

enum class KernelRoute { biorthogonal, hitting };

template <class S>
KernelFn<S> make_kernel(const Config& y, const Rates<S>& rates, int t, KernelRoute route, RegimePolicy policy) {
    if (route == KernelRoute::hitting) {
        auto k = std::make_shared<HittingKernel<S>>(y, rates, t, policy);
        return [k](int m, long x, int n, long xp) { return (*k)(m, x, n, xp); };
    }
    RegimeReport rep = evaluate_regime(rates, t);
    if (policy == RegimePolicy::enforce && !rep.in_regime()) throw RegimeError(rep.failures.front());
    if (!rep.positive) throw RegimeError(rep.failures.front());
    Rates<S> trimmed = rates;
    trimmed.q.resize(y.size());
    auto sys = std::make_shared<BiorthSystem<S>>(y, trimmed, 0, t);
    return [sys](int m, long x, int n, long xp) { return sys->kernel(m, x, n, xp); };
}

// Upper end of the window needed for the query.
inline long query_upper(const std::vector<Query>& query) {
    long hi = std::numeric_limits<long>::min();
    for (const Query& q : query) hi = std::max(hi, q.s - 1);
    return hi;
}

// P(Y_{k_i}(t) >= s_i for all i) as det(I - chi K chi).
template <class S>
FredholmResult<S> multipoint_prob_kernel(const Config& y, const Rates<S>& rates, int t, const std::vector<Query>& query,
                                         KernelRoute route, RegimePolicy policy = RegimePolicy::enforce,
                                         std::optional<long> lower = std::nullopt) {
    validate_config(y);
    validate_query(query, static_cast<int>(y.size()));
    KernelFn<S> k = make_kernel(y, rates, t, route, policy);
    if (query.empty()) return fredholm_stabilized(CorrelationKernelTable<S>(), query, 0);
    const long l0 = lower.value_or(initial_lower_edge(y, t));
    std::vector<int> levels;
    for (const Query& q : query) levels.push_back(q.k);
    const long hi = std::max(query_upper(query), l0);
    for (int extra = 1;; extra *= 2) {
        CorrelationKernelTable<S> table(k, levels, l0 - kWindowStep * extra, hi);
        try {
            return fredholm_stabilized(table, query, l0, extra);
        } catch (const FredholmNotStabilized&) {
            if (extra >= 8) throw;
        }
    }
}

}  // namespace tasep
