#pragma once

#include "tasep/combinatorics.hpp"
#include "tasep/dynamics.hpp"
#include "tasep/scalar.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tasep {

enum class FactorKind { Q, Qinv, Qdag, R, Rstar, Qbar };

// One elementary factor. Q, Qinv, Qdag act with q_index; R, Rstar with p_index;
// Qbar carries the particle range [lo, hi].
struct Factor {
    FactorKind kind;
    int lo = 0;
    int hi = 0;
};

class DivergentComposition : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Ordered composition of local operators; entry(x, y) = (F_1 o F_2 o ...)(x, y).
class Composition {
public:
    Composition() = default;
    explicit Composition(std::vector<Factor> f) : factors_(std::move(f)) {}

    static Composition identity() { return {}; }
    static Composition q(int i) { return Composition({{FactorKind::Q, i, i}}); }
    static Composition qinv(int i) { return Composition({{FactorKind::Qinv, i, i}}); }
    static Composition qdag(int i) { return Composition({{FactorKind::Qdag, i, i}}); }
    static Composition r(int i) { return Composition({{FactorKind::R, i, i}}); }
    static Composition rstar(int i) { return Composition({{FactorKind::Rstar, i, i}}); }
    static Composition qbar(int j, int k) { return Composition({{FactorKind::Qbar, j, k}}); }

    // Q_{[m,n]} = Q_m o ... o Q_n; identity for m = n+1; for m > n+1 the
    // extended convention Q_{m-1}^{-1} o ... o Q_{n+1}^{-1} (inverse-only).
    static Composition q_chain(int m, int n);
    // Q^{-1}_{[m,n]} = Q_n^{-1} o ... o Q_m^{-1}.
    static Composition qinv_chain(int m, int n);
    static Composition qdag_chain(int m, int n);
    // R_{(r,t]} and R*_{(r,t]}.
    static Composition r_chain(int r, int t);
    static Composition rstar_chain(int r, int t);

    Composition then(const Composition& other) const {
        auto f = factors_;
        f.insert(f.end(), other.factors_.begin(), other.factors_.end());
        return Composition(f);
    }
    const std::vector<Factor>& factors() const { return factors_; }
    // True when some factor uses the extended (m > n+1) convention.
    bool inverse_only() const { return inverse_only_; }
    std::string str() const;

private:
    std::vector<Factor> factors_;
    bool inverse_only_ = false;
};

namespace detail {

// Laurent polynomial in offsets: coefficient of offset e = min + index.
template <class S>
struct OffsetPoly {
    long min = 0;
    std::vector<S> c{S(1)};

    void times(const OffsetPoly& o) {
        std::vector<S> out(c.size() + o.c.size() - 1, S(0));
        for (std::size_t a = 0; a < c.size(); ++a) {
            if (c[a] == S(0)) continue;
            for (std::size_t b = 0; b < o.c.size(); ++b) out[a + b] += c[a] * o.c[b];
        }
        min += o.min;
        c = std::move(out);
    }
    S at(long e) const {
        long i = e - min;
        return (i < 0 || i >= static_cast<long>(c.size())) ? S(0) : c[static_cast<std::size_t>(i)];
    }
};

// Coefficient of offset d in Q_{a_1} o ... o Q_{a_K}: (prod 1/a) h_{-d-K}(1/a).
template <class S>
S q_chain_coeff(const std::vector<S>& qs, long d) {
    const long K = static_cast<long>(qs.size());
    if (K == 0) return d == 0 ? S(1) : S(0);
    long deg = -d - K;
    if (deg < 0) return S(0);
    std::vector<S> inv;
    S pre(1);
    for (const S& v : qs) {
        inv.push_back(S(1) / v);
        pre /= v;
    }
    return pre * complete_h(static_cast<int>(deg), inv);
}

template <class S>
S qdag_chain_coeff(const std::vector<S>& qs, long d) {
    if (qs.empty()) return d == 0 ? S(1) : S(0);
    return complete_h(static_cast<int>(d < 0 ? -1 : d), qs);
}

}  // namespace detail

template <class S>
const S& rate_q(const Rates<S>& rates, int i) {
    if (i < 1 || i > rates.n_particles()) throw std::invalid_argument("operator factor references q_" + std::to_string(i));
    return rates.q_at(i);
}

template <class S>
const S& rate_p(const Rates<S>& rates, int i) {
    if (i < 1 || i > rates.horizon()) throw std::invalid_argument("operator factor references p_" + std::to_string(i));
    return rates.p_at(i);
}

// Exact entry of a composition at (x, y); depends only on y - x.
template <class S>
S entry(const Composition& op, const Rates<S>& rates, long x, long y) {
    detail::OffsetPoly<S> poly;
    std::vector<S> qs, qdags;
    const Factor* bar = nullptr;
    for (const Factor& f : op.factors()) {
        detail::OffsetPoly<S> g;
        switch (f.kind) {
            case FactorKind::Q: qs.push_back(rate_q(rates, f.lo)); continue;
            case FactorKind::Qdag: qdags.push_back(rate_q(rates, f.lo)); continue;
            case FactorKind::Qbar:
                if (bar) throw DivergentComposition("composition with two Qbar factors has no finite support");
                bar = &f;
                continue;
            case FactorKind::Qinv:
                g.min = 0;
                g.c = {S(-1), rate_q(rates, f.lo)};
                break;
            case FactorKind::R:
                g.min = 0;
                g.c = {S(1), rate_p(rates, f.lo)};
                break;
            case FactorKind::Rstar:
                g.min = -1;
                g.c = {rate_p(rates, f.lo), S(1)};
                break;
        }
        poly.times(g);
    }
    const int kinds = (!qs.empty()) + (!qdags.empty()) + (bar != nullptr);
    if (kinds > 1) throw DivergentComposition("composition mixes left and right infinite-support factors: " + op.str());
    std::vector<S> barq;
    if (bar) {
        for (int l = bar->lo; l <= bar->hi; ++l) barq.push_back(rate_q(rates, l));
    }
    const long d = y - x;
    S total(0);
    for (std::size_t i = 0; i < poly.c.size(); ++i) {
        if (poly.c[i] == S(0)) continue;
        const long rest = d - (poly.min + static_cast<long>(i));
        S g;
        if (!qs.empty()) g = detail::q_chain_coeff(qs, rest);
        else if (!qdags.empty()) g = detail::qdag_chain_coeff(qdags, rest);
        else if (bar) {
            g = rest < 0 ? detail::q_chain_coeff(barq, rest)
                         : S(sign_power<S>(bar->hi - bar->lo) * detail::qdag_chain_coeff(barq, rest));
        } else g = rest == 0 ? S(1) : S(0);
        total += poly.c[i] * g;
    }
    return total;
}

// Coefficients for offsets dmin..dmax.
template <class S>
std::vector<S> laurent_window(const Composition& op, const Rates<S>& rates, long dmin, long dmax) {
    std::vector<S> out;
    for (long d = dmin; d <= dmax; ++d) out.push_back(entry(op, rates, 0, d));
    return out;
}

}  // namespace tasep
