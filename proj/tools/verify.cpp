// Identity suite behind `tasep verify`; one manifest entry per listed invariant.
#include "cli_common.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <algorithm>
#include <functional>
#include <random>

namespace cli {

namespace {

using tasep::Config;
using tasep::Composition;
using tasep::Rates;
using tasep::Rational;
using tasep::WeylPoint;

constexpr double kTol = 1e-10;

struct Tally {
    int checks = 0;
    int failures = 0;
    double worst = 0;
    double tol = 0;
    std::optional<CheckResult> first_failure;

    void add(const CheckResult& c) {
        ++checks;
        worst = std::max(worst, c.abs_diff);
        tol = std::max(tol, c.tol);
        if (!c.pass) {
            ++failures;
            if (!first_failure) first_failure = c;
        }
    }
    // Float tolerances are relative to max(1, |a|, |b|).
    template <class S>
    void eq(const std::string& name, const S& a, const S& b, double t = kTol) {
        const double scale = std::max({1.0, std::abs(tasep::to_double(a)), std::abs(tasep::to_double(b))});
        add(compare<S>(name, a, b, t * scale));
    }
    void truth(const std::string& name, bool ok) {
        CheckResult c;
        c.name = name;
        c.lhs = ok;
        c.rhs = true;
        c.abs_diff = ok ? 0 : 1;
        c.pass = ok;
        add(c);
    }
};

template <class S>
Rates<S> as(const Rates<Rational>& r) {
    if constexpr (tasep::ScalarTraits<S>::exact) return r;
    else return r.template convert<double>();
}

template <class S>
S from(const Rational& r) {
    return tasep::scalar_from<S>(r);
}

Rates<Rational> rates4() {
    return {{Rational(1, 4), Rational(1, 3), Rational(1, 5), Rational(1, 6)}, {Rational(3, 2), Rational(2), Rational(3), Rational(7, 2)}};
}

// Same q, with q_k p_s < 1 throughout.
Rates<Rational> regime_rates4() {
    return {{Rational(1, 4), Rational(1, 5), Rational(1, 6)}, {Rational(3, 2), Rational(2), Rational(3), Rational(7, 2)}};
}

std::vector<tasep::Query> queries_for(const Config& y, int t, std::mt19937_64& rng) {
    const int n = static_cast<int>(y.size());
    std::vector<tasep::Query> q;
    while (q.empty())
        for (int k = 1; k <= n; ++k)
            if (rng() % 2) q.push_back({k, std::uniform_int_distribution<long>(y[k - 1] - 1, y[k - 1] + t + 1)(rng)});
    return q;
}

// combinatorics

void chain_round_trip(Tally& tl, bool full) {
    const int max_size = full ? 8 : 6;
    for (int n = 1; n <= 4; ++n)
        for (int size = 0; size <= max_size; ++size)
            for (const auto& lambda : tasep::partitions_of_size(size)) {
                if (static_cast<int>(lambda.length()) > n) continue;
                tasep::for_each_chain(lambda, n, [&](const std::vector<tasep::Partition>& chain) {
                    tasep::Tableau t = tasep::chain_to_tableau(chain);
                    tl.truth("chain_to_tableau(tableau_to_chain(T)) = T", tasep::chain_to_tableau(tasep::tableau_to_chain(t, n)) == t &&
                                                                             tasep::tableau_to_chain(t, n) == chain);
                });
            }
}

void conjugate_involution(Tally& tl, bool full) {
    for (int size = 0; size <= (full ? 12 : 9); ++size)
        for (const auto& lambda : tasep::partitions_of_size(size)) tl.truth("conjugate(conjugate(l)) = l", tasep::conjugate(tasep::conjugate(lambda)) == lambda);
}

template <class S>
void schur_two_forms(Tally& tl, bool full) {
    std::mt19937_64 rng(31);
    for (int n = 1; n <= 3; ++n)
        for (int draw = 0; draw < (full ? 4 : 2); ++draw) {
            std::vector<S> x;
            for (int i = 0; i < n; ++i) x.push_back(from<S>(oracle::random_rational(rng, -5, 5, 6)));
            for (int size = 0; size <= 6; ++size)
                for (const auto& lambda : tasep::partitions_of_size(size))
                    tl.eq("schur chains = schur tableaux", tasep::schur(lambda, x), oracle::schur_by_tableaux(lambda, x));
        }
}

template <class S>
void dual_cauchy(Tally& tl, bool full) {
    std::mt19937_64 rng(404);
    for (int t = 1; t <= 4; ++t)
        for (int n = 1; n <= 4; ++n)
            for (int draw = 0; draw < (full ? 5 : 1); ++draw) {
                std::vector<S> p, q;
                for (int i = 0; i < t; ++i) p.push_back(from<S>(oracle::random_rational(rng, -6, 6, 7)));
                for (int i = 0; i < n; ++i) q.push_back(from<S>(oracle::random_rational(rng, -6, 6, 7)));
                tl.eq("dual Cauchy residual", tasep::dual_cauchy_residual(p, q), S(0));
            }
}

// drsk

void bijectivity(Tally& tl, bool full) {
    for (int n = 1; n <= 3; ++n)
        for (int m = 1; m <= 4; ++m)
            for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * m)); ++code) {
                auto w = tasep::BitMatrix::from_code(n, m, code);
                auto res = tasep::drsk_forward(w);
                tl.truth("inverse(forward(w)) = w", tasep::drsk_inverse(res.p, res.q, n, m) == w);
            }
    std::mt19937_64 rng(8);
    for (int i = 0; i < (full ? 1000 : 100); ++i) {
        auto w = tasep::BitMatrix::from_code(5, 4, rng() & ((std::uint64_t{1} << 20) - 1));
        auto res = tasep::drsk_forward(w);
        tl.truth("inverse(forward(w)) = w, 5x4", tasep::drsk_inverse(res.p, res.q, 5, 4) == w);
    }
}

void type_identities(Tally& tl, bool full) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < (full ? 1000 : 200); ++i) {
        const int n = 1 + static_cast<int>(rng() % 5), m = 1 + static_cast<int>(rng() % 4);
        auto w = tasep::BitMatrix::from_code(n, m, rng() & ((std::uint64_t{1} << (n * m)) - 1));
        auto res = tasep::drsk_forward(w);
        std::vector<int> pc(static_cast<std::size_t>(m) + 1, 0), qc(static_cast<std::size_t>(n) + 1, 0);
        for (const auto& row : res.p.rows())
            for (int v : row) ++pc[static_cast<std::size_t>(v)];
        for (const auto& row : res.q.rows())
            for (int v : row) ++qc[static_cast<std::size_t>(v)];
        bool ok = res.p.column_strict() && res.q.row_strict();
        for (int j = 1; j <= m; ++j) {
            int col = 0;
            for (int r = 1; r <= n; ++r) col += w.at(r, j);
            ok = ok && pc[static_cast<std::size_t>(j)] == col;
        }
        for (int r = 1; r <= n; ++r) {
            int row = 0;
            for (int j = 1; j <= m; ++j) row += w.at(r, j);
            ok = ok && qc[static_cast<std::size_t>(r)] == row;
        }
        tl.truth("content of P = column sums, content of Q = row sums", ok);
    }
}

// Left edge of P(s) against the sequential update from step data y_k = -k.
void left_edge_check(Tally& tl, int n, int m, std::uint64_t code, const char* name) {
    auto w = tasep::BitMatrix::from_code(n, m, code);
    auto res = tasep::drsk_forward(w);
    Config y(static_cast<std::size_t>(m));
    for (int k = 1; k <= m; ++k) y[static_cast<std::size_t>(k - 1)] = -k;
    bool ok = true;
    for (int s = 1; s <= n; ++s) {
        y = tasep::step(y, w.row(s));
        auto edge = tasep::left_edge_sequence(res.p_history[static_cast<std::size_t>(s)], m);
        for (int k = 1; k <= m; ++k) ok = ok && edge[static_cast<std::size_t>(k - 1)] - k == y[static_cast<std::size_t>(k - 1)];
    }
    tl.truth(name, ok);
}

void left_edge_autonomy(Tally& tl, bool full) {
    for (int n = 1; n <= 3; ++n)
        for (int m = 1; m <= (full ? 4 : 3); ++m)
            for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * m)); ++code)
                left_edge_check(tl, n, m, code, "left edge follows the sequential recursion");
}

// dynamics

void exclusion_and_monotonicity(Tally& tl, bool full, bool monotone) {
    Rates<double> r{{0.2, 0.3, 0.25, 0.1, 0.4, 0.15}, {1.5, 2.0, 3.0, 1.2}};
    const Config y{3, 1, 0, -4};
    for (std::uint64_t seed = 1; seed <= (full ? 500u : 50u); ++seed) {
        auto traj = tasep::simulate(y, r, 6, seed);
        bool ok = true;
        for (std::size_t s = 0; s < traj.size(); ++s)
            for (std::size_t k = 0; k < y.size(); ++k) {
                if (monotone) ok = ok && traj[s][k] >= y[k] && traj[s][k] <= y[k] + static_cast<long>(s) && (s == 0 || traj[s][k] >= traj[s - 1][k]);
                else ok = ok && (k + 1 == y.size() || traj[s][k] > traj[s][k + 1]);
            }
        tl.truth(monotone ? "Y_k(t) in [y_k, y_k + t]" : "strictly decreasing configuration", ok);
    }
}

void drsk_equivalence(Tally& tl, bool) {
    for (int n = 1; n <= 3; ++n)
        for (int m = 1; m <= 3; ++m)
            for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * m)); ++code)
                left_edge_check(tl, n, m, code, "dRSK left edge = step dynamics");
}

template <class S>
void transition_consistency(Tally& tl, bool full) {
    std::mt19937_64 rng(23);
    for (int n = 1; n <= 3; ++n)
        for (int t = 1; t <= 3; ++t)
            for (int draw = 0; draw < (full ? 3 : 1); ++draw) {
                auto r = as<S>(oracle::random_regime_rates(rng, n, t));
                Config y;
                for (int k = 1; k <= n; ++k) y.push_back(2 - 2 * k + (k == 2));
                for (const auto& [yp, prob] : tasep::enumerate_transition(y, r, t))
                    tl.eq("enumeration = operator kernel", prob, tasep::transition_kernel(y, yp, r, 0, t));
            }
}

// operators

template <class S>
void toeplitz_shift(Tally& tl, bool full) {
    auto r = as<S>(rates4());
    std::vector<Composition> ops{Composition::q_chain(1, 2), Composition::qinv(3), Composition::r(1), Composition::rstar(2),
                                    Composition::qdag(4), Composition::qbar(1, 3)};
    const long w = full ? 4 : 2;
    for (const auto& s : ops)
        for (long c : {-5L, 3L, 11L})
            for (long x = -w; x <= w; ++x)
                for (long y = -w; y <= w; ++y) tl.eq("entry(x, y) = entry(x + c, y + c)", tasep::entry(s, r, x, y), tasep::entry(s, r, x + c, y + c));
}

template <class S>
void commutativity(Tally& tl, bool full) {
    auto r = as<S>(rates4());
    std::vector<std::pair<Composition, Composition>> pairs{{Composition::q(1), Composition::q(2)},     {Composition::q(1), Composition::qinv(3)},
                                                             {Composition::q(2), Composition::rstar(1)}, {Composition::qdag(1), Composition::r(2)},
                                                             {Composition::qinv(2), Composition::r(3)}};
    const long w = full ? 4 : 2;
    for (const auto& [a, b] : pairs)
        for (long x = -w; x <= w; ++x)
            for (long y = -w - 2; y <= w + 2; ++y)
                tl.eq("AB = BA", oracle::direct_entry(a.then(b).factors(), r, x, y, 16), oracle::direct_entry(b.then(a).factors(), r, x, y, 16),
                      1e-9);
}

template <class S>
void q_inverse(Tally& tl, bool full) {
    auto r = as<S>(rates4());
    const long w = full ? 4 : 2;
    for (int i = 1; i <= 4; ++i)
        for (long x = -w; x <= w; ++x)
            for (long y = -w; y <= w; ++y) {
                S id = x == y ? S(1) : S(0);
                tl.eq("Q_i o Q_i^-1 = I", oracle::direct_entry(Composition::q(i).then(Composition::qinv(i)).factors(), r, x, y), id, 1e-9);
                tl.eq("Q_i o Q_i^-1 = I (engine)", tasep::entry(Composition::q(i).then(Composition::qinv(i)), r, x, y), id);
            }
}

template <class S>
void lgv(Tally& tl, bool full) {
    std::mt19937_64 rng(17);
    auto r = as<S>(rates4());
    auto random_weyl = [&](int n, long lo, long hi) {
        std::uniform_int_distribution<long> d(lo, hi);
        WeylPoint v;
        for (int i = 0; i < n; ++i) v.push_back(d(rng));
        std::sort(v.rbegin(), v.rend());
        return v;
    };
    for (int n = 1; n <= 3; ++n)
        for (int trial = 0; trial < (full ? 25 : 6); ++trial) {
            WeylPoint a = random_weyl(n, 0, 7), b = random_weyl(n, 0, 7);
            tl.eq("Lambda = paths", tasep::lambda_kernel(a, b, r), oracle::lambda_by_paths(a, b, r));
            tl.eq("Lambda^-1 = paths", tasep::lambda_inverse_kernel(a, b, r), oracle::lambda_inverse_by_paths(a, b, r));
            WeylPoint lam = b;
            for (auto& v : lam) v += std::uniform_int_distribution<long>(0, 3)(rng);
            std::sort(lam.rbegin(), lam.rend());
            tl.eq("R = paths", tasep::r_kernel(b, lam, r, 0, 3), oracle::r_by_paths(b, lam, r, 0, 3));
        }
}

template <class S>
void intertwining(Tally& tl, bool full) {
    Rates<Rational> base{{Rational(1, 4), Rational(1, 3)}, {Rational(3, 2), Rational(2), Rational(3), Rational(7, 2)}};
    for (int n = 1; n <= (full ? 4 : 3); ++n) {
        Rates<S> rn = as<S>(base);
        rn.q.resize(static_cast<std::size_t>(n));
        const int steps = n <= 3 ? 2 : 1;
        WeylPoint lo(static_cast<std::size_t>(n), 0), hi(static_cast<std::size_t>(n), full ? 2 : 1);
        tasep::for_each_weyl_in_box(lo, hi, [&](const WeylPoint& mu) {
            tasep::for_each_weyl_in_box(lo, hi, [&](const WeylPoint& yp) {
                WeylPoint lhi = mu;
                for (auto& v : lhi) v += steps;
                S lhs(0), rhs(0);
                tasep::for_each_weyl_in_box(mu, lhi, [&](const WeylPoint& lam) {
                    lhs += tasep::r_kernel_normalized(mu, lam, rn, 0, steps) * tasep::lambda_kernel(lam, yp, rn);
                });
                WeylPoint ylo(mu.size()), yhi(mu.size());
                bool empty = false;
                for (std::size_t i = 0; i < mu.size(); ++i) {
                    ylo[i] = std::max(mu.back(), yp[i] - steps);
                    yhi[i] = std::min(mu[i], yp[i]);
                    empty = empty || ylo[i] > yhi[i];
                }
                if (!empty)
                    tasep::for_each_weyl_in_box(ylo, yhi, [&](const WeylPoint& y) {
                        S qhat = tasep::transition_kernel(tasep::to_strict(y), tasep::to_strict(yp), rn, 0, steps);
                        for (std::size_t i = 0; i < y.size(); ++i) qhat *= tasep::ipow(rn.q[i], y[i] - yp[i]);
                        rhs += tasep::lambda_kernel(mu, y, rn) * qhat;
                    });
                tl.eq("R Lambda = Lambda Qhat", lhs, rhs);
            });
        });
    }
}

template <class S>
void stochasticity(Tally& tl, bool full) {
    std::mt19937_64 rng(29);
    for (int n = 1; n <= 3; ++n)
        for (int t = 1; t <= 3; ++t)
            for (int draw = 0; draw < (full ? 3 : 1); ++draw) {
                auto r = as<S>(oracle::random_regime_rates(rng, n, t));
                Config y;
                for (int k = 1; k <= n; ++k) y.push_back(1 - 2 * k);
                S total(0);
                WeylPoint lo = tasep::to_weak(y), hi = lo;
                for (auto& v : hi) v += t;
                tasep::for_each_weyl_in_box(lo, hi, [&](const WeylPoint& w) { total += tasep::transition_kernel(y, tasep::to_strict(w), r, 0, t); });
                tl.eq("sum of transition kernel = 1", total, S(1));
            }
}

// dpp

template <class S>
void biorthogonality(Tally& tl, bool full) {
    Rates<Rational> base{{Rational(1, 4), Rational(1, 3), Rational(1, 5)}, {Rational(3, 2), Rational(2), Rational(3), Rational(7, 2)}};
    auto r = as<S>(base);
    for (const Config& y : {Config{4, 2, 1, -2}, Config{-1, -2, -3, -4}})
        for (int n = 1; n <= 4; ++n)
            for (int t = 0; t <= (full ? 3 : 2); ++t) {
                tasep::BiorthSystem<S> sys(Config(y.begin(), y.begin() + n), r, 0, t);
                for (int level = 1; level <= n; ++level)
                    for (int i = 1; i <= level; ++i)
                        for (int j = 1; j <= level; ++j) tl.eq("sum Psi_i Phi_j = delta_ij", sys.biorthogonality_sum(level, i, j), i == j ? S(1) : S(0));
            }
}

template <class S>
void m_triangular(Tally& tl, bool full) {
    auto r = as<S>(Rates<Rational>{{Rational(1, 4), Rational(1, 3), Rational(1, 5)}, {Rational(3, 2), Rational(2), Rational(3), Rational(7, 2)}});
    for (const Config& y : {Config{4, 2, 1, -2}, Config{-1, -2, -3, -4}, Config{6, 0, -1, -5}})
        for (int n = 1; n <= 4; ++n)
            for (int t = 0; t <= (full ? 3 : 2); ++t) {
                Config yy(y.begin(), y.begin() + n);
                tasep::BiorthSystem<S> sys(yy, r, 0, t);
                for (int i = 1; i <= n; ++i) {
                    S diag = tasep::ipow(r.q_at(i), yy[static_cast<std::size_t>(i - 1)]);
                    for (int s = 1; s <= t; ++s) diag *= S(1) + r.p_at(s) * r.q_at(i);
                    tl.eq("M_ii closed form", sys.m()(i - 1, i - 1), diag);
                    for (int j = 1; j < i; ++j) tl.eq("M_ij = 0 below the diagonal", sys.m()(i - 1, j - 1), S(0));
                }
            }
}

void gauge_invariance(Tally& tl, bool) {
    auto r = oracle::standard_rates().convert<double>();
    r.p[1] = 0.3;
    const Config y{3, 1, 0};
    tasep::BiorthSystem<double> sys(y, r, 0, 3);
    for (const auto& q : std::vector<std::vector<tasep::Query>>{{{1, 5}, {3, 1}}, {{2, 3}}, {{1, 4}, {2, 2}, {3, 1}}}) {
        std::vector<int> levels;
        for (const auto& e : q) levels.push_back(e.k);
        tasep::KernelFn<double> base = [&](int m, long x, int n, long xp) { return sys.kernel(m, x, n, xp); };
        double ref = tasep::fredholm_det(tasep::CorrelationKernelTable<double>(base, levels, -10, 5), q, -8);
        for (double c : {2.0, 1.0 / 3.0}) {
            tasep::KernelFn<double> conj = [&, c](int m, long x, int n, long xp) { return std::pow(c, static_cast<double>(x - xp)) * sys.kernel(m, x, n, xp); };
            tl.eq("det(I - K) invariant under c^(x - x') conjugation", tasep::fredholm_det(tasep::CorrelationKernelTable<double>(conj, levels, -10, 5), q, -8),
                  ref);
        }
    }
}

template <class S>
void fredholm_stabilization(Tally& tl, bool full) {
    std::mt19937_64 rng(12);
    const Config y0{3, 1, 0};
    auto base = oracle::standard_rates();
    for (int n = 1; n <= 3; ++n)
        for (int t = 1; t <= 3; ++t) {
            Config y(y0.begin(), y0.begin() + n);
            Rates<Rational> rr{{base.p.begin(), base.p.begin() + t}, {base.q.begin(), base.q.begin() + n}};
            for (int i = 0; i < (full ? 6 : 2); ++i) {
                auto q = queries_for(y, t, rng);
                auto res = tasep::multipoint_prob_kernel(y, as<S>(rr), t, q, tasep::KernelRoute::biorthogonal, tasep::RegimePolicy::continuation);
                tl.eq("change under 5-site window growth", res.value, res.previous, 1e-12);
                tl.eq("value = enumeration oracle", res.value, from<S>(tasep::multipoint_prob_oracle(y, rr, t, q)));
            }
        }
}

template <class S>
void marginal(Tally& tl, bool full) {
    auto base = oracle::standard_rates();
    for (int t = 1; t <= (full ? 2 : 1); ++t)
        for (const Config& y : {Config{1, 0}, Config{3, 1, 0}}) {
            Rates<Rational> rr = base;
            rr.q.resize(y.size());
            auto r = as<S>(rr);
            tasep::BiorthSystem<S> sys(y, r, 0, t);
            for (const auto& [cfg, p] : tasep::enumerate_transition(y, r, t))
                tl.eq("left-edge marginal = transition kernel", tasep::dpp_left_edge_marginal(cfg, sys, 0, t), tasep::transition_kernel(y, cfg, r, 0, t));
        }
}

// hitting

template <class S>
void bvp_residual(Tally& tl, bool full) {
    auto r = as<S>(rates4());
    const Config y{3, 1, 0, -2};
    const long w = full ? 10 : 6;
    for (int n = 1; n <= 4; ++n)
        for (int k = 0; k < n; ++k) {
            auto tb = tasep::bvp_solve(n, k, r, y, -w, w);
            for (long x = -w; x <= w; ++x) tl.eq("terminal row", tb.value(k, x), tasep::ipow(r.q_at(n - k), x - tasep::curve(y, n - k)));
            for (int l = 0; l < k; ++l) {
                tl.eq("boundary zero", tb.value(l, tasep::curve(y, n - l)), S(0));
                for (long x = -w + 1; x <= w; ++x)
                    tl.eq("recursion", tb.value(l + 1, x), S(-tb.value(l, x) + r.q_at(n - l) * tb.value(l, x - 1)));
            }
        }
}

void polynomiality(Tally& tl, bool full) {
    Rates<Rational> h{{}, std::vector<Rational>(4, Rational(5, 2))};
    const Config y{3, 1, 0, -2};
    const long w = full ? 10 : 6;
    for (int n = 1; n <= 4; ++n)
        for (int k = 0; k < n; ++k) {
            auto tb = tasep::bvp_solve(n, k, h, y, -w, w);
            for (int l = 0; l <= k; ++l) {
                std::vector<Rational> f;
                for (long x = -w; x <= w; ++x) f.push_back(tb.value(l, x) * tasep::ipow(h.q[0], -x));
                for (int order = 0; order <= k - l; ++order)
                    for (std::size_t i = 0; i + 1 < f.size(); ++i) f[i] = f[i + 1] - f[i];
                for (std::size_t i = 0; i + static_cast<std::size_t>(k - l + 1) < f.size(); ++i) tl.eq("finite difference of order k-l+1", f[i], Rational(0));
            }
        }
}

template <class S>
void g_identity(Tally& tl, bool full) {
    auto r = as<S>(Rates<Rational>{{}, {Rational(3, 2), Rational(2), Rational(3), Rational(7, 2)}});
    const Config y{3, 1, 0, -2};
    for (int n = 1; n <= (full ? 4 : 3); ++n) {
        Config yy(y.begin(), y.begin() + n);
        tasep::GFunction<S> g(n, yy, r, yy.back() - 30, yy.front() + 30);
        const long step = full ? 1 : 2;
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n - k; ++j)
                for (long z1 = yy.back() - 5; z1 <= yy.front() + 5; z1 += step)
                    for (long z2 = yy.back() - 5; z2 <= yy.front() + 5; z2 += step)
                        tl.eq("G sum = G hitting", g(j, k, z1, z2, tasep::GMode::sum), g(j, k, z1, z2, tasep::GMode::hitting), 1e-9);
    }
}

template <class S>
void kernel_identity(Tally& tl, bool full) {
    std::mt19937_64 rng(909);
    for (int e = 0; e < (full ? 100 : 25); ++e) {
        const int n = 1 + static_cast<int>(rng() % 3), t = 1 + static_cast<int>(rng() % 3);
        auto r = as<S>(oracle::random_regime_rates(rng, n, t));
        Config y;
        long pos = 2;
        for (int k = 0; k < n; ++k) {
            y.push_back(pos);
            pos -= 1 + static_cast<long>(rng() % 2);
        }
        const int m = 1 + static_cast<int>(rng() % n), l = 1 + static_cast<int>(rng() % n);
        const long x = std::uniform_int_distribution<long>(y.back() - 3, y.front() + 3)(rng);
        const long xp = std::uniform_int_distribution<long>(y.back() - 3, y.front() + 3)(rng);
        tasep::BiorthSystem<S> sys(y, r, 0, t);
        tasep::HittingKernel<S> hk(y, r, t);
        tl.eq("hitting kernel = biorthogonal kernel", hk(m, x, l, xp), sys.kernel(m, x, l, xp), 1e-12);
    }
}

void sbar_dual(Tally& tl, bool full) {
    auto r = regime_rates4().convert<double>();
    const long w = full ? 3 : 2;
    for (int j = 1; j <= 3; ++j)
        for (int k = j; k <= 4; ++k)
            for (int t = 0; t <= 3; ++t)
                for (long x = -w; x <= w; ++x)
                    for (long y = -w; y <= w; ++y) {
                        double a = tasep::sbar_kernel(j, k, 0, t, x, y, r);
                        double b = tasep::sbar_series(j, k, 0, t, x, y, r, 400);
                        tl.eq("Sbar residue form = series form", a, b, 1e-12 * std::max(1.0, std::abs(a)));
                    }
}

template <class S>
void epigraph_step(Tally& tl, bool) {
    auto r = as<S>(regime_rates4());
    const Config step{-1, -2, -3};
    for (int n = 1; n <= 3; ++n)
        for (long x = -5; x <= 3; ++x)
            for (long xp = -4; xp <= 4; ++xp) {
                S den(1);
                for (int l = 1; l <= n; ++l) den *= r.q_at(l) - S(1);
                S expect = x > -1 ? S(tasep::sbar_kernel(1, n, 0, 2, x, xp, r) / den) : S(0);
                tl.eq("Sbar^epi for step data", tasep::sbar_epi(n, 0, 2, x, xp, step, r), expect, 1e-12);
            }
}

template <class S>
void hitting_law_mass(Tally& tl, bool) {
    auto r = as<S>(rates4());
    const Config y{3, 1, 0, -2};
    for (int n = 1; n <= 4; ++n)
        for (int start = 0; start < n; ++start)
            for (long z1 = -3; z1 <= 4; ++z1) {
                auto law = tasep::hitting_law(z1, y, n, r, start);
                tl.eq("P(tau < n) + P(tau >= n) = 1", S(law.total_before_horizon() + law.tail), S(1), 1e-12);
            }
}

// harness

void determinism(Tally& tl, bool full) {
    ExperimentConfig cfg;
    cfg.y = {3, 1, 0};
    cfg.t = 3;
    cfg.p = {Rational(1, 4), Rational(1, 3), Rational(1, 5)};
    cfg.q = {Rational(3, 2), Rational(2), Rational(5, 2)};
    cfg.query = {{1, 5}, {3, 1}};
    cfg.seed = 2024;
    cfg.replicas = full ? 20000 : 2000;
    const std::string a = run_simulate(cfg).body.dump();
    const std::string b = run_simulate(cfg).body.dump();
    tl.truth("identical config and seed give identical simulate reports", a == b);
    cfg.replicas = 1;
    tl.truth("identical single-trajectory reports", run_simulate(cfg).body.dump() == run_simulate(cfg).body.dump());
    const std::string f1 = run_fredholm(cfg).body.dump();
    tl.truth("identical fredholm reports", f1 == run_fredholm(cfg).body.dump());
}

struct ManifestEntry {
    std::string module, name;
    std::function<void(Tally&, bool)> exact, approx;  // approx empty: backend independent
};

std::vector<ManifestEntry> manifest() {
    using R = Rational;
    return {
        {"combinatorics", "chain_round_trip", chain_round_trip, {}},
        {"combinatorics", "conjugate_involution", conjugate_involution, {}},
        {"combinatorics", "schur_two_forms", schur_two_forms<R>, schur_two_forms<double>},
        {"combinatorics", "dual_cauchy", dual_cauchy<R>, dual_cauchy<double>},
        {"drsk", "bijectivity", bijectivity, {}},
        {"drsk", "type_identities", type_identities, {}},
        {"drsk", "left_edge_autonomy", left_edge_autonomy, {}},
        {"dynamics", "exclusion", [](Tally& t, bool f) { exclusion_and_monotonicity(t, f, false); }, {}},
        {"dynamics", "monotonicity", [](Tally& t, bool f) { exclusion_and_monotonicity(t, f, true); }, {}},
        {"dynamics", "drsk_equivalence", drsk_equivalence, {}},
        {"dynamics", "transition_consistency", transition_consistency<R>, transition_consistency<double>},
        {"operators", "toeplitz_shift", toeplitz_shift<R>, toeplitz_shift<double>},
        {"operators", "commutativity", commutativity<R>, commutativity<double>},
        {"operators", "q_inverse", q_inverse<R>, q_inverse<double>},
        {"operators", "lgv", lgv<R>, lgv<double>},
        {"operators", "intertwining", intertwining<R>, intertwining<double>},
        {"operators", "stochasticity", stochasticity<R>, stochasticity<double>},
        {"dpp", "biorthogonality", biorthogonality<R>, biorthogonality<double>},
        {"dpp", "m_triangular", m_triangular<R>, m_triangular<double>},
        {"dpp", "gauge_invariance", gauge_invariance, {}},
        {"dpp", "fredholm_stabilization", fredholm_stabilization<R>, fredholm_stabilization<double>},
        {"dpp", "marginal", marginal<R>, marginal<double>},
        {"hitting", "bvp_residual", bvp_residual<R>, bvp_residual<double>},
        {"hitting", "polynomiality", polynomiality, {}},
        {"hitting", "g_identity", g_identity<R>, g_identity<double>},
        {"hitting", "kernel_identity", kernel_identity<R>, kernel_identity<double>},
        {"hitting", "sbar_dual", sbar_dual, {}},
        {"hitting", "epigraph_step", epigraph_step<R>, epigraph_step<double>},
        {"hitting", "hitting_law_mass", hitting_law_mass<R>, hitting_law_mass<double>},
        {"harness", "determinism", determinism, {}},
    };
}

}  // namespace

std::vector<std::string> verify_manifest() {
    std::vector<std::string> out;
    for (const auto& e : manifest()) out.push_back(e.module + "." + e.name);
    return out;
}

json run_verify(const std::string& level, const std::string& backend, bool timing, bool& all_pass) {
    if (level != "quick" && level != "full") throw ConfigError("level must be 'quick' or 'full'");
    const bool full = level == "full";
    all_pass = true;
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "verify";
    j["level"] = level;
    j["backend"] = backend;
    json entries = json::array();
    int passed = 0;
    for (const auto& e : manifest()) {
        Tally tl;
        const bool use_float = backend == "float" && e.approx;
        auto t0 = std::chrono::steady_clock::now();
        json entry;
        entry["id"] = e.module + "." + e.name;
        entry["backend"] = e.approx ? backend : "exact";
        try {
            (use_float ? e.approx : e.exact)(tl, full);
        } catch (const std::exception& ex) {
            tl.truth(std::string("exception: ") + ex.what(), false);
        }
        const bool pass = tl.failures == 0 && tl.checks > 0;
        entry["checks"] = tl.checks;
        entry["failures"] = tl.failures;
        entry["worst_abs_diff"] = tl.worst;
        entry["tolerance"] = tl.tol;
        entry["pass"] = pass;
        if (tl.first_failure) entry["first_failure"] = check_json(*tl.first_failure);
        if (timing) entry["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        entries.push_back(entry);
        passed += pass;
        all_pass = all_pass && pass;
    }
    j["entries"] = entries;
    j["passed"] = passed;
    j["total"] = static_cast<int>(entries.size());
    j["pass"] = all_pass;
    return j;
}

}  // namespace cli
