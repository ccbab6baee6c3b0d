#include "doctest.h"
#include "oracles.hpp"

#include "tasep/operators.hpp"
#include "tasep/toeplitz.hpp"

#include <random>

using tasep::Config;
using tasep::FactorKind;
using tasep::Composition;
using tasep::Rates;
using tasep::Rational;
using tasep::WeylPoint;

namespace {

Rates<Rational> rates4() {
    return {{Rational(1, 4), Rational(1, 3), Rational(1, 5), Rational(1, 7)}, {Rational(3, 2), Rational(2), Rational(3), Rational(7, 2)}};
}

}  // namespace

TEST_CASE("elementary entries") {
    Rates<Rational> r{{Rational(1, 4)}, {Rational(3, 2), Rational(2)}};
    CHECK(tasep::entry(Composition::q(2), r, 3, 1) == Rational(1, 4));
    CHECK(tasep::entry(Composition::q(2), r, 3, 3) == 0);
    CHECK(tasep::entry(Composition::qdag(1), r, 1, 3) == Rational(9, 4));
    CHECK(tasep::entry(Composition::qdag(1), r, 3, 3) == 1);
    CHECK(tasep::entry(Composition::qinv(1), r, 0, 0) == -1);
    CHECK(tasep::entry(Composition::qinv(1), r, 0, 1) == Rational(3, 2));
    CHECK(tasep::entry(Composition::qinv(1).then(Composition::rstar(1)), r, 5, 5) == Rational(1, 4) * Rational(3, 2) - 1);
    Rates<Rational> r2{{}, {Rational(2), Rational(3)}};
    CHECK(tasep::entry(Composition::q_chain(1, 2), r2, 3, 0) == Rational(5, 36));
    CHECK(tasep::entry(Composition::q_chain(2, 1), r2, 3, 3) == 1);
    CHECK(tasep::entry(Composition::qbar(2, 2), r2, 4, 1) == Rational(1, 27));
    CHECK(tasep::entry(Composition::qbar(2, 2), r2, 1, 4) == 27);
}

TEST_CASE("compositions equal direct convolution") {
    auto r = rates4();
    std::vector<Composition> ops{
        Composition::q_chain(1, 3),
        Composition::qdag_chain(2, 4),
        Composition::qinv_chain(1, 3),
        Composition::r_chain(0, 3),
        Composition::rstar_chain(1, 4),
        Composition::rstar_chain(0, 2).then(Composition::qinv_chain(2, 4)),
        Composition::q_chain(2, 3).then(Composition::rstar_chain(0, 2)).then(Composition::qinv_chain(3, 4)),
        Composition::qdag(1).then(Composition::r(2)).then(Composition::qinv(3)),
        Composition::q(1).then(Composition::qinv(2)).then(Composition::q(3)),
    };
    for (const auto& op : ops)
        for (long x = -3; x <= 3; ++x)
            for (long y = -4; y <= 4; ++y) CHECK(tasep::entry(op, r, x, y) == oracle::direct_entry(op.factors(), r, x, y));
}

TEST_CASE("chain closed forms") {
    auto r = rates4();
    for (long d = -2; d <= 6; ++d) {
        CHECK(tasep::entry(Composition::qdag_chain(1, 3), r, 0, d) == oracle::brute_h(static_cast<int>(d), std::vector<Rational>{r.q[0], r.q[1], r.q[2]}));
        Rational e = oracle::brute_e(static_cast<int>(d), std::vector<Rational>{r.q[1], r.q[2], r.q[3]});
        CHECK(tasep::entry(Composition::qinv_chain(2, 4), r, 0, d) == tasep::sign_power<Rational>(3 - d) * e);
    }
}

TEST_CASE("Toeplitz shift, commutativity and inverses") {
    auto r = rates4();
    std::vector<Composition> ops{Composition::q_chain(1, 2), Composition::qinv(3), Composition::r(1), Composition::rstar(2),
                                    Composition::qdag(4), Composition::qbar(1, 3)};
    for (const auto& s : ops)
        for (long c : {-5L, 3L, 11L})
            for (long x = -3; x <= 3; ++x)
                for (long y = -3; y <= 3; ++y) CHECK(tasep::entry(s, r, x, y) == tasep::entry(s, r, x + c, y + c));

    auto commute = [&](const Composition& a, const Composition& b) {
        for (long x = -3; x <= 3; ++x)
            for (long y = -5; y <= 5; ++y) {
                Rational ab = oracle::direct_entry(a.then(b).factors(), r, x, y, 16);
                Rational ba = oracle::direct_entry(b.then(a).factors(), r, x, y, 16);
                REQUIRE(ab == ba);
            }
    };
    commute(Composition::q(1), Composition::q(2));
    commute(Composition::q(1), Composition::qinv(3));
    commute(Composition::q(2), Composition::rstar(1));
    commute(Composition::qdag(1), Composition::r(2));
    commute(Composition::qinv(2), Composition::r(3));

    for (int i = 1; i <= 4; ++i)
        for (long x = -4; x <= 4; ++x)
            for (long y = -4; y <= 4; ++y) {
                Rational id = x == y ? 1 : 0;
                CHECK(oracle::direct_entry(Composition::q(i).then(Composition::qinv(i)).factors(), r, x, y) == id);
                CHECK(oracle::direct_entry(Composition::qinv(i).then(Composition::q(i)).factors(), r, x, y) == id);
                CHECK(tasep::entry(Composition::q(i).then(Composition::qinv(i)), r, x, y) == id);
            }
    CHECK_THROWS_AS(tasep::entry(Composition::q(1).then(Composition::qdag(2)), r, 0, 0), tasep::DivergentComposition);
    CHECK_THROWS_AS(tasep::entry(Composition::qbar(1, 2).then(Composition::qbar(1, 2)), r, 0, 0), tasep::DivergentComposition);
}

TEST_CASE("determinantal kernels equal path enumeration") {
    std::mt19937_64 rng(17);
    auto r = rates4();
    // One particle: both kernels are the identity.
    CHECK(tasep::lambda_kernel<Rational>({5}, {2}, r) == 0);
    CHECK(tasep::lambda_kernel<Rational>({2}, {2}, r) == 1);
    CHECK(tasep::lambda_inverse_kernel<Rational>({4}, {4}, r) == 1);
    CHECK(tasep::lambda_inverse_kernel<Rational>({4}, {3}, r) == 0);
    // Two particles: Lambda((3,1),(1,1)) = q_2^2 and Lambda^{-1}((2,1),(1,1)) = -q_2.
    CHECK(tasep::lambda_kernel<Rational>({3, 1}, {1, 1}, r) == r.q[1] * r.q[1]);
    CHECK(tasep::lambda_inverse_kernel<Rational>({2, 1}, {1, 1}, r) == -r.q[1]);
    CHECK(tasep::r_kernel<Rational>({2}, {3}, r, 1, 2) == r.p[1]);
    CHECK(tasep::r_kernel<Rational>({2}, {2}, r, 1, 2) == 1);

    auto random_weyl = [&](int n, long lo, long hi) {
        std::uniform_int_distribution<long> d(lo, hi);
        WeylPoint v;
        for (int i = 0; i < n; ++i) v.push_back(d(rng));
        std::sort(v.rbegin(), v.rend());
        return v;
    };
    for (int n = 1; n <= 3; ++n)
        for (int trial = 0; trial < 25; ++trial) {
            WeylPoint a = random_weyl(n, 0, 7), b = random_weyl(n, 0, 7);
            CHECK(tasep::lambda_kernel(a, b, r) == oracle::lambda_by_paths(a, b, r));
            CHECK(tasep::lambda_inverse_kernel(a, b, r) == oracle::lambda_inverse_by_paths(a, b, r));
            WeylPoint lam = b;
            for (auto& v : lam) v += std::uniform_int_distribution<long>(0, 3)(rng);
            std::sort(lam.rbegin(), lam.rend());
            CHECK(tasep::r_kernel(b, lam, r, 0, 3) == oracle::r_by_paths(b, lam, r, 0, 3));
            CHECK(tasep::r_kernel(a, lam, r, 1, 4) == oracle::r_by_paths(a, lam, r, 1, 4));
        }
}

TEST_CASE("Lambda and its inverse") {
    auto r = rates4();
    for (int n = 1; n <= 4; ++n) {
        WeylPoint lo(static_cast<std::size_t>(n), 0), hi(static_cast<std::size_t>(n), 3);
        tasep::for_each_weyl_in_box(lo, hi, [&](const WeylPoint& y) {
            tasep::for_each_weyl_in_box(lo, hi, [&](const WeylPoint& y2) {
                // (Lambda^{-1} Lambda)(y, y2): mu_i in [y_i - (N - i), y_i].
                WeylPoint mlo(y.size()), mhi = y;
                for (std::size_t i = 0; i < y.size(); ++i) mlo[i] = y[i] - static_cast<long>(y.size() - 1 - i);
                Rational s(0);
                tasep::for_each_weyl_in_box(mlo, mhi, [&](const WeylPoint& mu) { s += tasep::lambda_inverse_kernel(y, mu, r) * tasep::lambda_kernel(mu, y2, r); });
                REQUIRE(s == (y == y2 ? 1 : 0));
                // (Lambda Lambda^{-1})(y, y2): middle point in [y2_i, y2_i + N - i].
                WeylPoint wlo = y2, whi(y2.size());
                for (std::size_t i = 0; i < y2.size(); ++i) whi[i] = y2[i] + static_cast<long>(y2.size() - 1 - i);
                Rational s2(0);
                tasep::for_each_weyl_in_box(wlo, whi, [&](const WeylPoint& w) { s2 += tasep::lambda_kernel(y, w, r) * tasep::lambda_inverse_kernel(w, y2, r); });
                REQUIRE(s2 == (y == y2 ? 1 : 0));
            });
        });
    }
}

TEST_CASE("intertwining") {
    auto r = rates4();
    for (int n = 1; n <= 4; ++n) {
        const int steps = n <= 2 ? 2 : 1;
        Rates<Rational> rn = r;
        rn.q.resize(static_cast<std::size_t>(n));
        WeylPoint lo(static_cast<std::size_t>(n), 0), hi(static_cast<std::size_t>(n), 2);
        tasep::for_each_weyl_in_box(lo, hi, [&](const WeylPoint& mu) {
            tasep::for_each_weyl_in_box(lo, hi, [&](const WeylPoint& yp) {
                // (R Lambda)(mu, y'): lambda_i in [mu_i, mu_i + steps].
                WeylPoint llo = mu, lhi = mu;
                for (auto& v : lhi) v += steps;
                Rational lhs(0);
                tasep::for_each_weyl_in_box(llo, lhi, [&](const WeylPoint& lam) {
                    lhs += tasep::r_kernel_normalized(mu, lam, rn, 0, steps) * tasep::lambda_kernel(lam, yp, rn);
                });
                // (Lambda Qhat)(mu, y'): y in [max(mu_N, y'_i - steps), min(mu_i, y'_i)].
                WeylPoint ylo(mu.size()), yhi(mu.size());
                for (std::size_t i = 0; i < mu.size(); ++i) {
                    ylo[i] = std::max(mu.back(), yp[i] - steps);
                    yhi[i] = std::min(mu[i], yp[i]);
                }
                Rational rhs(0);
                bool empty = false;
                for (std::size_t i = 0; i < mu.size(); ++i) empty = empty || ylo[i] > yhi[i];
                if (!empty)
                    tasep::for_each_weyl_in_box(ylo, yhi, [&](const WeylPoint& y) {
                        Rational qhat = tasep::transition_kernel(tasep::to_strict(y), tasep::to_strict(yp), rn, 0, steps);
                        for (std::size_t i = 0; i < y.size(); ++i) qhat *= tasep::ipow(rn.q[i], y[i] - yp[i]);
                        rhs += tasep::lambda_kernel(mu, y, rn) * qhat;
                    });
                REQUIRE(lhs == rhs);
            });
        });
    }
}

TEST_CASE("R is a probability kernel") {
    auto r = rates4();
    for (int n = 1; n <= 3; ++n) {
        Rates<Rational> rn = r;
        rn.q.resize(static_cast<std::size_t>(n));
        WeylPoint lo(static_cast<std::size_t>(n), 0), hi(static_cast<std::size_t>(n), 2);
        tasep::for_each_weyl_in_box(lo, hi, [&](const WeylPoint& mu) {
            WeylPoint lhi = mu;
            for (auto& v : lhi) v += 3;
            Rational total(0);
            tasep::for_each_weyl_in_box(mu, lhi, [&](const WeylPoint& lam) {
                Rational v = tasep::r_kernel_hat(mu, lam, rn, 1, 4);
                CHECK(v >= 0);
                total += v;
            });
            CHECK(total == 1);
        });
    }
}

TEST_CASE("transition kernel") {
    auto r = oracle::standard_rates();
    CHECK(tasep::transition_kernel<Rational>({3, 1}, {3, 1}, r, 2, 2) == 1);
    CHECK(tasep::transition_kernel<Rational>({3, 1}, {4, 1}, r, 2, 2) == 0);
    Rational pq = r.p[0] * r.q[0];
    CHECK(tasep::transition_kernel<Rational>({0}, {1}, r, 0, 1) == pq / (1 + pq));

    Rates<Rational> r2{{Rational(1, 4), Rational(1, 3)}, {Rational(3, 2), Rational(2)}};
    for (const auto& [cfg, p] : tasep::enumerate_transition<Rational>({1, 0}, r2, 2)) CHECK(tasep::transition_kernel<Rational>({1, 0}, cfg, r2, 0, 2) == p);

    std::mt19937_64 rng(23);
    for (int n = 1; n <= 3; ++n)
        for (int t = 1; t <= 3; ++t) {
            auto rr = oracle::random_regime_rates(rng, n, t);
            Config y;
            for (int k = 1; k <= n; ++k) y.push_back(2 - 2 * k + (k == 2));
            auto table = tasep::enumerate_transition(y, rr, t);
            Rational total(0);
            WeylPoint lo = tasep::to_weak(y), hi = lo;
            for (auto& v : hi) v += t;
            tasep::for_each_weyl_in_box(lo, hi, [&](const WeylPoint& w) {
                Config yp = tasep::to_strict(w);
                Rational v = tasep::transition_kernel(y, yp, rr, 0, t);
                auto it = table.find(yp);
                REQUIRE(v == (it == table.end() ? Rational(0) : it->second));
                total += v;
            });
            CHECK(total == 1);
        }
}

TEST_CASE("determinant equality") {
    Rates<Rational> r = rates4();
    tasep::TriangularArray one;
    one.n = 1;
    one.x = {{2}};
    one.aux_left = {5};
    one.aux_right = {-1};
    auto e1 = tasep::det_equality_check(one, r);
    CHECK(e1.interlacing);
    CHECK(e1.lhs == tasep::ipow(r.q[0], -1) * tasep::ipow(r.q[0], 3));
    CHECK(e1.lhs == e1.rhs);

    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 1 + trial % 4;
        auto a = oracle::random_array(rng, n);
        REQUIRE(a.strictly_interlacing());
        auto e = tasep::det_equality_check(a, r);
        CHECK(e.lhs == e.rhs);
        CHECK(e.lhs != 0);
    }
    tasep::TriangularArray bad = one;
    bad.x = {{7}};
    auto eb = tasep::det_equality_check(bad, r);
    CHECK_FALSE(eb.interlacing);
    CHECK(eb.lhs == 0);
    CHECK(eb.rhs == 0);
}

TEST_CASE("virtual Q entries") {
    Rates<Rational> r{{}, {Rational(2), Rational(3), Rational(5)}};
    CHECK(tasep::virtual_q_entry(1, 2, 0, r) == 2);
    CHECK(tasep::virtual_q_entry(2, 2, 4, r) == 81);
    CHECK(tasep::virtual_q_entry(3, 2, 4, r) == 0);
    CHECK_THROWS_AS(tasep::virtual_q_entry(1, 2, 0, Rates<Rational>{{}, {Rational(3), Rational(2)}}), tasep::RegimeError);
    // q_j^x Q_{[j,k]}(x, y) tends to the virtual entry as x grows.
    Rates<double> rd = r.convert<double>();
    for (int j = 1; j <= 3; ++j)
        for (int k = j; k <= 3; ++k)
            for (long y = -2; y <= 2; ++y) {
                long x = y + 120;
                double lim = std::pow(rd.q_at(j), static_cast<double>(x)) * tasep::entry(Composition::q_chain(j, k), rd, x, y);
                double v = tasep::virtual_q_entry(j, k, y, rd);
                CHECK(std::abs(lim - v) <= 1e-9 * std::abs(v));
            }
}
