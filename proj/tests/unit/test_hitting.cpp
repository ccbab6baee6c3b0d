#include "doctest.h"
#include "oracles.hpp"

#include "tasep/hitting.hpp"

#include <cmath>
#include <map>
#include <random>

using tasep::Config;
using tasep::GMode;
using tasep::Composition;
using tasep::Query;
using tasep::Rates;
using tasep::Rational;
using tasep::RegimePolicy;

namespace {

Rates<Rational> ordered() {
    return {{Rational(1, 4), Rational(1, 5), Rational(1, 6)}, {Rational(3, 2), Rational(2), Rational(3), Rational(7, 2)}};
}

// Walk law by forward propagation with a deep floor (float).
std::map<std::pair<int, long>, double> walk_law(long z1, const Config& y, int n, const Rates<double>& r, int start, double& tail) {
    std::map<std::pair<int, long>, double> hits;
    auto curve = [&](int i) { return i > static_cast<int>(y.size()) ? -1000000L : y[static_cast<std::size_t>(i - 1)]; };
    std::map<long, double> alive{{z1, 1.0}};
    tail = 0;
    for (int m = start;; ++m) {
        std::map<long, double> still;
        for (auto [x, w] : alive) {
            if (x > curve(m + 1)) hits[{m, x}] += w;
            else still[x] += w;
        }
        if (m + 1 >= n) {
            for (auto [x, w] : still) tail += w;
            break;
        }
        const double q = r.q_at(m + 1);
        alive.clear();
        for (auto [x, w] : still)
            for (long z = -80; z < x; ++z) alive[z] += w * (q - 1) * std::pow(q, static_cast<double>(z - x));
    }
    return hits;
}

}  // namespace

TEST_CASE("S kernel") {
    auto r = ordered();
    CHECK(tasep::s_kernel(1, 1, 0, 1, 4, 4, r) == r.p[0] * r.q[0] - 1);
    CHECK(tasep::s_kernel(1, 2, 0, 1, 0, 10, r) == 0);
    CHECK(tasep::s_kernel(1, 2, 0, 1, 10, 0, r) == 0);
    for (int j = 1; j <= 3; ++j)
        for (int k = j; k <= 4; ++k)
            for (int t = 0; t <= 3; ++t) {
                auto op = Composition::qinv_chain(j, k).then(Composition::rstar_chain(0, t));
                for (long x = -4; x <= 4; ++x)
                    for (long y = -4; y <= 4; ++y) CHECK(tasep::s_kernel(j, k, 0, t, x, y, r) == oracle::direct_entry(op.factors(), r, x, y));
            }
}

TEST_CASE("Sbar kernel") {
    auto r = ordered();
    for (int k = 1; k <= 4; ++k)
        for (long x = -3; x <= 3; ++x)
            for (long y = -3; y <= 3; ++y) {
                CHECK(tasep::sbar_kernel(k, k, 1, 1, x, y, r) == (r.q_at(k) - 1) * tasep::ipow(r.q_at(k), y - x));
                CHECK(tasep::entry(Composition::qbar(k, k), r, x, y) == tasep::ipow(r.q_at(k), y - x));
            }
    auto rd = r.convert<double>();
    for (int j = 1; j <= 3; ++j)
        for (int k = j; k <= 4; ++k)
            for (int t = 0; t <= 3; ++t)
                for (long x = -3; x <= 3; ++x)
                    for (long y = -3; y <= 3; ++y) {
                        double a = tasep::sbar_kernel(j, k, 0, t, x, y, rd);
                        double b = tasep::sbar_series(j, k, 0, t, x, y, rd, 400);
                        CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(a)));
                    }

    Rates<double> rep{{0.2, 0.25}, {1.5, 2.0, 2.0}};
    CHECK_THROWS_AS(tasep::sbar_kernel(1, 3, 0, 2, 0, 1, rep), tasep::RepeatedParameter);
    Rates<double> boundary{{0.5}, {2.0, 3.0}};
    CHECK_THROWS_AS(tasep::sbar_kernel(1, 2, 0, 1, 0, 1, boundary), tasep::RegimeError);

    // Perturbation with a Richardson check against the series, which allows repeats.
    const double eps = 0x1p-20;
    for (long x = -2; x <= 2; ++x) {
        double f1 = tasep::sbar_kernel(1, 3, 0, 2, x, 1, tasep::perturb_repeated_q(rep, eps));
        double f2 = tasep::sbar_kernel(1, 3, 0, 2, x, 1, tasep::perturb_repeated_q(rep, 2 * eps));
        double limit = tasep::sbar_series(1, 3, 0, 2, x, 1, rep, 400);
        CHECK(std::abs(2 * f1 - f2 - limit) < 1e-6 * std::max(1.0, std::abs(limit)));
    }
    auto p = tasep::perturb_repeated_q(rep);
    CHECK(p.q[1] != p.q[2]);
    CHECK(p.q[0] == 1.5);
}

TEST_CASE("hitting law") {
    auto r = ordered();
    Config y{3, 1, 0, -2};
    auto hit = tasep::hitting_law(5, y, 3, r);
    CHECK(hit.at(0, 5) == 1);
    CHECK(hit.tail == 0);

    Config step{-1, -2, -3, -4};
    for (long z = -6; z <= -1; ++z) {
        auto law = tasep::hitting_law(z, step, 4, r);
        CHECK(law.total_before_horizon() == 0);
        CHECK(law.tail == 1);
    }

    auto rd = r.convert<double>();
    for (int n = 1; n <= 4; ++n)
        for (int start = 0; start < n; ++start)
            for (long z1 = -3; z1 <= 4; ++z1) {
                auto law = tasep::hitting_law(z1, y, n, r, start);
                CHECK(law.total_before_horizon() + law.tail == 1);
                double tail = 0;
                auto ref = walk_law(z1, y, n, rd, start, tail);
                CHECK(std::abs(tasep::to_double(law.tail) - tail) < 1e-9);
                for (auto [key, w] : ref) CHECK(std::abs(tasep::to_double(law.at(key.first, key.second)) - w) < 1e-9);
                for (const auto& [key, w] : law.hits) CHECK(ref.count(key) == 1);
            }
}

TEST_CASE("epigraph kernel with step data") {
    auto r = ordered();
    Config step{-1, -2, -3};
    for (int n = 1; n <= 3; ++n)
        for (long x = -5; x <= 3; ++x)
            for (long xp = -4; xp <= 4; ++xp) {
                Rational v = tasep::sbar_epi(n, 0, 2, x, xp, step, r);
                Rational den(1);
                for (int l = 1; l <= n; ++l) den *= r.q_at(l) - 1;
                Rational expect = x > -1 ? Rational(tasep::sbar_kernel(1, n, 0, 2, x, xp, r) / den) : Rational(0);
                CHECK(v == expect);
            }
}

TEST_CASE("boundary value problem") {
    auto r = ordered();
    Config y{3, 1, 0, -2};
    for (int n = 1; n <= 4; ++n)
        for (int k = 0; k < n; ++k) {
            auto tb = tasep::bvp_solve(n, k, r, y, -8, 8);
            for (long x = -8; x <= 8; ++x) CHECK(tb.value(k, x) == tasep::ipow(r.q_at(n - k), x - y[static_cast<std::size_t>(n - k - 1)]));
            for (int l = 0; l < k; ++l) {
                CHECK(tb.value(l, y[static_cast<std::size_t>(n - l - 1)]) == 0);
                const Rational& q = r.q_at(n - l);
                for (long x = -7; x <= 8; ++x) CHECK(tb.value(l + 1, x) == -tb.value(l, x) + q * tb.value(l, x - 1));
            }
            for (int l = 0; l <= k; ++l)
                for (long x = -8; x <= y[static_cast<std::size_t>(n - l - 1)]; ++x) CHECK(tasep::bvp_hitting_rep(n, k, l, x, r, y) == tb.value(l, x));
        }
    CHECK_THROWS(tasep::bvp_hitting_rep(2, 1, 0, 2, r, y));

    Rates<Rational> r3{r.p, {r.q[0], r.q[1], r.q[2]}};
    tasep::BiorthSystem<Rational> sys(Config{3, 1, 0}, r3, 0, 3);
    for (int n = 1; n <= 3; ++n)
        for (int k = 0; k < n; ++k) {
            auto tb = tasep::bvp_solve(n, k, r3, Config{3, 1, 0}, -6, 8);
            for (int l = 0; l <= k; ++l)
                for (long x = -3; x <= 6; ++x) CHECK(tasep::bvp_closed_form(n, k, l, x, sys, 0, 3) == tb.value(l, x));
        }
}

TEST_CASE("polynomiality for homogeneous q") {
    Rates<Rational> r{{}, std::vector<Rational>(4, Rational(5, 2))};
    Config y{4, 1, 0, -3};
    for (int n = 1; n <= 4; ++n)
        for (int k = 0; k < n; ++k) {
            auto tb = tasep::bvp_solve(n, k, r, y, -10, 10);
            for (int l = 0; l <= k; ++l) {
                std::vector<Rational> f;
                for (long x = -10; x <= 10; ++x) f.push_back(tb.value(l, x) * tasep::ipow(r.q[0], -x));
                for (int order = 0; order < k - l + 1; ++order)
                    for (std::size_t i = 0; i + 1 < f.size(); ++i) f[i] = f[i + 1] - f[i];
                for (std::size_t i = 0; i + static_cast<std::size_t>(k - l + 1) < 21; ++i) CHECK(f[i] == 0);
            }
        }
}

TEST_CASE("G function") {
    auto r = ordered();
    Config y{3, 1, 0};
    tasep::GFunction<Rational> g(3, y, r, -14, 14);
    for (int k = 0; k < 3; ++k) {
        int j = 3 - k - 1;
        for (long z1 = -4; z1 <= 6; ++z1)
            for (long z2 = -4; z2 <= 6; ++z2) {
                Rational base = z1 > y[static_cast<std::size_t>(3 - k - 1)] ? Rational(tasep::ipow(r.q_at(3 - k), z2 - z1)) : Rational(0);
                CHECK(g(j, k, z1, z2, GMode::sum) == base);
                CHECK(g(j, k, z1, z2, GMode::hitting) == base);
            }
    }
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3 - k; ++j)
            for (long z1 = -4; z1 <= 6; ++z1)
                for (long z2 = -4; z2 <= 6; ++z2) CHECK(g(j, k, z1, z2, GMode::sum) == g(j, k, z1, z2, GMode::hitting));
    CHECK_THROWS(g(3, 0, 0, 0, GMode::sum));
}

TEST_CASE("hitting kernel") {
    auto r = ordered();
    Config y{3, 1, 0};
    Rates<Rational> r3{r.p, {r.q[0], r.q[1], r.q[2]}};
    tasep::BiorthSystem<Rational> sys(y, r3, 0, 2);
    tasep::HittingKernel<Rational> hk(y, r3, 2);
    for (int m = 1; m <= 3; ++m)
        for (int n = 1; n <= 3; ++n)
            for (long x = -4; x <= 4; x += 2)
                for (long xp = -4; xp <= 4; xp += 3) CHECK(hk(m, x, n, xp) == sys.kernel(m, x, n, xp));

    // No time elapsed: the Fredholm determinant is an indicator.
    for (long s = -2; s <= 3; ++s) {
        std::vector<Query> q{{1, s + 1}, {3, s - 2}};
        auto v = tasep::multipoint_prob_kernel(y, r3, 0, q, tasep::KernelRoute::hitting);
        CHECK(v.value == tasep::multipoint_prob_oracle(y, r3, 0, q));
    }

    // Unordered q through the hitting route only.
    Rates<Rational> u{r.p, {Rational(3), Rational(3, 2), Rational(2)}};
    CHECK_THROWS_AS(tasep::make_kernel(y, u, 2, tasep::KernelRoute::biorthogonal, RegimePolicy::enforce), tasep::RegimeError);
    for (const auto& q : std::vector<std::vector<Query>>{{{1, 4}}, {{2, 2}, {3, 1}}}) {
        auto v = tasep::multipoint_prob_kernel(y, u, 2, q, tasep::KernelRoute::hitting);
        CHECK(v.value == tasep::multipoint_prob_oracle(y, u, 2, q));
    }
    Rates<Rational> dup{r.p, {Rational(3), Rational(2), Rational(2)}};
    CHECK_THROWS_AS(tasep::HittingKernel<Rational>(y, dup, 2), tasep::RegimeError);
}
