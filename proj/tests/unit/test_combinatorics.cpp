#include "doctest.h"
#include "oracles.hpp"

#include "tasep/combinatorics.hpp"

#include <functional>
#include <random>

using tasep::Partition;
using tasep::Rational;
using tasep::Tableau;

namespace {

Tableau sample_tableau() {
    return Tableau({{1, 1, 1, 2, 3, 3}, {2, 2, 4, 5}, {4, 4}});
}

// Every column-strict tableau of the given shape over letters 1..n.
void for_each_tableau(const Partition& shape, int n, const std::function<void(const Tableau&)>& visit) {
    std::vector<std::vector<int>> rows;
    for (int part : shape.parts()) rows.emplace_back(static_cast<std::size_t>(part), 0);
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) cells.emplace_back(i, j);
    std::function<void(std::size_t)> rec = [&](std::size_t c) {
        if (c == cells.size()) {
            visit(Tableau(rows));
            return;
        }
        auto [i, j] = cells[c];
        int lo = 1;
        if (j > 0) lo = std::max(lo, rows[i][j - 1]);
        if (i > 0) lo = std::max(lo, rows[i - 1][j] + 1);
        for (int v = lo; v <= n; ++v) {
            rows[i][j] = v;
            rec(c + 1);
        }
    };
    rec(0);
}

}  // namespace

TEST_CASE("conjugate") {
    CHECK(tasep::conjugate(Partition()) == Partition());
    CHECK(tasep::conjugate(Partition({3})) == Partition({1, 1, 1}));
    CHECK(tasep::conjugate(Partition({6, 4, 2})) == Partition({3, 3, 2, 2, 1, 1}));
    for (int n = 0; n <= 12; ++n)
        for (const Partition& p : tasep::partitions_of_size(n)) CHECK(tasep::conjugate(tasep::conjugate(p)) == p);
}

TEST_CASE("partition validation and enumeration counts") {
    CHECK_THROWS(Partition({1, 2}));
    CHECK_THROWS(Partition({2, -1}));
    CHECK(Partition({3, 1, 0, 0}).length() == 2);
    CHECK(tasep::partitions_of_size(10).size() == 42);
    CHECK(tasep::partitions_in_box(2, 3).size() == 10);
}

TEST_CASE("interlacing") {
    CHECK(tasep::interlaces(Partition({4, 2}), Partition({6, 2})));
    CHECK(tasep::interlaces(Partition(), Partition({3})));
    CHECK_FALSE(tasep::interlaces(Partition({2, 2}), Partition({1})));
    CHECK_FALSE(tasep::interlaces(Partition({1}), Partition({2, 2})));
}

TEST_CASE("tableau to chain") {
    auto chain = tasep::tableau_to_chain(sample_tableau(), 5);
    std::vector<Partition> expected{Partition({3}), Partition({4, 2}), Partition({6, 2}), Partition({6, 3, 2}), Partition({6, 4, 2})};
    CHECK(chain == expected);
    for (std::size_t k = 1; k < chain.size(); ++k) CHECK(tasep::interlaces(chain[k - 1], chain[k]));
    CHECK(tasep::chain_to_tableau(chain) == sample_tableau());

    auto empty = tasep::tableau_to_chain(Tableau(), 3);
    CHECK(empty == std::vector<Partition>(3, Partition()));
    auto single = tasep::tableau_to_chain(Tableau(std::vector<std::vector<int>>{{2}}), 2);
    CHECK(single == std::vector<Partition>{Partition(), Partition({1})});

    CHECK_THROWS(tasep::tableau_to_chain(Tableau({{1, 2}, {1}}), 2));
}

TEST_CASE("left edge") {
    CHECK(tasep::left_edge(sample_tableau()) == Partition({3, 2}));
    CHECK(tasep::left_edge(Tableau()) == Partition());
    Tableau p3({{1, 1, 3}, {2, 2, 4}, {3}, {4}});
    CHECK(tasep::left_edge(p3) == Partition({2, 2, 1, 1}));
}

TEST_CASE("chain round trip, exhaustive") {
    for (int n = 1; n <= 4; ++n)
        for (int size = 0; size <= 8; ++size)
            for (const Partition& shape : tasep::partitions_of_size(size)) {
                if (static_cast<int>(shape.length()) > n) continue;
                for_each_tableau(shape, n, [&](const Tableau& t) {
                    auto chain = tasep::tableau_to_chain(t, n);
                    for (std::size_t k = 1; k < chain.size(); ++k) REQUIRE(tasep::interlaces(chain[k - 1], chain[k]));
                    REQUIRE(tasep::chain_to_tableau(chain) == t);
                    auto edge = tasep::left_edge_sequence(t, n);
                    for (int k = 1; k <= n; ++k) REQUIRE(edge[static_cast<std::size_t>(k - 1)] == chain[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(k)]);
                });
            }
}

TEST_CASE("symmetric functions") {
    std::vector<Rational> x{Rational(2, 3), Rational(5, 7)};
    CHECK(tasep::schur(Partition({1}), x) == x[0] + x[1]);
    CHECK(tasep::schur(Partition({1, 1, 1}), x) == 0);
    CHECK(tasep::schur(Partition({2, 1}), x) == x[0] * x[0] * x[1] + x[0] * x[1] * x[1]);
    CHECK(tasep::complete_h(0, x) == 1);
    CHECK(tasep::elementary_e(0, x) == 1);
    CHECK(tasep::elementary_e(-2, x) == 0);
    CHECK(tasep::complete_h(-1, x) == 0);
    CHECK(tasep::elementary_e(2, x) == x[0] * x[1]);
    CHECK(tasep::complete_h(2, x) == x[0] * x[0] + x[0] * x[1] + x[1] * x[1]);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Rational> v;
        for (int i = 0; i < 4; ++i) v.push_back(oracle::random_rational(rng, -5, 5, 6));
        for (int d = 0; d <= 5; ++d) {
            CHECK(tasep::complete_h(d, v) == oracle::brute_h(d, v));
            CHECK(tasep::elementary_e(d, v) == oracle::brute_e(d, v));
        }
    }
}

TEST_CASE("schur chain sum equals tableau sum") {
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 3; ++n) {
        std::vector<Rational> x;
        for (int i = 0; i < n; ++i) x.push_back(oracle::random_rational(rng, -4, 6, 5));
        for (int size = 0; size <= 6; ++size)
            for (const Partition& lam : tasep::partitions_of_size(size)) CHECK(tasep::schur(lam, x) == oracle::schur_by_tableaux(lam, x));
    }
}

TEST_CASE("dual Cauchy residual") {
    Rational a(3, 5), b(7, 2);
    CHECK(tasep::dual_cauchy_residual(std::vector<Rational>{a}, std::vector<Rational>{b}) == 0);
    CHECK(tasep::dual_cauchy_residual(std::vector<Rational>{a, b}, std::vector<Rational>{Rational(1, 9)}) == 0);
    CHECK(tasep::dual_cauchy_residual(std::vector<Rational>{a, b}, std::vector<Rational>{Rational(-2, 3), Rational(4)}) == 0);
    CHECK(std::abs(tasep::dual_cauchy_residual(std::vector<double>{0.3, 0.7}, std::vector<double>{1.5, 2.5})) < 1e-12);
}
