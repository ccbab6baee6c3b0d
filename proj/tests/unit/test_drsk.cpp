#include "doctest.h"

#include "tasep/drsk.hpp"
#include "tasep/dynamics.hpp"

#include <algorithm>
#include <random>

using tasep::BitMatrix;
using tasep::Tableau;

TEST_CASE("insertion into one column") {
    Tableau t({{1, 1, 2}, {2, 5}, {3}});
    auto out = tasep::insert_into_column(t, 1, 3);
    REQUIRE(out.bumped.has_value());
    CHECK(*out.bumped == 3);
    CHECK(out.row == 3);
    CHECK(out.col == 1);

    auto stop = tasep::insert_into_column(Tableau({{1, 2}, {2}}), 2, 3);
    CHECK_FALSE(stop.bumped.has_value());
    CHECK(stop.tableau == Tableau({{1, 2}, {2, 3}}));
}

TEST_CASE("column insertion") {
    Tableau t({{1, 1, 2}, {2, 5}, {3}});
    auto res = tasep::column_insert(t, 3);
    CHECK(res.tableau == Tableau({{1, 1, 2}, {2, 3, 5}, {3}}));
    CHECK(res.row == 2);
    CHECK(res.col == 3);
    CHECK(tasep::column_insert(Tableau(), 4).tableau == Tableau(std::vector<std::vector<int>>{{4}}));
}

TEST_CASE("dRSK on a 3x4 example") {
    BitMatrix w({{1, 0, 1, 1}, {0, 1, 1, 0}, {1, 1, 0, 1}});
    auto res = tasep::drsk_forward(w);
    CHECK(res.p == Tableau({{1, 1, 3}, {2, 2, 4}, {3}, {4}}));
    CHECK(res.q == Tableau({{1, 2, 3}, {1, 2, 3}, {1}, {3}}));
    CHECK(res.p.column_strict());
    CHECK(res.q.row_strict());
    CHECK(res.p_history.size() == 4);
    CHECK(tasep::drsk_inverse(res.p, res.q, 3, 4) == w);
}

TEST_CASE("dRSK round trip, exhaustive") {
    for (int n = 1; n <= 3; ++n)
        for (int m = 1; m <= 4; ++m)
            for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * m)); ++code) {
                BitMatrix w = BitMatrix::from_code(n, m, code);
                auto res = tasep::drsk_forward(w);
                REQUIRE(res.p.shape() == res.q.shape());
                REQUIRE(res.p.shape().size() == [&] {
                    int s = 0;
                    for (int i = 1; i <= n; ++i)
                        for (int j = 1; j <= m; ++j) s += w.at(i, j);
                    return s;
                }());
                REQUIRE(tasep::drsk_inverse(res.p, res.q, n, m) == w);
            }
}

TEST_CASE("left edge of P follows the particle recursion") {
    for (int n = 1; n <= 3; ++n)
        for (int m = 1; m <= 3; ++m)
            for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * m)); ++code) {
                BitMatrix w = BitMatrix::from_code(n, m, code);
                auto res = tasep::drsk_forward(w);
                tasep::Config y(static_cast<std::size_t>(m));
                for (int k = 1; k <= m; ++k) y[static_cast<std::size_t>(k - 1)] = -k;
                for (int s = 1; s <= n; ++s) {
                    y = tasep::step(y, w.row(s));
                    auto edge = tasep::left_edge_sequence(res.p_history[static_cast<std::size_t>(s)], m);
                    for (int k = 1; k <= m; ++k) REQUIRE(edge[static_cast<std::size_t>(k - 1)] - k == y[static_cast<std::size_t>(k - 1)]);
                }
            }
}

TEST_CASE("small insertion examples") {
    auto e = tasep::insert_into_column(Tableau(), 1, 5);
    CHECK_FALSE(e.bumped.has_value());
    CHECK(e.tableau == Tableau(std::vector<std::vector<int>>{{5}}));
    auto c = tasep::insert_into_column(Tableau({{1}, {3}}), 1, 2);
    REQUIRE(c.bumped.has_value());
    CHECK(*c.bumped == 3);
    CHECK(c.tableau == Tableau({{1}, {2}}));
    CHECK(tasep::column_insert(Tableau(), 1).tableau == Tableau(std::vector<std::vector<int>>{{1}}));
    // Column 1 bumps its 4, which lands below the 3.
    CHECK(tasep::column_insert(Tableau({{1, 3}, {4}}), 4).tableau == Tableau({{1, 3}, {4, 4}}));
}

TEST_CASE("degenerate matrices") {
    auto zero = tasep::drsk_forward(BitMatrix(2, 2));
    CHECK(zero.p == Tableau());
    CHECK(zero.q == Tableau());
    CHECK(tasep::drsk_inverse(Tableau(), Tableau(), 2, 2) == BitMatrix(2, 2));
    auto ones = tasep::drsk_forward(BitMatrix({{1, 1}, {1, 1}}));
    CHECK(ones.p == Tableau({{1, 1}, {2, 2}}));
    CHECK(ones.p.shape() == tasep::Partition({2, 2}));
}

TEST_CASE("type identities and random round trips") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 5, m = 4;
        BitMatrix w = BitMatrix::from_code(n, m, rng() & ((std::uint64_t{1} << (n * m)) - 1));
        auto res = tasep::drsk_forward(w);
        REQUIRE(tasep::drsk_inverse(res.p, res.q, n, m) == w);
        std::vector<int> pc(static_cast<std::size_t>(m) + 1, 0), qc(static_cast<std::size_t>(n) + 1, 0);
        for (const auto& row : res.p.rows())
            for (int v : row) ++pc[static_cast<std::size_t>(v)];
        for (const auto& row : res.q.rows())
            for (int v : row) ++qc[static_cast<std::size_t>(v)];
        for (int j = 1; j <= m; ++j) {
            int col = 0;
            for (int i = 1; i <= n; ++i) col += w.at(i, j);
            REQUIRE(pc[static_cast<std::size_t>(j)] == col);
        }
        for (int i = 1; i <= n; ++i) {
            int row = 0;
            for (int j = 1; j <= m; ++j) row += w.at(i, j);
            REQUIRE(qc[static_cast<std::size_t>(i)] == row);
            std::vector<int> sub;
            for (const auto& qrow : res.q.rows()) {
                int c = static_cast<int>(std::count_if(qrow.begin(), qrow.end(), [i](int v) { return v <= i; }));
                if (c > 0) sub.push_back(c);
            }
            REQUIRE(res.p_history[static_cast<std::size_t>(i)].shape() == tasep::Partition(sub));
        }
    }
}
