#include "tasep/drsk.hpp"

#include <cassert>
#include <stdexcept>

namespace tasep {

BitMatrix::BitMatrix(const std::vector<std::vector<int>>& entries) {
    rows_ = static_cast<int>(entries.size());
    cols_ = rows_ ? static_cast<int>(entries[0].size()) : 0;
    bits_.assign(static_cast<std::size_t>(rows_ * cols_), 0);
    for (int i = 0; i < rows_; ++i) {
        if (static_cast<int>(entries[i].size()) != cols_) throw std::invalid_argument("bit matrix: ragged rows");
        for (int j = 0; j < cols_; ++j) {
            int v = entries[i][j];
            if (v != 0 && v != 1) throw std::invalid_argument("bit matrix: entries must be 0 or 1");
            set(i + 1, j + 1, v);
        }
    }
}

BitMatrix BitMatrix::from_code(int rows, int cols, std::uint64_t code) {
    BitMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.set(i + 1, j + 1, static_cast<int>((code >> (i * cols + j)) & 1u));
    return m;
}

std::vector<int> BitMatrix::row(int i) const {
    std::vector<int> out;
    for (int j = 1; j <= cols_; ++j) out.push_back(at(i, j));
    return out;
}

InsertionOutcome insert_into_column(const Tableau& t, int j, int x) {
    const Partition shape = t.shape();
    const int width = shape.empty() ? 0 : shape[1];
    if (j < 1 || width < j - 1) throw std::invalid_argument("insert_into_column: column out of range");
    auto rows = t.rows();
    const std::size_t col = static_cast<std::size_t>(j - 1);
    const std::size_t height = t.column_height(col);
    if (j > 1) {
        const std::size_t left = t.column_height(col - 1);
        if (left == height) {
            if (height == 0 || x > rows[height - 1][col]) throw std::invalid_argument("insert_into_column: hypothesis on column length violated");
        }
    }
    for (std::size_t i = 0; i < height; ++i) {
        if (rows[i][col] >= x) {
            int y = rows[i][col];
            rows[i][col] = x;
            return {Tableau(rows), y, static_cast<int>(i) + 1, j};
        }
    }
    if (height == rows.size()) rows.emplace_back();
    rows[height].push_back(x);
    return {Tableau(rows), std::nullopt, static_cast<int>(height) + 1, j};
}

ColumnInsertResult column_insert(const Tableau& t, int x) {
    if (!t.column_strict()) throw std::invalid_argument("column_insert: tableau is not column-strict");
    Tableau cur = t;
    int value = x;
    for (int j = 1;; ++j) {
        InsertionOutcome out = insert_into_column(cur, j, value);
        cur = std::move(out.tableau);
        if (!out.bumped) return {cur, out.row, out.col};
        value = *out.bumped;
    }
}

DrskResult drsk_forward(const BitMatrix& w) {
    DrskResult res;
    std::vector<std::vector<int>> qrows;
    res.p_history.push_back(res.p);
    for (int i = 1; i <= w.rows(); ++i) {
        for (int j = 1; j <= w.cols(); ++j) {
            if (!w.at(i, j)) continue;
            ColumnInsertResult ins = column_insert(res.p, j);
            res.p = std::move(ins.tableau);
            if (static_cast<int>(qrows.size()) < ins.row) qrows.resize(static_cast<std::size_t>(ins.row));
            auto& qr = qrows[static_cast<std::size_t>(ins.row - 1)];
            assert(static_cast<int>(qr.size()) == ins.col - 1);
            qr.push_back(i);
            assert(Tableau(qrows).row_strict());
        }
        res.p_history.push_back(res.p);
    }
    res.q = Tableau(qrows);
    return res;
}

namespace {

// Removes the corner cell (row, col) and reverse-bumps back to column 1.
int uninsert(std::vector<std::vector<int>>& rows, int row, int col) {
    auto& r = rows[static_cast<std::size_t>(row - 1)];
    int y = r.back();
    r.pop_back();
    if (r.empty()) rows.erase(rows.begin() + (row - 1));
    for (int j = col - 1; j >= 1; --j) {
        const std::size_t c = static_cast<std::size_t>(j - 1);
        std::size_t pick = rows.size();
        for (std::size_t i = 0; i < rows.size() && rows[i].size() > c; ++i)
            if (rows[i][c] <= y) pick = i;
        if (pick == rows.size()) throw std::invalid_argument("drsk_inverse: P is not reachable by column insertion");
        std::swap(rows[pick][c], y);
    }
    return y;
}

}  // namespace

BitMatrix drsk_inverse(const Tableau& p, const Tableau& q, int n_rows, int n_cols) {
    if (!(p.shape() == q.shape())) throw std::invalid_argument("drsk_inverse: P and Q have different shapes");
    if (!p.column_strict()) throw std::invalid_argument("drsk_inverse: P is not column-strict");
    if (!q.row_strict()) throw std::invalid_argument("drsk_inverse: Q is not row-strict");
    if (p.max_entry() > n_cols || q.max_entry() > n_rows) throw std::invalid_argument("drsk_inverse: entries exceed matrix dimensions");
    BitMatrix w(n_rows, n_cols);
    auto prow = p.rows();
    auto qrow = q.rows();
    for (int i = n_rows; i >= 1; --i) {
        // Cells labelled i form a vertical strip; the last one inserted is the lowest.
        for (;;) {
            int best = -1;
            for (std::size_t r = 0; r < qrow.size(); ++r)
                if (!qrow[r].empty() && qrow[r].back() == i) best = static_cast<int>(r);
            if (best < 0) break;
            const int col = static_cast<int>(qrow[static_cast<std::size_t>(best)].size());
            if (best + 1 < static_cast<int>(qrow.size()) && qrow[static_cast<std::size_t>(best) + 1].size() >= static_cast<std::size_t>(col))
                throw std::invalid_argument("drsk_inverse: Q cell is not a corner");
            qrow[static_cast<std::size_t>(best)].pop_back();
            if (qrow[static_cast<std::size_t>(best)].empty()) qrow.erase(qrow.begin() + best);
            int x = uninsert(prow, best + 1, col);
            if (w.at(i, x)) throw std::invalid_argument("drsk_inverse: repeated letter in one row");
            w.set(i, x, 1);
        }
    }
    return w;
}

}  // namespace tasep
