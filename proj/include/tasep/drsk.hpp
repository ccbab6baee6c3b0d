#pragma once

#include "tasep/combinatorics.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tasep {

class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(int rows, int cols) : rows_(rows), cols_(cols), bits_(static_cast<std::size_t>(rows * cols), 0) {}
    explicit BitMatrix(const std::vector<std::vector<int>>& entries);
    // Row-major bits of `code`, entry (i,j) is bit i*cols+j.
    static BitMatrix from_code(int rows, int cols, std::uint64_t code);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    // 1-based indices.
    int at(int i, int j) const { return bits_[static_cast<std::size_t>((i - 1) * cols_ + (j - 1))]; }
    void set(int i, int j, int v) { bits_[static_cast<std::size_t>((i - 1) * cols_ + (j - 1))] = static_cast<std::uint8_t>(v != 0); }
    std::vector<int> row(int i) const;

    bool operator==(const BitMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && bits_ == o.bits_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::uint8_t> bits_;
};

struct InsertionOutcome {
    Tableau tableau;
    std::optional<int> bumped;  // empty means the insertion stopped
    int row = 0;                // 1-based cell that received x
    int col = 0;
};

// Inserts x into column j (1-based).
InsertionOutcome insert_into_column(const Tableau& t, int j, int x);

struct ColumnInsertResult {
    Tableau tableau;
    int row = 0;  // 1-based coordinates of the new cell
    int col = 0;
};
ColumnInsertResult column_insert(const Tableau& t, int x);

struct DrskResult {
    Tableau p;
    Tableau q;
    std::vector<Tableau> p_history;  // P(0), P(1), ..., P(n)
};

DrskResult drsk_forward(const BitMatrix& w);
// n_rows and n_cols give the matrix dimensions (letters of Q and of P).
BitMatrix drsk_inverse(const Tableau& p, const Tableau& q, int n_rows, int n_cols);

}  // namespace tasep
