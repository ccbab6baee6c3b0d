#pragma once

#include "tasep/scalar.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tasep {

template <class S>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const S& fill = S(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    Matrix operator*(const Matrix& other) const {
        if (cols_ != other.rows_) throw std::invalid_argument("matrix product: shape mismatch");
        Matrix out(rows_, other.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const S& a = (*this)(i, k);
                if (a == S(0)) continue;
                for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
            }
        return out;
    }

    bool operator==(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<S> data_;
};

// Fraction-free Bareiss elimination; exact for rationals.
template <class S>
S bareiss_determinant(Matrix<S> a) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("determinant: matrix not square");
    if (n == 0) return S(1);
    S sign(1);
    S prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == S(0)) {
            std::size_t swap = k + 1;
            while (swap < n && a(swap, k) == S(0)) ++swap;
            if (swap == n) return S(0);
            a.swap_rows(k, swap);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
            }
        }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

// LU with partial pivoting (Eigen).
double lu_determinant(const Matrix<double>& a);

inline Rational determinant(const Matrix<Rational>& a) { return bareiss_determinant(a); }
inline double determinant(const Matrix<double>& a) { return lu_determinant(a); }

// Inverse of an upper-triangular matrix by back substitution.
template <class S>
Matrix<S> upper_triangular_inverse(const Matrix<S>& u) {
    const std::size_t n = u.rows();
    Matrix<S> inv(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (u(i, i) == S(0)) throw std::domain_error("upper_triangular_inverse: singular");
    }
    for (std::size_t j = 0; j < n; ++j) {
        inv(j, j) = S(1) / u(j, j);
        for (std::size_t ii = j; ii-- > 0;) {
            S acc(0);
            for (std::size_t k = ii + 1; k <= j; ++k) acc += u(ii, k) * inv(k, j);
            inv(ii, j) = -acc / u(ii, ii);
        }
    }
    return inv;
}

}  // namespace tasep
