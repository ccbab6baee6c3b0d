#pragma once

#include "tasep/scalar.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace tasep {

class Partition {
public:
    Partition() = default;
    // Throws if parts are negative or not weakly decreasing; trailing zeros are dropped.
    explicit Partition(std::vector<int> parts);

    const std::vector<int>& parts() const { return parts_; }
    // 1-based part, zero past the length.
    int operator[](std::size_t i) const { return i >= 1 && i <= parts_.size() ? parts_[i - 1] : 0; }
    std::size_t length() const { return parts_.size(); }
    int size() const;
    bool empty() const { return parts_.empty(); }

    bool operator==(const Partition& o) const { return parts_ == o.parts_; }
    bool operator<(const Partition& o) const { return parts_ < o.parts_; }

    std::string str() const;

private:
    std::vector<int> parts_;
};

Partition conjugate(const Partition& lambda);
// True iff lambda/mu is a horizontal strip.
bool interlaces(const Partition& mu, const Partition& lambda);
bool contains(const Partition& lambda, const Partition& mu);

// All partitions inside the rows x cols box.
std::vector<Partition> partitions_in_box(int rows, int cols);
std::vector<Partition> partitions_of_size(int n);

// Rows of positive integers; row i has length shape[i].
class Tableau {
public:
    Tableau() = default;
    explicit Tableau(std::vector<std::vector<int>> rows);

    const std::vector<std::vector<int>>& rows() const { return rows_; }
    std::vector<std::vector<int>>& mutable_rows() { return rows_; }
    Partition shape() const;
    int at(std::size_t row, std::size_t col) const { return rows_[row][col]; }
    std::size_t column_height(std::size_t col) const;
    int max_entry() const;
    bool column_strict() const;
    bool row_strict() const;

    bool operator==(const Tableau& o) const { return rows_ == o.rows_; }
    std::string str() const;

private:
    std::vector<std::vector<int>> rows_;
};

// (lambda^(1), ..., lambda^(N)); lambda^(k) is the shape of entries <= k.
std::vector<Partition> tableau_to_chain(const Tableau& t, int n_letters);
Tableau chain_to_tableau(const std::vector<Partition>& chain);

// (lambda^(k)_k)_{k=1..N}, untrimmed.
std::vector<int> left_edge_sequence(const Tableau& t, int n_letters);
Partition left_edge(const Tableau& t);

// Calls visit on every interlacing chain (lambda^(1), ..., lambda^(n)) ending in lambda.
void for_each_chain(const Partition& lambda, int n, const std::function<void(const std::vector<Partition>&)>& visit);

template <class S>
S complete_h(int n, const std::vector<S>& vars) {
    if (n < 0) return S(0);
    std::vector<S> h(static_cast<std::size_t>(n) + 1, S(0));
    h[0] = S(1);
    for (const S& x : vars)
        for (int d = 1; d <= n; ++d) h[d] += x * h[d - 1];
    return h[n];
}

template <class S>
S elementary_e(int n, const std::vector<S>& vars) {
    if (n < 0 || n > static_cast<int>(vars.size())) return S(0);
    std::vector<S> e(static_cast<std::size_t>(n) + 1, S(0));
    e[0] = S(1);
    for (const S& x : vars)
        for (int d = n; d >= 1; --d) e[d] += x * e[d - 1];
    return e[n];
}

// Schur polynomial as a sum over interlacing chains.
template <class S>
S schur(const Partition& lambda, const std::vector<S>& vars) {
    const int n = static_cast<int>(vars.size());
    if (static_cast<int>(lambda.length()) > n) return S(0);
    S total(0);
    for_each_chain(lambda, n, [&](const std::vector<Partition>& chain) {
        S term(1);
        int prev = 0;
        for (int k = 0; k < n; ++k) {
            int sz = chain[k].size();
            term *= ipow(vars[k], sz - prev);
            prev = sz;
        }
        total += term;
    });
    return total;
}

// sum_lambda s_{lambda^T}(p) s_lambda(q) - prod (1 + p_i q_j)
template <class S>
S dual_cauchy_residual(const std::vector<S>& p, const std::vector<S>& q) {
    S lhs(0);
    for (const Partition& lam : partitions_in_box(static_cast<int>(q.size()), static_cast<int>(p.size())))
        lhs += schur(conjugate(lam), p) * schur(lam, q);
    S rhs(1);
    for (const S& a : p)
        for (const S& b : q) rhs *= S(1) + a * b;
    return lhs - rhs;
}

}  // namespace tasep
