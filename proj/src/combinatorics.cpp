#include "tasep/combinatorics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tasep {

Partition::Partition(std::vector<int> parts) {
    while (!parts.empty() && parts.back() == 0) parts.pop_back();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] < 0) throw std::invalid_argument("partition: negative part");
        if (i + 1 < parts.size() && parts[i] < parts[i + 1])
            throw std::invalid_argument("partition: parts not weakly decreasing");
    }
    parts_ = std::move(parts);
}

int Partition::size() const {
    int s = 0;
    for (int v : parts_) s += v;
    return s;
}

std::string Partition::str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
    os << ')';
    return os.str();
}

Partition conjugate(const Partition& lambda) {
    std::vector<int> out;
    int width = lambda.empty() ? 0 : lambda.parts()[0];
    for (int i = 1; i <= width; ++i) {
        int c = 0;
        for (int v : lambda.parts())
            if (v >= i) ++c;
        out.push_back(c);
    }
    return Partition(out);
}

bool interlaces(const Partition& mu, const Partition& lambda) {
    std::size_t len = std::max(mu.length(), lambda.length()) + 1;
    for (std::size_t i = 1; i <= len; ++i) {
        if (!(lambda[i] >= mu[i] && mu[i] >= lambda[i + 1])) return false;
    }
    return true;
}

bool contains(const Partition& lambda, const Partition& mu) {
    for (std::size_t i = 1; i <= mu.length(); ++i)
        if (mu[i] > lambda[i]) return false;
    return true;
}

namespace {

void box_rec(std::vector<int>& cur, int rows, int maxpart, std::vector<Partition>& out) {
    out.emplace_back(cur);
    if (static_cast<int>(cur.size()) == rows) return;
    for (int v = 1; v <= maxpart; ++v) {
        cur.push_back(v);
        box_rec(cur, rows, v, out);
        cur.pop_back();
    }
}

void size_rec(std::vector<int>& cur, int remaining, int maxpart, std::vector<Partition>& out) {
    if (remaining == 0) {
        out.emplace_back(cur);
        return;
    }
    for (int v = std::min(remaining, maxpart); v >= 1; --v) {
        cur.push_back(v);
        size_rec(cur, remaining - v, v, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<Partition> partitions_in_box(int rows, int cols) {
    std::vector<Partition> out;
    std::vector<int> cur;
    box_rec(cur, rows, cols, out);
    return out;
}

std::vector<Partition> partitions_of_size(int n) {
    std::vector<Partition> out;
    std::vector<int> cur;
    size_rec(cur, n, n, out);
    return out;
}

Tableau::Tableau(std::vector<std::vector<int>> rows) {
    while (!rows.empty() && rows.back().empty()) rows.pop_back();
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
        if (rows[i].size() < rows[i + 1].size()) throw std::invalid_argument("tableau: rows do not form a partition shape");
    for (const auto& r : rows)
        for (int v : r)
            if (v <= 0) throw std::invalid_argument("tableau: entries must be positive");
    rows_ = std::move(rows);
}

Partition Tableau::shape() const {
    std::vector<int> parts;
    for (const auto& r : rows_) parts.push_back(static_cast<int>(r.size()));
    return Partition(parts);
}

std::size_t Tableau::column_height(std::size_t col) const {
    std::size_t h = 0;
    while (h < rows_.size() && rows_[h].size() > col) ++h;
    return h;
}

int Tableau::max_entry() const {
    int m = 0;
    for (const auto& r : rows_)
        for (int v : r) m = std::max(m, v);
    return m;
}

bool Tableau::column_strict() const {
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (std::size_t j = 0; j < rows_[i].size(); ++j) {
            if (j + 1 < rows_[i].size() && rows_[i][j] > rows_[i][j + 1]) return false;
            if (i + 1 < rows_.size() && j < rows_[i + 1].size() && rows_[i][j] >= rows_[i + 1][j]) return false;
        }
    return true;
}

bool Tableau::row_strict() const {
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (std::size_t j = 0; j < rows_[i].size(); ++j) {
            if (j + 1 < rows_[i].size() && rows_[i][j] >= rows_[i][j + 1]) return false;
            if (i + 1 < rows_.size() && j < rows_[i + 1].size() && rows_[i][j] > rows_[i + 1][j]) return false;
        }
    return true;
}

std::string Tableau::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (i) os << '/';
        for (int v : rows_[i]) os << v << (rows_[i].size() > 1 && v >= 10 ? "," : "");
    }
    return os.str();
}

std::vector<Partition> tableau_to_chain(const Tableau& t, int n_letters) {
    if (!t.column_strict()) throw std::invalid_argument("tableau_to_chain: tableau is not column-strict");
    if (t.max_entry() > n_letters) throw std::invalid_argument("tableau_to_chain: entry exceeds alphabet");
    std::vector<Partition> chain;
    for (int k = 1; k <= n_letters; ++k) {
        std::vector<int> parts;
        for (const auto& r : t.rows()) {
            int c = 0;
            for (int v : r)
                if (v <= k) ++c;
            parts.push_back(c);
        }
        chain.emplace_back(parts);
    }
    return chain;
}

Tableau chain_to_tableau(const std::vector<Partition>& chain) {
    Partition prev;
    std::vector<std::vector<int>> rows;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const Partition& cur = chain[k];
        if (!interlaces(prev, cur)) throw std::invalid_argument("chain_to_tableau: consecutive shapes do not interlace");
        for (std::size_t i = 1; i <= cur.length(); ++i) {
            if (rows.size() < i) rows.emplace_back();
            for (int j = prev[i]; j < cur[i]; ++j) rows[i - 1].push_back(static_cast<int>(k) + 1);
        }
        prev = cur;
    }
    return Tableau(rows);
}

std::vector<int> left_edge_sequence(const Tableau& t, int n_letters) {
    auto chain = tableau_to_chain(t, n_letters);
    std::vector<int> out;
    for (int k = 1; k <= n_letters; ++k) out.push_back(chain[k - 1][static_cast<std::size_t>(k)]);
    return out;
}

Partition left_edge(const Tableau& t) {
    return Partition(left_edge_sequence(t, t.max_entry()));
}

namespace {

void chain_rec(std::vector<Partition>& chain, int level, const std::function<void(const std::vector<Partition>&)>& visit) {
    // chain[level-1] is fixed; choose chain[level-2] interlacing below it.
    if (level == 1) {
        visit(chain);
        return;
    }
    const Partition& lam = chain[level - 1];
    const int len = level - 1;  // max length of lambda^(level-1)
    if (static_cast<int>(lam.length()) > level) return;
    std::vector<int> mu(static_cast<std::size_t>(len), 0);
    std::function<void(int)> pick = [&](int i) {
        if (i > len) {
            chain[level - 2] = Partition(mu);
            chain_rec(chain, level - 1, visit);
            return;
        }
        for (int v = lam[static_cast<std::size_t>(i) + 1]; v <= lam[static_cast<std::size_t>(i)]; ++v) {
            mu[i - 1] = v;
            pick(i + 1);
        }
    };
    pick(1);
}

}  // namespace

void for_each_chain(const Partition& lambda, int n, const std::function<void(const std::vector<Partition>&)>& visit) {
    if (n <= 0) {
        if (lambda.empty()) visit({});
        return;
    }
    if (static_cast<int>(lambda.length()) > n) return;
    std::vector<Partition> chain(static_cast<std::size_t>(n));
    chain[n - 1] = lambda;
    // Level 1 must be a single row, enforced by len = 0 ... handled below.
    chain_rec(chain, n, [&](const std::vector<Partition>& c) {
        if (c[0].length() <= 1) visit(c);
    });
}

}  // namespace tasep
