#pragma once

#include "tasep/drsk.hpp"
#include "tasep/scalar.hpp"

#include <cstdint>
#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tasep {

// Strictly decreasing particle positions Y_1 > ... > Y_N.
using Config = std::vector<long>;

void validate_config(const Config& y);

template <class S>
struct Rates {
    std::vector<S> p;  // p_1, p_2, ... (time)
    std::vector<S> q;  // q_1, ..., q_N (particle)

    const S& p_at(int t) const { return p.at(static_cast<std::size_t>(t - 1)); }
    const S& q_at(int k) const { return q.at(static_cast<std::size_t>(k - 1)); }
    int n_particles() const { return static_cast<int>(q.size()); }
    int horizon() const { return static_cast<int>(p.size()); }

    // prod_{i=r+1..t} prod_{j<=n} (1 + p_i q_j); n < 0 means all particles.
    S normalization(int r, int t, int n = -1) const {
        if (n < 0) n = n_particles();
        S z(1);
        for (int i = r + 1; i <= t; ++i)
            for (int j = 1; j <= n; ++j) z *= S(1) + p_at(i) * q_at(j);
        return z;
    }

    template <class T>
    Rates<T> convert() const {
        Rates<T> out;
        for (const S& v : p) out.p.push_back(convert_one<T>(v));
        for (const S& v : q) out.q.push_back(convert_one<T>(v));
        return out;
    }

private:
    template <class T>
    static T convert_one(const S& v) {
        if constexpr (std::is_same_v<S, T>) return v;
        else if constexpr (std::is_same_v<T, double>) return to_double(v);
        else static_assert(std::is_same_v<S, T>, "rates can only be converted from exact to float");
    }
};

struct RegimeReport {
    bool positive = true;
    bool q_above_one = true;
    bool pq_below_one = true;
    bool ordered = true;   // q_1 < q_2 < ...
    bool distinct = true;
    std::vector<std::string> failures;

    bool in_regime() const { return positive && q_above_one && pq_below_one; }
};

// Predicates over p_1..p_t and q_1..q_N.
template <class S>
RegimeReport evaluate_regime(const Rates<S>& rates, int t) {
    RegimeReport rep;
    auto fail = [&rep](bool& flag, std::string msg) {
        flag = false;
        rep.failures.push_back(std::move(msg));
    };
    if (t > rates.horizon()) throw std::invalid_argument("rates: fewer time parameters than time steps");
    for (int s = 1; s <= t; ++s)
        if (!(rates.p_at(s) > S(0))) fail(rep.positive, "p_" + std::to_string(s) + " > 0");
    const int n = rates.n_particles();
    for (int k = 1; k <= n; ++k) {
        if (!(rates.q_at(k) > S(0))) fail(rep.positive, "q_" + std::to_string(k) + " > 0");
        if (!(rates.q_at(k) > S(1))) fail(rep.q_above_one, "q_" + std::to_string(k) + " > 1");
        for (int s = 1; s <= t; ++s)
            if (!(rates.q_at(k) * rates.p_at(s) < S(1)))
                fail(rep.pq_below_one, "q_" + std::to_string(k) + " * p_" + std::to_string(s) + " < 1");
        for (int l = k + 1; l <= n; ++l) {
            if (!(rates.q_at(k) < rates.q_at(l))) fail(rep.ordered, "q_" + std::to_string(k) + " < q_" + std::to_string(l));
            if (rates.q_at(k) == rates.q_at(l)) fail(rep.distinct, "q_" + std::to_string(k) + " != q_" + std::to_string(l));
        }
    }
    return rep;
}

class RegimeError : public std::invalid_argument {
public:
    explicit RegimeError(const std::string& predicate)
        : std::invalid_argument("parameter regime violated: " + predicate), predicate_(predicate) {}
    const std::string& predicate() const { return predicate_; }

private:
    std::string predicate_;
};

// One time slice of the sequential update, k = 1..N.
Config step(const Config& y, const std::vector<int>& w_row);

// Jump probabilities p_s q_k / (1 + p_s q_k) as doubles.
std::vector<std::vector<double>> jump_probabilities(const Rates<double>& rates, int t);

std::vector<Config> simulate(const Config& y0, const Rates<double>& rates, int t, std::uint64_t seed, std::uint64_t replica = 0);

// Final configurations of `replicas` independent runs; deterministic for any thread count.
std::vector<Config> simulate_replicas(const Config& y0, const Rates<double>& rates, int t, std::uint64_t seed,
                                      std::size_t replicas, unsigned threads = 0);

// Thread cap from TASEP_THREADS, else hardware concurrency.
unsigned default_threads();

constexpr int kEnumerationBudget = 24;

struct Query {
    int k = 0;
    long s = 0;
};

bool satisfies(const Config& y, const std::vector<Query>& query);
void validate_query(const std::vector<Query>& query, int n);

template <class S>
std::map<Config, S> enumerate_transition(const Config& y0, const Rates<S>& rates, int t) {
    validate_config(y0);
    const int n = static_cast<int>(y0.size());
    if (t < 0) throw std::invalid_argument("enumerate_transition: negative time");
    if (t * n > kEnumerationBudget) throw std::invalid_argument("enumerate_transition: t*N exceeds enumeration budget");
    if (rates.n_particles() < n || rates.horizon() < t) throw std::invalid_argument("enumerate_transition: not enough rate parameters");
    const S z = rates.normalization(0, t, n);
    std::map<Config, S> out;
    // Depth-first over the t*N entries of W. Updating in place works because
    // particle k reads the new position of k-1 and its own old position.
    Config cur = y0;
    std::function<void(int, int, const S&)> rec = [&](int s, int k, const S& weight) {
        if (s > t) {
            out[cur] += weight / z;
            return;
        }
        if (k > n) {
            rec(s + 1, 1, weight);
            return;
        }
        const long old = cur[k - 1];
        for (int bit = 0; bit <= 1; ++bit) {
            long pos = old + bit;
            if (k > 1) pos = std::min(pos, cur[k - 2] - 1);
            cur[k - 1] = pos;
            if (bit) rec(s, k + 1, S(weight * rates.p_at(s) * rates.q_at(k)));
            else rec(s, k + 1, weight);
        }
        cur[k - 1] = old;
    };
    rec(1, 1, S(1));
    return out;
}

template <class S>
S multipoint_prob_oracle(const Config& y0, const Rates<S>& rates, int t, const std::vector<Query>& query) {
    validate_query(query, static_cast<int>(y0.size()));
    S total(0);
    for (const auto& [cfg, prob] : enumerate_transition(y0, rates, t))
        if (satisfies(cfg, query)) total += prob;
    return total;
}

}  // namespace tasep
