#include "tasep/dynamics.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>
#include <thread>

namespace tasep {

void validate_config(const Config& y) {
    for (std::size_t i = 0; i + 1 < y.size(); ++i)
        if (y[i] <= y[i + 1]) throw std::invalid_argument("particle positions must be strictly decreasing");
}

Config step(const Config& y, const std::vector<int>& w_row) {
    if (w_row.size() != y.size()) throw std::invalid_argument("step: driving row has wrong length");
    Config out(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        long pos = y[k] + (w_row[k] ? 1 : 0);
        if (k > 0) pos = std::min(pos, out[k - 1] - 1);
        out[k] = pos;
    }
    return out;
}

std::vector<std::vector<double>> jump_probabilities(const Rates<double>& rates, int t) {
    std::vector<std::vector<double>> prob(static_cast<std::size_t>(t));
    for (int s = 1; s <= t; ++s)
        for (int k = 1; k <= rates.n_particles(); ++k) {
            double a = rates.p_at(s) * rates.q_at(k);
            prob[s - 1].push_back(a / (1.0 + a));
        }
    return prob;
}

namespace {

std::mt19937_64 replica_engine(std::uint64_t seed, std::uint64_t replica) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(replica), static_cast<std::uint32_t>(replica >> 32)};
    return std::mt19937_64(seq);
}

Config run(const Config& y0, const std::vector<std::vector<double>>& prob, std::uint64_t seed, std::uint64_t replica,
           std::vector<Config>* trajectory) {
    auto eng = replica_engine(seed, replica);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Config y = y0;
    std::vector<int> w(y0.size());
    if (trajectory) trajectory->push_back(y);
    for (const auto& row : prob) {
        for (std::size_t k = 0; k < y.size(); ++k) w[k] = unif(eng) < row[k] ? 1 : 0;
        y = step(y, w);
        if (trajectory) trajectory->push_back(y);
    }
    return y;
}

}  // namespace

std::vector<Config> simulate(const Config& y0, const Rates<double>& rates, int t, std::uint64_t seed, std::uint64_t replica) {
    validate_config(y0);
    if (t < 0) throw std::invalid_argument("simulate: negative time");
    std::vector<Config> traj;
    run(y0, jump_probabilities(rates, t), seed, replica, &traj);
    return traj;
}

unsigned default_threads() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TASEP_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
}

std::vector<Config> simulate_replicas(const Config& y0, const Rates<double>& rates, int t, std::uint64_t seed,
                                      std::size_t replicas, unsigned threads) {
    validate_config(y0);
    if (t < 0) throw std::invalid_argument("simulate: negative time");
    const auto prob = jump_probabilities(rates, t);
    if (threads == 0) threads = default_threads();
    threads = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, replicas)));
    std::vector<Config> out(replicas);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) out[r] = run(y0, prob, seed, r, nullptr);
    };
    if (threads == 1) {
        work(0, replicas);
        return out;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (replicas + threads - 1) / threads;
    for (unsigned i = 0; i < threads; ++i) {
        std::size_t b = i * chunk, e = std::min(replicas, b + chunk);
        if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
    return out;
}

bool satisfies(const Config& y, const std::vector<Query>& query) {
    for (const Query& q : query)
        if (y[static_cast<std::size_t>(q.k - 1)] < q.s) return false;
    return true;
}

void validate_query(const std::vector<Query>& query, int n) {
    for (std::size_t i = 0; i < query.size(); ++i) {
        if (query[i].k < 1 || query[i].k > n) throw std::invalid_argument("query: particle index out of range");
        if (i > 0 && query[i].k <= query[i - 1].k) throw std::invalid_argument("query: particle indices must increase");
    }
}

}  // namespace tasep
