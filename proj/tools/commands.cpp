#include "cli_common.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace cli {

namespace {

json config_list(const tasep::Config& y) { return json(y); }

std::string config_text(const tasep::Config& y) {
    std::string s;
    for (std::size_t i = 0; i < y.size(); ++i) s += (i ? " " : "") + std::to_string(y[i]);
    return s;
}

template <class S>
std::string scalar_text(const S& v) {
    if constexpr (tasep::ScalarTraits<S>::exact) return tasep::rational_to_string(v);
    else {
        std::ostringstream s;
        s.precision(17);
        s << v;
        return s.str();
    }
}

template <class S>
tasep::Rates<S> backend_rates(const ExperimentConfig& cfg) {
    if constexpr (tasep::ScalarTraits<S>::exact) return cfg.rates();
    else return cfg.rates().template convert<double>();
}

tasep::RegimePolicy policy(const ExperimentConfig& cfg) {
    return cfg.continuation ? tasep::RegimePolicy::continuation : tasep::RegimePolicy::enforce;
}

tasep::KernelRoute route(const ExperimentConfig& cfg) {
    return cfg.route == "hitting" ? tasep::KernelRoute::hitting : tasep::KernelRoute::biorthogonal;
}

// Header shared by all parameter-driven subcommands; the regime report comes first.
json report_head(const ExperimentConfig& cfg, const std::string& command) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["regime"] = regime_json(tasep::evaluate_regime(cfg.rates(), cfg.t));
    j["config"] = config_json(cfg);
    return j;
}

template <class S>
Report enumerate_impl(const ExperimentConfig& cfg) {
    Report rep;
    rep.body = report_head(cfg, "enumerate");
    auto table = tasep::enumerate_transition(cfg.y, backend_rates<S>(cfg), cfg.t);
    json rows = json::array();
    rep.csv.push_back({"configuration", "probability"});
    S total(0), query_mass(0);
    for (const auto& [y, prob] : table) {
        rows.push_back({{"y", config_list(y)}, {"probability", scalar_json(prob)}});
        rep.csv.push_back({config_text(y), scalar_text(prob)});
        total += prob;
        if (!cfg.query.empty() && tasep::satisfies(y, cfg.query)) query_mass += prob;
    }
    rep.body["outcomes"] = rows;
    auto c = compare<S>("total_mass", total, S(1), 1e-12);
    rep.body["checks"] = json::array({check_json(c)});
    rep.pass = c.pass;
    if (!cfg.query.empty()) rep.body["query_probability"] = scalar_json(query_mass);
    return rep;
}

template <class S>
Report kernel_impl(const ExperimentConfig& cfg) {
    Report rep;
    rep.body = report_head(cfg, "kernel");
    auto rates = backend_rates<S>(cfg);
    auto k = tasep::make_kernel(cfg.y, rates, cfg.t, route(cfg), policy(cfg));
    long lo = tasep::initial_lower_edge(cfg.y, cfg.t), hi = cfg.y.front() + cfg.t + 2;
    if (cfg.window) std::tie(lo, hi) = *cfg.window;
    if (lo > hi) throw ConfigError("window: lo must not exceed hi");
    std::vector<int> levels;
    for (const auto& q : cfg.query) levels.push_back(q.k);
    if (levels.empty())
        for (int m = 1; m <= cfg.particles(); ++m) levels.push_back(m);
    tasep::CorrelationKernelTable<S> table(k, levels, lo, hi);
    json entries = json::array();
    rep.csv.push_back({"m", "x", "n", "x_prime", "value"});
    for (int m : levels)
        for (long x = lo; x <= hi; ++x)
            for (int n : levels)
                for (long xp = lo; xp <= hi; ++xp) {
                    const S& v = table.at(m, x, n, xp);
                    entries.push_back({{"m", m}, {"x", x}, {"n", n}, {"x_prime", xp}, {"value", scalar_json(v)}});
                    rep.csv.push_back({std::to_string(m), std::to_string(x), std::to_string(n), std::to_string(xp), scalar_text(v)});
                }
    rep.body["window"] = {lo, hi};
    rep.body["levels"] = levels;
    rep.body["entries"] = entries;
    return rep;
}

template <class S>
Report fredholm_impl(const ExperimentConfig& cfg) {
    Report rep;
    rep.body = report_head(cfg, "fredholm");
    auto rates = backend_rates<S>(cfg);
    std::optional<long> lower;
    if (cfg.window) lower = cfg.window->first;
    auto res = tasep::multipoint_prob_kernel(cfg.y, rates, cfg.t, cfg.query, route(cfg), policy(cfg), lower);
    json r;
    r["value"] = scalar_json(res.value);
    r["value_float"] = tasep::to_double(res.value);
    r["previous"] = scalar_json(res.previous);
    r["lower_edge"] = res.lower;
    r["growth_steps"] = res.growth_steps;
    r["stabilized"] = res.stabilized;
    rep.body["result"] = r;
    json checks = json::array();
    rep.pass = res.stabilized;
    if (cfg.t * cfg.particles() <= tasep::kEnumerationBudget) {
        tasep::Rational exact = tasep::multipoint_prob_oracle(cfg.y, cfg.rates(), cfg.t, cfg.query);
        auto c = compare<S>("enumeration_oracle", res.value, tasep::scalar_from<S>(exact), 1e-10);
        checks.push_back(check_json(c));
        rep.pass = rep.pass && c.pass;
    }
    rep.body["checks"] = checks;
    rep.csv = {{"query", "value"}, {[&] {
                   std::string s;
                   for (const auto& q : cfg.query) s += (s.empty() ? "" : " ") + std::to_string(q.k) + ":" + std::to_string(q.s);
                   return s;
               }(),
               scalar_text(res.value)}};
    return rep;
}

tasep::BitMatrix read_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open matrix file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    std::vector<std::vector<int>> rows;
    json j = json::parse(text, nullptr, false);
    if (!j.is_discarded()) {
        if (j.is_object() && j.contains("matrix")) j = j["matrix"];
        if (!j.is_array()) throw ConfigError("matrix file: expected an array of rows");
        try {
            rows = j.get<std::vector<std::vector<int>>>();
        } catch (const json::exception&) {
            throw ConfigError("matrix file: rows must be arrays of integers");
        }
    } else {
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            std::istringstream ls(line);
            std::vector<int> row;
            std::string tok;
            while (ls >> tok) {
                if (tok != "0" && tok != "1") throw ConfigError("matrix file: entries must be 0 or 1, got '" + tok + "'");
                row.push_back(tok == "1");
            }
            if (!row.empty()) rows.push_back(row);
        }
    }
    if (rows.empty() || rows.front().empty()) throw ConfigError("matrix file: empty matrix");
    for (const auto& row : rows) {
        if (row.size() != rows.front().size()) throw ConfigError("matrix file: rows have different lengths");
        for (int v : row)
            if (v != 0 && v != 1) throw ConfigError("matrix file: entries must be 0 or 1");
    }
    return tasep::BitMatrix(rows);
}

}  // namespace

Report run_simulate(const ExperimentConfig& cfg) {
    Report rep;
    rep.body = report_head(cfg, "simulate");
    auto regime = tasep::evaluate_regime(cfg.rates(), cfg.t);
    if (!regime.positive) throw tasep::RegimeError(regime.failures.front());
    auto rates = cfg.rates().convert<double>();
    if (cfg.replicas == 0) throw ConfigError("replicas must be positive");
    if (cfg.replicas == 1) {
        auto traj = tasep::simulate(cfg.y, rates, cfg.t, cfg.seed);
        json steps = json::array();
        rep.csv.push_back({"time", "particle", "position"});
        for (std::size_t s = 0; s < traj.size(); ++s) {
            steps.push_back(config_list(traj[s]));
            for (std::size_t k = 0; k < traj[s].size(); ++k)
                rep.csv.push_back({std::to_string(s), std::to_string(k + 1), std::to_string(traj[s][k])});
        }
        rep.body["trajectory"] = steps;
        if (!cfg.query.empty()) rep.body["query_satisfied"] = tasep::satisfies(traj.back(), cfg.query);
        return rep;
    }
    auto finals = tasep::simulate_replicas(cfg.y, rates, cfg.t, cfg.seed, cfg.replicas);
    std::map<tasep::Config, std::size_t> counts;
    std::size_t hits = 0;
    for (const auto& y : finals) {
        ++counts[y];
        if (!cfg.query.empty() && tasep::satisfies(y, cfg.query)) ++hits;
    }
    json hist = json::array();
    rep.csv.push_back({"configuration", "count"});
    for (const auto& [y, c] : counts) {
        hist.push_back({{"y", config_list(y)}, {"count", c}});
        rep.csv.push_back({config_text(y), std::to_string(c)});
    }
    rep.body["final_histogram"] = hist;
    if (!cfg.query.empty()) {
        const double n = static_cast<double>(cfg.replicas);
        const double f = static_cast<double>(hits) / n;
        rep.body["query_frequency"] = f;
        rep.body["standard_error"] = std::sqrt(f * (1 - f) / n);
    }
    return rep;
}

Report run_enumerate(const ExperimentConfig& cfg) {
    return cfg.backend == "float" ? enumerate_impl<double>(cfg) : enumerate_impl<tasep::Rational>(cfg);
}

Report run_kernel(const ExperimentConfig& cfg) {
    return cfg.backend == "float" ? kernel_impl<double>(cfg) : kernel_impl<tasep::Rational>(cfg);
}

Report run_fredholm(const ExperimentConfig& cfg) {
    return cfg.backend == "float" ? fredholm_impl<double>(cfg) : fredholm_impl<tasep::Rational>(cfg);
}

Report run_drsk(const std::string& matrix_file) {
    tasep::BitMatrix w = read_matrix(matrix_file);
    auto res = tasep::drsk_forward(w);
    Report rep;
    rep.body["schema_version"] = kSchemaVersion;
    rep.body["command"] = "drsk";
    json m = json::array();
    for (int i = 1; i <= w.rows(); ++i) m.push_back(w.row(i));
    rep.body["matrix"] = m;
    rep.body["P"] = res.p.rows();
    rep.body["Q"] = res.q.rows();
    rep.body["shape"] = res.p.shape().parts();
    json edges = json::array();
    for (const auto& p : res.p_history) edges.push_back(tasep::left_edge_sequence(p, w.cols()));
    rep.body["left_edge_history"] = edges;
    CheckResult c;
    c.name = "inverse_round_trip";
    c.pass = tasep::drsk_inverse(res.p, res.q, w.rows(), w.cols()) == w;
    c.lhs = c.pass ? "matrix" : "differs";
    c.rhs = "matrix";
    c.abs_diff = c.pass ? 0 : 1;
    rep.body["checks"] = json::array({check_json(c)});
    rep.pass = c.pass;
    rep.csv.push_back({"tableau", "row", "entries"});
    auto add = [&](const char* name, const tasep::Tableau& t) {
        for (std::size_t r = 0; r < t.rows().size(); ++r) {
            std::string s;
            for (int v : t.rows()[r]) s += (s.empty() ? "" : " ") + std::to_string(v);
            rep.csv.push_back({name, std::to_string(r + 1), s});
        }
    };
    add("P", res.p);
    add("Q", res.q);
    return rep;
}

void write_csv(const std::vector<std::vector<std::string>>& rows, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write CSV file '" + path + "'");
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
        f << "\n";
    }
}

}  // namespace cli
