#include "cli_common.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

long parse_long(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        long v = std::stol(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + ": expected an integer, got '" + s + "'");
    }
}

tasep::Rational parse_scalar(const json& v, const std::string& what) {
    try {
        if (v.is_string()) return tasep::parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return tasep::Rational(v.get<long>());
        if (v.is_number_float()) return tasep::parse_rational(v.dump());
        if (v.is_object() && v.contains("num") && v.contains("den")) {
            auto text = [](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
            return tasep::parse_rational(text(v["num"]) + "/" + text(v["den"]));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(what + ": " + e.what());
    }
    throw ConfigError(what + ": expected a rational as a string, number or {num, den}");
}

std::vector<tasep::Rational> parse_scalar_list(const std::string& s, const std::string& what) {
    std::vector<tasep::Rational> out;
    for (const auto& item : split(s, ',')) out.push_back(parse_scalar(json(item), what));
    return out;
}

std::vector<tasep::Query> parse_query_text(const std::string& s) {
    std::vector<tasep::Query> out;
    for (const auto& item : split(s, ',')) {
        auto parts = split(item, ':');
        if (parts.size() != 2) throw ConfigError("query: expected k:s pairs, got '" + item + "'");
        out.push_back({static_cast<int>(parse_long(parts[0], "query level")), parse_long(parts[1], "query threshold")});
    }
    return out;
}

std::pair<long, long> parse_window_text(const std::string& s) {
    auto parts = split(s, ':');
    if (parts.size() != 2) throw ConfigError("window: expected lo:hi");
    return {parse_long(parts[0], "window"), parse_long(parts[1], "window")};
}

void apply_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    try {
        if (j.contains("N")) cfg.n = j["N"].get<int>();
        if (j.contains("t")) cfg.t = j["t"].get<int>();
        if (j.contains("y")) cfg.y = j["y"].get<std::vector<long>>();
        if (j.contains("p")) {
            cfg.p.clear();
            for (const auto& v : j["p"]) cfg.p.push_back(parse_scalar(v, "p"));
        }
        if (j.contains("q")) {
            cfg.q.clear();
            for (const auto& v : j["q"]) cfg.q.push_back(parse_scalar(v, "q"));
        }
        if (j.contains("query")) {
            cfg.query.clear();
            for (const auto& v : j["query"]) {
                if (v.is_array() && v.size() == 2) cfg.query.push_back({v[0].get<int>(), v[1].get<long>()});
                else if (v.is_object()) cfg.query.push_back({v.at("k").get<int>(), v.at("s").get<long>()});
                else throw ConfigError("query entries must be [k, s] or {k, s}");
            }
        }
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("backend")) cfg.backend = j["backend"].get<std::string>();
        if (j.contains("replicas")) cfg.replicas = j["replicas"].get<std::size_t>();
        if (j.contains("window")) {
            auto w = j["window"].get<std::vector<long>>();
            if (w.size() != 2) throw ConfigError("window must be [lo, hi]");
            cfg.window = std::make_pair(w[0], w[1]);
        }
        if (j.contains("route")) cfg.route = j["route"].get<std::string>();
        if (j.contains("continuation")) cfg.continuation = j["continuation"].get<bool>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config file field has the wrong type: ") + e.what());
    }
}

}  // namespace

ExperimentConfig load_config(const RawFlags& f) {
    ExperimentConfig cfg;
    if (!f.config_file.empty()) apply_file(cfg, f.config_file);
    if (!f.n.empty()) cfg.n = static_cast<int>(parse_long(f.n, "N"));
    if (!f.t.empty()) cfg.t = static_cast<int>(parse_long(f.t, "t"));
    if (!f.y.empty()) {
        cfg.y.clear();
        for (const auto& item : split(f.y, ',')) cfg.y.push_back(parse_long(item, "y"));
    }
    if (!f.p.empty()) cfg.p = parse_scalar_list(f.p, "p");
    if (!f.q.empty()) cfg.q = parse_scalar_list(f.q, "q");
    if (!f.query.empty()) cfg.query = parse_query_text(f.query);
    if (!f.seed.empty()) cfg.seed = static_cast<std::uint64_t>(parse_long(f.seed, "seed"));
    if (!f.backend.empty()) cfg.backend = f.backend;
    if (!f.replicas.empty()) cfg.replicas = static_cast<std::size_t>(parse_long(f.replicas, "replicas"));
    if (!f.window.empty()) cfg.window = parse_window_text(f.window);
    if (!f.route.empty()) cfg.route = f.route;
    if (f.continuation) cfg.continuation = true;
    cfg.timing = f.timing;
    cfg.out = f.out;
    cfg.csv = f.csv;
    if (cfg.backend != "rational" && cfg.backend != "float") throw ConfigError("backend must be 'rational' or 'float'");
    if (cfg.route != "biorthogonal" && cfg.route != "hitting") throw ConfigError("route must be 'biorthogonal' or 'hitting'");
    return cfg;
}

void check_shapes(const ExperimentConfig& cfg) {
    if (cfg.y.empty()) throw ConfigError("initial positions y are required");
    try {
        tasep::validate_config(cfg.y);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    const int n = cfg.particles();
    if (n != static_cast<int>(cfg.y.size())) throw ConfigError("N does not match the number of initial positions");
    if (cfg.t < 0) throw ConfigError("t must be nonnegative");
    if (static_cast<int>(cfg.q.size()) < n) throw ConfigError("need at least N values of q");
    if (static_cast<int>(cfg.p.size()) < cfg.t) throw ConfigError("need at least t values of p");
    for (std::size_t i = 1; i < cfg.query.size(); ++i)
        if (cfg.query[i].k <= cfg.query[i - 1].k) throw ConfigError("query levels k_i must be strictly increasing");
    for (const auto& qr : cfg.query)
        if (qr.k < 1 || qr.k > n) throw ConfigError("query level out of range 1..N");
}

json rational_json(const tasep::Rational& r) {
    tasep::Rational c = r;
    c.canonicalize();
    return json{{"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}};
}

json config_json(const ExperimentConfig& cfg) {
    json j;
    j["N"] = cfg.particles();
    j["t"] = cfg.t;
    j["y"] = cfg.y;
    json p = json::array(), q = json::array();
    for (const auto& v : cfg.p) p.push_back(rational_json(v));
    for (const auto& v : cfg.q) q.push_back(rational_json(v));
    j["p"] = p;
    j["q"] = q;
    json qs = json::array();
    for (const auto& qr : cfg.query) qs.push_back({{"k", qr.k}, {"s", qr.s}});
    j["query"] = qs;
    j["seed"] = cfg.seed;
    j["backend"] = cfg.backend;
    j["replicas"] = cfg.replicas;
    if (cfg.window) j["window"] = {cfg.window->first, cfg.window->second};
    j["route"] = cfg.route;
    j["continuation"] = cfg.continuation;
    return j;
}

json regime_json(const tasep::RegimeReport& rep) {
    return json{{"positive", rep.positive},
                {"q_above_one", rep.q_above_one},
                {"pq_below_one", rep.pq_below_one},
                {"ordered", rep.ordered},
                {"distinct", rep.distinct},
                {"in_regime", rep.in_regime()},
                {"failed_predicates", rep.failures}};
}

json error_json(const std::string& type, const std::string& message) {
    return json{{"schema_version", kSchemaVersion}, {"error", {{"type", type}, {"message", message}}}};
}

void emit(const json& report, const std::string& out) {
    const std::string text = report.dump(2) + "\n";
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write output file '" + out + "'");
    f << text;
}

json check_json(const CheckResult& c) {
    return json{{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"abs_diff", c.abs_diff}, {"tolerance", c.tol}, {"pass", c.pass}};
}

}  // namespace cli
