#pragma once

#include "tasep/hitting.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

enum ExitCode { kOk = 0, kCheckFailed = 1, kConfigError = 2, kRegimeError = 3, kRuntimeError = 4 };

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    std::optional<int> n;
    int t = 1;
    tasep::Config y;
    std::vector<tasep::Rational> p, q;
    std::vector<tasep::Query> query;
    std::uint64_t seed = 1;
    std::string backend = "rational";
    std::size_t replicas = 1;
    std::optional<std::pair<long, long>> window;
    std::string route = "biorthogonal";
    bool continuation = false;
    bool timing = false;
    std::string out;
    std::string csv;

    int particles() const { return n.value_or(static_cast<int>(y.size())); }
    tasep::Rates<tasep::Rational> rates() const { return {p, q}; }
};

// Flag values as typed on the command line; empty strings mean "not given".
struct RawFlags {
    std::string config_file, n, t, y, p, q, query, seed, backend, replicas, window, route, out, csv;
    bool continuation = false;
    bool timing = false;
};

ExperimentConfig load_config(const RawFlags& flags);
// Regime predicates and the requirement that N, y, p, q fit together.
void check_shapes(const ExperimentConfig& cfg);

json rational_json(const tasep::Rational& r);
template <class S>
json scalar_json(const S& v) {
    if constexpr (tasep::ScalarTraits<S>::exact) return rational_json(v);
    else return v;
}
json config_json(const ExperimentConfig& cfg);
json regime_json(const tasep::RegimeReport& rep);
json error_json(const std::string& type, const std::string& message);

// Writes the report to cfg.out or stdout.
void emit(const json& report, const std::string& out);

struct CheckResult {
    std::string name;
    json lhs, rhs;
    double abs_diff = 0;
    double tol = 0;
    bool pass = true;
};

// Exact equality for exact scalars, |a - b| <= tol otherwise.
template <class S>
CheckResult compare(const std::string& name, const S& a, const S& b, double tol) {
    CheckResult c;
    c.name = name;
    c.lhs = scalar_json(a);
    c.rhs = scalar_json(b);
    c.abs_diff = std::abs(tasep::to_double(S(a - b)));
    if constexpr (tasep::ScalarTraits<S>::exact) {
        c.tol = 0;
        c.pass = a == b;
    } else {
        c.tol = tol;
        c.pass = c.abs_diff <= tol;
    }
    return c;
}

json check_json(const CheckResult& c);

// Subcommand output: JSON body, optional CSV rows (first row is the header).
struct Report {
    json body;
    std::vector<std::vector<std::string>> csv;
    bool pass = true;
};

Report run_simulate(const ExperimentConfig& cfg);
Report run_enumerate(const ExperimentConfig& cfg);
Report run_kernel(const ExperimentConfig& cfg);
Report run_fredholm(const ExperimentConfig& cfg);
// Matrix file: JSON array of 0/1 rows, or whitespace-separated rows of 0/1.
Report run_drsk(const std::string& matrix_file);

void write_csv(const std::vector<std::vector<std::string>>& rows, const std::string& path);

// Verification suite; returns the report and sets all_pass.
json run_verify(const std::string& level, const std::string& backend, bool timing, bool& all_pass);
std::vector<std::string> verify_manifest();

}  // namespace cli
