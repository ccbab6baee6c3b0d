#include "cli_common.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <iostream>
#include <optional>

namespace {

void add_experiment_flags(CLI::App* sub, cli::RawFlags& f) {
    sub->add_option("--config", f.config_file, "JSON config file; flags override its fields");
    sub->add_option("--N", f.n, "number of particles");
    sub->add_option("--t", f.t, "number of time steps");
    sub->add_option("--y", f.y, "initial positions, strictly decreasing, e.g. 3,1,0");
    sub->add_option("--p", f.p, "time rates p_1..p_t, e.g. 1/4,1/3");
    sub->add_option("--q", f.q, "particle rates q_1..q_N, e.g. 3/2,2");
    sub->add_option("--query", f.query, "pairs k:s meaning Y_k(t) >= s, e.g. 1:4,3:1");
    sub->add_option("--seed", f.seed, "master seed");
    sub->add_option("--backend", f.backend, "rational or float");
    sub->add_option("--replicas", f.replicas, "Monte Carlo replicas");
    sub->add_option("--window", f.window, "window lo:hi");
    sub->add_option("--route", f.route, "kernel route: biorthogonal or hitting");
    sub->add_flag("--continuation", f.continuation, "allow parameters outside the convergence regime");
}

void add_output_flags(CLI::App* sub, cli::RawFlags& f) {
    sub->add_option("--out", f.out, "write the JSON report here instead of stdout");
    sub->add_option("--csv", f.csv, "also write a CSV table");
    sub->add_flag("--timing", f.timing, "include wall time in the report");
}

int finish(cli::Report rep, const cli::RawFlags& f, std::chrono::steady_clock::time_point t0) {
    if (f.timing) rep.body["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.body["pass"] = rep.pass;
    cli::emit(rep.body, f.out);
    if (!f.csv.empty()) cli::write_csv(rep.csv, f.csv);
    return rep.pass ? cli::kOk : cli::kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-time TASEP: simulation, exact laws and Fredholm determinants"};
    app.require_subcommand(1);
    cli::RawFlags f;
    std::string level = "quick", matrix;
    bool list = false;

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo trajectories");
    auto* enumerate = app.add_subcommand("enumerate", "exact transition table by enumeration");
    auto* kernel = app.add_subcommand("kernel", "tabulate the correlation kernel");
    auto* fredholm = app.add_subcommand("fredholm", "multipoint probability as a Fredholm determinant");
    for (auto* sub : {simulate, enumerate, kernel, fredholm}) {
        add_experiment_flags(sub, f);
        add_output_flags(sub, f);
    }
    auto* verify = app.add_subcommand("verify", "run the identity suite");
    verify->add_option("--level", level, "quick or full");
    verify->add_option("--backend", f.backend, "rational or float");
    verify->add_flag("--list", list, "print the manifest and exit");
    add_output_flags(verify, f);
    auto* drsk = app.add_subcommand("drsk", "run the dual RSK bijection on a 0/1 matrix");
    drsk->add_option("--matrix", matrix, "matrix file (JSON rows or whitespace-separated rows)")->required();
    add_output_flags(drsk, f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        cli::emit(cli::error_json("usage_error", e.what()), "");
        return cli::kConfigError;
    }

    const auto t0 = std::chrono::steady_clock::now();
    std::optional<cli::ExperimentConfig> loaded;
    try {
        if (*verify) {
            if (list) {
                cli::emit(cli::json{{"schema_version", cli::kSchemaVersion}, {"manifest", cli::verify_manifest()}}, f.out);
                return cli::kOk;
            }
            const std::string backend = f.backend.empty() ? "rational" : f.backend;
            if (backend != "rational" && backend != "float") throw cli::ConfigError("backend must be 'rational' or 'float'");
            bool all_pass = false;
            cli::Report rep;
            rep.body = cli::run_verify(level, backend, f.timing, all_pass);
            rep.pass = all_pass;
            rep.csv.push_back({"id", "checks", "failures", "pass"});
            for (const auto& e : rep.body["entries"])
                rep.csv.push_back({e["id"].get<std::string>(), std::to_string(e["checks"].get<int>()), std::to_string(e["failures"].get<int>()),
                                   e["pass"].get<bool>() ? "true" : "false"});
            rep.body.erase("pass");
            return finish(rep, f, t0);
        }
        if (*drsk) return finish(cli::run_drsk(matrix), f, t0);

        cli::ExperimentConfig cfg = cli::load_config(f);
        cli::check_shapes(cfg);
        loaded = cfg;
        if (*simulate) return finish(cli::run_simulate(cfg), f, t0);
        if (*enumerate) return finish(cli::run_enumerate(cfg), f, t0);
        if (*kernel) return finish(cli::run_kernel(cfg), f, t0);
        return finish(cli::run_fredholm(cfg), f, t0);
    } catch (const tasep::RegimeError& e) {
        auto j = cli::error_json("regime_error", e.what());
        j["error"]["predicate"] = e.predicate();
        if (loaded) j["regime"] = cli::regime_json(tasep::evaluate_regime(loaded->rates(), loaded->t));
        cli::emit(j, "");
        return cli::kRegimeError;
    } catch (const cli::ConfigError& e) {
        cli::emit(cli::error_json("config_error", e.what()), "");
        return cli::kConfigError;
    } catch (const std::invalid_argument& e) {
        cli::emit(cli::error_json("invalid_argument", e.what()), "");
        return cli::kConfigError;
    } catch (const std::exception& e) {
        cli::emit(cli::error_json("runtime_error", e.what()), "");
        return cli::kRuntimeError;
    }
}
