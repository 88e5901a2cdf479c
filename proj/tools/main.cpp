#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "driver.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Joint actuator/sensor configuration for LQG plants"};
    app.require_subcommand(1);

    // run <file> --out <dir> [--gamma v] [--seed n] [--max-outer n]
    auto* run_cmd = app.add_subcommand("run", "Solve one problem file");
    std::string run_problem, run_out;
    double run_gamma = 0.0;
    unsigned long run_seed = 0;
    int run_max_outer = 0;
    run_cmd->add_option("problem", run_problem, "Problem file (JSON)")->required();
    run_cmd->add_option("--out", run_out, "Output directory")->required();
    auto* gamma_opt = run_cmd->add_option("--gamma", run_gamma, "Override scenario gamma");
    auto* seed_opt = run_cmd->add_option("--seed", run_seed, "Override random-init seed");
    auto* max_outer_opt =
        run_cmd->add_option("--max-outer", run_max_outer, "Override max outer iterations");

    // sweep <file> --gammas v1,v2,... --out <dir>
    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep the configuration-cost weight");
    std::string sweep_problem, sweep_out;
    std::vector<double> sweep_gammas;
    sweep_cmd->add_option("problem", sweep_problem, "Problem file (JSON)")->required();
    sweep_cmd->add_option("--gammas", sweep_gammas,
                          "Ascending gamma list (default: the file's sweep list)")
        ->delimiter(',');
    sweep_cmd->add_option("--out", sweep_out, "Output directory")->required();

    // bench rea1 --scenario spc|lpc|scc --out <dir>
    auto* bench_cmd = app.add_subcommand("bench", "Run a built-in benchmark");
    std::string bench_name, bench_scenario, bench_out;
    bench_cmd->add_option("name", bench_name, "Benchmark name (rea1)")->required();
    bench_cmd->add_option("--scenario", bench_scenario, "spc, lpc or scc")->required();
    bench_cmd->add_option("--out", bench_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        sacd::cli::RunFlags flags;
        if (gamma_opt->count() > 0) {
            flags.gamma = run_gamma;
        }
        if (seed_opt->count() > 0) {
            flags.seed = run_seed;
        }
        if (max_outer_opt->count() > 0) {
            flags.max_outer = run_max_outer;
        }
        return sacd::cli::run(run_problem, run_out, flags);
    }
    if (sweep_cmd->parsed()) {
        return sacd::cli::sweep(sweep_problem, sweep_gammas, sweep_out);
    }
    if (bench_cmd->parsed()) {
        if (bench_name != "rea1") {
            std::fprintf(stderr, "unknown benchmark \"%s\" (available: rea1)\n",
                         bench_name.c_str());
            return sacd::cli::kExitParseError;
        }
        sacd::ScenarioKind kind;
        if (bench_scenario == "spc") {
            kind = sacd::ScenarioKind::kSparsity;
        } else if (bench_scenario == "lpc") {
            kind = sacd::ScenarioKind::kLowRank;
        } else if (bench_scenario == "scc") {
            kind = sacd::ScenarioKind::kStructured;
        } else {
            std::fprintf(stderr, "unknown scenario \"%s\" (spc|lpc|scc)\n",
                         bench_scenario.c_str());
            return sacd::cli::kExitParseError;
        }
        return sacd::cli::bench_rea1(kind, bench_out);
    }
    return sacd::cli::kExitFailure;
}
