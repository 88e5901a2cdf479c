#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sacd/problem_io.hpp"
#include "sacd/rea1.hpp"

namespace sacd::cli {

// Exit codes shared by the subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitMaxIterations = 2;
inline constexpr int kExitInfeasibleInit = 3;
inline constexpr int kExitParseError = 4;

struct RunFlags {
    std::optional<double> gamma;
    std::optional<unsigned long> seed;
    std::optional<int> max_outer;
};

// Solves one problem file and writes run_report.json, convergence_trace.csv,
// stationarity_report.json and final_config.json into out_dir.
int run(const std::string& problem_path, const std::string& out_dir, const RunFlags& flags);

// One alternate() run per gamma from the same initialization; writes
// sweep.csv. Row failures are recorded in the row, not fatal.
int sweep(const std::string& problem_path, const std::vector<double>& gammas,
          const std::string& out_dir);

// Runs the embedded REA1 benchmark for one scenario and verifies the run
// against the benchmark's reference values (5% bands, exact raw counts).
int bench_rea1(ScenarioKind scenario, const std::string& out_dir);

// The benchmark run itself, without file output; used by bench_rea1 and the
// acceptance suite.
RunReport run_rea1(ScenarioKind scenario);

}  // namespace sacd::cli
