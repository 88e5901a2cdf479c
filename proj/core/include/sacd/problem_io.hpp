#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sacd/admm.hpp"

namespace sacd {

// Initial B or C: an explicit matrix, or "random(seed)" for a seeded draw
// with entries i.i.d. uniform on [-1, 1], rejection-sampled until the
// configuration is stabilizable/detectable.
struct InitSpec {
    bool random = false;
    unsigned long seed = 0;
    Eigen::MatrixXd value;
};

struct ProblemFile {
    PlantModel plant;
    InitSpec init_b;
    InitSpec init_c;
    ScenarioSpec scenario;
    AdmmParams params;
    std::vector<double> sweep;  // optional gamma list, empty when absent
};

// Parses the JSON problem document. Throws ParseError naming the offending
// field on any failure.
ProblemFile parse_problem_file(const std::string& path);
ProblemFile parse_problem_string(const std::string& text);

// Materializes the initial configuration. Random draws use one generator
// seeded per side (override wins over the embedded seed); SCC draws are
// mask-projected before the feasibility test so the start is feasible.
// Throws InfeasibleInitError if an explicit init fails the S x D test or
// sampling exhausts its attempt budget.
Configuration resolve_initial_config(const ProblemFile& problem,
                                     std::optional<unsigned long> seed_override = {});

struct SweepRow {
    double gamma = 0.0;
    double j_lqg = 0.0;
    double j_sac_relaxed = 0.0;
    double j_sac_raw = 0.0;
    int outer_iters = 0;
    bool stationarity_passed = false;
    std::string status = "ok";  // error name for rows that failed
};

// Writers. Floats are printed with 9 significant digits.
void write_run_report(const std::string& path, const RunReport& report,
                      const ScenarioSpec& scenario);
void write_convergence_trace(const std::string& path, const RunReport& report);
void write_stationarity_report(const std::string& path, const StationarityReport& report);
// Clones the problem document with init_b/init_c replaced by the final
// configuration, so the output re-ingests as a new problem file.
void write_final_config(const std::string& path, const ProblemFile& problem,
                        const Configuration& cfg);
void write_sweep_table(const std::string& path, const std::vector<SweepRow>& rows);

}  // namespace sacd
