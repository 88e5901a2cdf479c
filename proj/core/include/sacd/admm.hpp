#pragma once

#include <utility>
#include <vector>

#include "sacd/gradients.hpp"
#include "sacd/lqg.hpp"
#include "sacd/prox.hpp"
#include "sacd/stationarity.hpp"

namespace sacd {

struct AdmmParams {
    double rho = 1.0;    // ADMM penalty
    double alpha = 0.5;  // Armijo parameter
    double beta = 0.5;   // backtracking shrink factor
    double eps_pri = 1e-5;
    double eps_dual = 1e-5;
    double eps_main = 1e-5;
    int max_inner_iters = 500;
    int max_admm_iters = 10000;
    int max_outer_iters = 50;

    void validate() const;
};

// Relative gradient-norm exit for the smooth-block descent.
inline constexpr double kDescentGradTol = 1e-6;

// Line-search floor; a step shrinking below this without acceptance stalls.
inline constexpr double kMinLineSearchStep = 1e-14;

// One ADMM variable triple (B or C side): primal iterate, auxiliary M/N,
// scaled dual L.
struct AdmmState {
    Eigen::MatrixXd primal;
    Eigen::MatrixXd auxiliary;
    Eigen::MatrixXd dual;
    int iter = 0;
};

struct AdmmTrace {
    ConfigSide side = ConfigSide::kActuator;
    std::vector<double> primal_residuals;
    std::vector<double> dual_residuals;
    bool converged = false;
};

struct OuterTraceRow {
    int iteration = 0;
    double j_total = 0.0;
    double j_lqg = 0.0;
    double j_sac_relaxed = 0.0;
    double j_sac_raw = 0.0;
};

struct RunReport {
    std::vector<OuterTraceRow> outer_trace;
    std::vector<AdmmTrace> admm_traces;
    Configuration final_cfg;
    StationarityReport stationarity;
    double wall_time_seconds = 0.0;
    int outer_iterations = 0;
    bool converged = false;  // false when max_outer_iters was hit
};

// Relaxed configuration cost: l1 / nuclear / squared Frobenius.
double scenario_cost_relaxed(const ScenarioSpec& scenario,
                             const Eigen::Ref<const Eigen::MatrixXd>& b,
                             const Eigen::Ref<const Eigen::MatrixXd>& c);

// Unrelaxed cost: l0 count above kMagnitudeFloor / numeric rank above
// kMagnitudeFloor * sigma_max / squared Frobenius.
double scenario_cost_raw(const ScenarioSpec& scenario,
                         const Eigen::Ref<const Eigen::MatrixXd>& b,
                         const Eigen::Ref<const Eigen::MatrixXd>& c);

// Minimizes f(V) = J_LQG(V, fixed) + <L, V - M> + rho/2 ||V - M||_F^2 by
// gradient descent with Armijo backtracking, starting from state.primal.
// Trial steps whose closed loop leaves the Hurwitz region evaluate to +inf
// and are rejected by the line search. Returns the final iterate.
Eigen::MatrixXd smooth_block_descent(const PlantModel& plant,
                                     const Eigen::Ref<const Eigen::MatrixXd>& fixed_side,
                                     const AdmmState& state, const AdmmParams& params,
                                     ConfigSide which);

// Runs the inner ADMM for one B- or C-subproblem until both residuals pass
// or max_admm_iters is hit, mutating state in place (primal, auxiliary and
// dual warm-start the next call). Returns the residual trace.
AdmmTrace admm_subproblem(const PlantModel& plant,
                          const Eigen::Ref<const Eigen::MatrixXd>& fixed_side,
                          const ScenarioSpec& scenario, const AdmmParams& params,
                          ConfigSide which, AdmmState& state);

// Fresh-start convenience entry: auxiliary = init (mask-projected for SCC),
// dual = 0. Returns the converged auxiliary iterate and the trace.
std::pair<Eigen::MatrixXd, AdmmTrace> admm_subproblem(
    const PlantModel& plant, const Eigen::Ref<const Eigen::MatrixXd>& fixed_side,
    const Eigen::Ref<const Eigen::MatrixXd>& init, const ScenarioSpec& scenario,
    const AdmmParams& params, ConfigSide which);

// Full alternating scheme: B-subproblem, C-subproblem, repeat until
// ||B_{h+1}-B_h||_F + ||C_{h+1}-C_h||_F <= eps_main. cfg0 must be
// stabilizable/detectable; for SCC it may violate the masks (the first
// auxiliary update projects), and the initial trace row is evaluated at the
// configuration as given.
RunReport alternate(const PlantModel& plant, const Configuration& cfg0,
                    const ScenarioSpec& scenario, const AdmmParams& params);

}  // namespace sacd
