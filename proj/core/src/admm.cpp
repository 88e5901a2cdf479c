#include "sacd/admm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

#include "sacd/linalg.hpp"

namespace sacd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double l1_norm(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    return m.array().abs().sum();
}

double nuclear_norm(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    return m.jacobiSvd().singularValues().sum();
}

double l0_count(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    return static_cast<double>((m.array().abs() > kMagnitudeFloor).count());
}

double numeric_rank(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    const Eigen::VectorXd sigma = m.jacobiSvd().singularValues();
    if (sigma.size() == 0 || sigma(0) == 0.0) {
        return 0.0;
    }
    return static_cast<double>((sigma.array() > kMagnitudeFloor * sigma(0)).count());
}

// One B- or C-subproblem with the other side frozen. The frozen side's CARE
// is solved once here; per-trial evaluations then need a single CARE solve
// (through the no-prescreen hot path; infeasible trials surface as
// SolverFailureError and evaluate to +inf). The actuator side works with
// tr(XQ) + tr(P W), the sensor side with the equivalent observer form
// tr(P Pi_w) + tr(X W).
class BlockProblem {
public:
    static BlockProblem make(const PlantModel& plant,
                             const Eigen::Ref<const Eigen::MatrixXd>& fixed_side,
                             ConfigSide side) {
        BlockProblem p(plant, side);
        if (side == ConfigSide::kActuator) {
            const Eigen::MatrixXd x = solve_care_filter(plant.a, fixed_side, plant.pi_w,
                                                        plant.pi_v);
            const Eigen::MatrixXd cx = fixed_side * x;
            p.cost_kernel_ = x * fixed_side.transpose() * plant.pi_v.llt().solve(cx);
            p.grad_rhs_ = x * plant.a.transpose() + plant.a * x;
            p.j_const_ = (x * plant.q_weight).trace();
        } else {
            const Eigen::MatrixXd pp = solve_care_control(plant.a, fixed_side,
                                                          plant.q_weight, plant.r_weight);
            const Eigen::MatrixXd btp = fixed_side.transpose() * pp;
            p.cost_kernel_ = btp.transpose() * plant.r_weight.llt().solve(btp);
            p.grad_rhs_ = pp * plant.a + plant.a.transpose() * pp;
            p.j_const_ = (pp * plant.pi_w).trace();
        }
        return p;
    }

    struct Eval {
        double j = std::numeric_limits<double>::infinity();
        Eigen::MatrixXd care;  // variable-side CARE solution; empty when infeasible
        bool feasible() const { return care.size() > 0; }
    };

    // J_LQG with the variable on this block's side; +inf outside the
    // stabilizable/detectable domain; the cost blows up at the stability
    // boundary, so the line search backs away on its own.
    Eval evaluate(const Eigen::MatrixXd& v) const {
        Eval out;
        if (!v.allFinite()) {
            return out;
        }
        try {
            out.care = solve_variable_care(v);
        } catch (const Error&) {
            return out;
        }
        out.j = j_const_ + (out.care * cost_kernel_).trace();
        return out;
    }

    // dJ_LQG/dV given the CARE solution from evaluate() at the same point.
    Eigen::MatrixXd gradient(const Eigen::MatrixXd& v, const Eigen::MatrixXd& sol) const {
        if (side_ == ConfigSide::kActuator) {
            // K* = -R^-1 B^T P; both auxiliary equations share A + B K*.
            const Eigen::MatrixXd a_cl =
                plant_.a - v * plant_.r_weight.llt().solve(v.transpose() * sol);
            const detail::LyapunovSolver lyap(a_cl);
            const Eigen::MatrixXd g_sum = lyap.solve(plant_.pi_w) + lyap.solve(grad_rhs_);
            const Eigen::MatrixXd pgp = sol * g_sum * sol;
            return -2.0 * (plant_.r_weight.llt().solve(v.transpose() * pgp)).transpose();
        }
        // L* = -X C^T Pi_v^-1; both auxiliary equations share A + L* C.
        const Eigen::MatrixXd a_cl =
            plant_.a - sol * v.transpose() * plant_.pi_v.llt().solve(v);
        const detail::LyapunovSolver lyap(a_cl.transpose());
        const Eigen::MatrixXd h_sum = lyap.solve(plant_.q_weight) + lyap.solve(grad_rhs_);
        const Eigen::MatrixXd xhx = sol * h_sum * sol;
        return -2.0 * plant_.pi_v.llt().solve(v * xhx);
    }

    ConfigSide side() const { return side_; }

private:
    BlockProblem(const PlantModel& plant, ConfigSide side) : plant_(plant), side_(side) {}

    Eigen::MatrixXd solve_variable_care(const Eigen::MatrixXd& v) const {
        if (side_ == ConfigSide::kActuator) {
            const Eigen::MatrixXd brb = v * plant_.r_weight.llt().solve(v.transpose());
            return detail::care_stabilizing(plant_.a, brb, plant_.q_weight);
        }
        const Eigen::MatrixXd ctc =
            v.transpose() * plant_.pi_v.llt().solve(v.eval());
        return detail::care_stabilizing(plant_.a.transpose(), ctc, plant_.pi_w);
    }

    const PlantModel& plant_;
    ConfigSide side_;
    Eigen::MatrixXd cost_kernel_;
    Eigen::MatrixXd grad_rhs_;
    double j_const_ = 0.0;
};

// Algorithm-1 backtracking gradient descent on
// f(v) = J_LQG(v, fixed) + <L, v - M> + rho/2 ||v - M||_F^2.
Eigen::MatrixXd descend(const BlockProblem& problem, const AdmmState& state,
                        const AdmmParams& params) {
    const Eigen::MatrixXd& m = state.auxiliary;
    const Eigen::MatrixXd& dual = state.dual;

    auto augment = [&](const Eigen::MatrixXd& v, double j) {
        const Eigen::MatrixXd diff = v - m;
        return j + (dual.array() * diff.array()).sum() + 0.5 * params.rho * diff.squaredNorm();
    };

    Eigen::MatrixXd x = state.primal;
    BlockProblem::Eval ex = problem.evaluate(x);
    if (!ex.feasible()) {
        throw InfeasibleInitError(problem.side() == ConfigSide::kActuator
                                      ? "descent start is not stabilizable"
                                      : "descent start is not detectable");
    }
    double f = augment(x, ex.j);

    for (int it = 0; it < params.max_inner_iters; ++it) {
        const Eigen::MatrixXd grad =
            problem.gradient(x, ex.care) + dual + params.rho * (x - m);
        const double grad_norm_sq = grad.squaredNorm();
        const double grad_norm = std::sqrt(grad_norm_sq);
        if (grad_norm <= kDescentGradTol * (1.0 + std::abs(f))) {
            break;
        }
        double t = 1.0;
        bool accepted = false;
        while (t >= kMinLineSearchStep) {
            const Eigen::MatrixXd trial = x - t * grad;
            const BlockProblem::Eval et = problem.evaluate(trial);
            const double f_trial = et.feasible() ? augment(trial, et.j) : kInf;
            if (f_trial <= f - params.alpha * t * grad_norm_sq) {
                x = trial;
                ex = et;
                f = f_trial;
                accepted = true;
                break;
            }
            t *= params.beta;
        }
        if (!accepted) {
            // The Armijo decrease fell below the CARE evaluation noise floor.
            // Near the exit threshold that is convergence, not failure.
            if (grad_norm <= 10.0 * kDescentGradTol * (1.0 + std::abs(f))) {
                break;
            }
            throw LineSearchStallError("line search stalled with gradient norm " +
                                       std::to_string(grad_norm));
        }
    }
    if (!x.allFinite()) {
        throw NonFiniteIterateError("descent produced NaN/Inf");
    }
    return x;
}

Eigen::MatrixXd prox_dispatch(const ScenarioSpec& scenario, const AdmmParams& params,
                              const Eigen::MatrixXd& primal, const Eigen::MatrixXd& dual,
                              ConfigSide which) {
    switch (scenario.kind) {
        case ScenarioKind::kSparsity:
            if (scenario.gamma == 0.0) {  // prox of zero cost is the identity
                return primal + dual / params.rho;
            }
            return soft_threshold(primal + dual / params.rho, scenario.gamma / params.rho);
        case ScenarioKind::kLowRank:
            if (scenario.gamma == 0.0) {
                return primal + dual / params.rho;
            }
            return svt(primal + dual / params.rho, scenario.gamma / params.rho);
        case ScenarioKind::kStructured:
            return masked_ridge_prox(
                dual, primal, params.rho, scenario.gamma,
                which == ConfigSide::kActuator ? scenario.s_b : scenario.s_c);
    }
    throw InconsistentInputError("unknown scenario kind");
}

Eigen::MatrixXd project_if_structured(const ScenarioSpec& scenario, const Eigen::MatrixXd& m,
                                      ConfigSide which) {
    if (scenario.kind != ScenarioKind::kStructured) {
        return m;
    }
    const Eigen::MatrixXd& mask = which == ConfigSide::kActuator ? scenario.s_b : scenario.s_c;
    return m.array() * (1.0 - mask.array());
}

AdmmTrace run_admm(const BlockProblem& problem, const ScenarioSpec& scenario,
                   const AdmmParams& params, ConfigSide which, AdmmState& state) {
    AdmmTrace trace;
    trace.side = which;
    for (int k = 0; k < params.max_admm_iters; ++k) {
        state.primal = descend(problem, state, params);
        const Eigen::MatrixXd prev_aux = state.auxiliary;
        state.auxiliary = prox_dispatch(scenario, params, state.primal, state.dual, which);
        state.dual += params.rho * (state.primal - state.auxiliary);
        if (!state.auxiliary.allFinite() || !state.dual.allFinite()) {
            throw NonFiniteIterateError("ADMM update produced NaN/Inf");
        }
        const double primal_res = (state.primal - state.auxiliary).norm();
        const double dual_res = params.rho * (state.auxiliary - prev_aux).norm();
        trace.primal_residuals.push_back(primal_res);
        trace.dual_residuals.push_back(dual_res);
        ++state.iter;
        if (primal_res <= params.eps_pri && dual_res <= params.eps_dual) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

}  // namespace

void AdmmParams::validate() const {
    if (rho <= 0.0) {
        throw InconsistentInputError("rho must be positive");
    }
    if (alpha <= 0.0 || alpha >= 1.0 || beta <= 0.0 || beta >= 1.0) {
        throw InconsistentInputError("alpha and beta must lie in (0, 1)");
    }
    if (eps_pri <= 0.0 || eps_dual <= 0.0 || eps_main <= 0.0) {
        throw InconsistentInputError("tolerances must be positive");
    }
    if (max_inner_iters < 1 || max_admm_iters < 1 || max_outer_iters < 1) {
        throw InconsistentInputError("iteration caps must be positive");
    }
}

double scenario_cost_relaxed(const ScenarioSpec& scenario,
                             const Eigen::Ref<const Eigen::MatrixXd>& b,
                             const Eigen::Ref<const Eigen::MatrixXd>& c) {
    switch (scenario.kind) {
        case ScenarioKind::kSparsity:
            return l1_norm(b) + l1_norm(c);
        case ScenarioKind::kLowRank:
            return nuclear_norm(b) + nuclear_norm(c);
        case ScenarioKind::kStructured:
            return b.squaredNorm() + c.squaredNorm();
    }
    throw InconsistentInputError("unknown scenario kind");
}

double scenario_cost_raw(const ScenarioSpec& scenario,
                         const Eigen::Ref<const Eigen::MatrixXd>& b,
                         const Eigen::Ref<const Eigen::MatrixXd>& c) {
    switch (scenario.kind) {
        case ScenarioKind::kSparsity:
            return l0_count(b) + l0_count(c);
        case ScenarioKind::kLowRank:
            return numeric_rank(b) + numeric_rank(c);
        case ScenarioKind::kStructured:
            return b.squaredNorm() + c.squaredNorm();
    }
    throw InconsistentInputError("unknown scenario kind");
}

Eigen::MatrixXd smooth_block_descent(const PlantModel& plant,
                                     const Eigen::Ref<const Eigen::MatrixXd>& fixed_side,
                                     const AdmmState& state, const AdmmParams& params,
                                     ConfigSide which) {
    params.validate();
    return descend(BlockProblem::make(plant, fixed_side, which), state, params);
}

AdmmTrace admm_subproblem(const PlantModel& plant,
                          const Eigen::Ref<const Eigen::MatrixXd>& fixed_side,
                          const ScenarioSpec& scenario, const AdmmParams& params,
                          ConfigSide which, AdmmState& state) {
    params.validate();
    const BlockProblem problem = BlockProblem::make(plant, fixed_side, which);
    return run_admm(problem, scenario, params, which, state);
}

std::pair<Eigen::MatrixXd, AdmmTrace> admm_subproblem(
    const PlantModel& plant, const Eigen::Ref<const Eigen::MatrixXd>& fixed_side,
    const Eigen::Ref<const Eigen::MatrixXd>& init, const ScenarioSpec& scenario,
    const AdmmParams& params, ConfigSide which) {
    AdmmState state;
    state.primal = init;
    state.auxiliary = project_if_structured(scenario, init, which);
    state.dual = Eigen::MatrixXd::Zero(init.rows(), init.cols());
    AdmmTrace trace = admm_subproblem(plant, fixed_side, scenario, params, which, state);
    return {state.auxiliary, std::move(trace)};
}

RunReport alternate(const PlantModel& plant, const Configuration& cfg0,
                    const ScenarioSpec& scenario, const AdmmParams& params) {
    const auto t_start = std::chrono::steady_clock::now();
    params.validate();
    cfg0.check_dims(plant);
    scenario.validate(plant.state_dim(), plant.input_dim(), plant.output_dim());
    if (!check_stabilizable(plant.a, cfg0.b)) {
        throw InfeasibleInitError("(a, b0) is not stabilizable");
    }
    if (!check_detectable(plant.a, cfg0.c)) {
        throw InfeasibleInitError("(a, c0) is not detectable");
    }

    RunReport report;
    Configuration cfg = cfg0;

    // Auxiliary and dual variables persist across outer rounds; re-zeroing
    // the duals each round leaves a residual limit cycle above eps_main.
    AdmmState state_b{cfg.b, project_if_structured(scenario, cfg.b, ConfigSide::kActuator),
                      Eigen::MatrixXd::Zero(cfg.b.rows(), cfg.b.cols()), 0};
    AdmmState state_c{cfg.c, project_if_structured(scenario, cfg.c, ConfigSide::kSensor),
                      Eigen::MatrixXd::Zero(cfg.c.rows(), cfg.c.cols()), 0};

    auto record = [&](int iteration) {
        OuterTraceRow row;
        row.iteration = iteration;
        const RiccatiPair ric = solve_gains(plant, cfg);
        row.j_lqg = lqg_performance(plant, cfg, ric);
        row.j_sac_relaxed = scenario_cost_relaxed(scenario, cfg.b, cfg.c);
        row.j_sac_raw = scenario_cost_raw(scenario, cfg.b, cfg.c);
        row.j_total = row.j_lqg + scenario.gamma * row.j_sac_relaxed;
        report.outer_trace.push_back(row);
    };

    record(0);
    for (int h = 0; h < params.max_outer_iters; ++h) {
        const Eigen::MatrixXd b_prev = cfg.b;
        const Eigen::MatrixXd c_prev = cfg.c;

        report.admm_traces.push_back(
            admm_subproblem(plant, cfg.c, scenario, params, ConfigSide::kActuator, state_b));
        cfg.b = state_b.auxiliary;
        state_b.primal = cfg.b;

        report.admm_traces.push_back(
            admm_subproblem(plant, cfg.b, scenario, params, ConfigSide::kSensor, state_c));
        cfg.c = state_c.auxiliary;
        state_c.primal = cfg.c;

        report.outer_iterations = h + 1;
        record(h + 1);
        const double delta = (cfg.b - b_prev).norm() + (cfg.c - c_prev).norm();
        // Each inner ADMM may leave its auxiliary moving by up to eps_dual/rho
        // per round, so outer displacements below 2 eps_dual/rho are at the
        // resolution limit of the inner stopping rule.
        const double resolution = 2.0 * params.eps_dual / params.rho;
        if (delta <= std::max(params.eps_main, resolution)) {
            report.converged = true;
            break;
        }
    }

    report.final_cfg = cfg;
    const RiccatiPair ric = solve_gains(plant, cfg);
    report.stationarity = check_general(plant, cfg, ric, scenario);
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

}  // namespace sacd
