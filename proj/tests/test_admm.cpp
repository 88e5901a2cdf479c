#include <doctest.h>

#include <Eigen/Dense>

#include "sacd/admm.hpp"
#include "sacd/gradients.hpp"
#include "sacd/linalg.hpp"
#include "sacd/rea1.hpp"

using namespace sacd;

namespace {

PlantModel scalar_plant() {
    const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
    return PlantModel(Eigen::MatrixXd::Zero(1, 1), one, one, one, one);
}

double scalar_lqg(const PlantModel& plant, double b) {
    Configuration cfg{Eigen::MatrixXd::Constant(1, 1, b), Eigen::MatrixXd::Ones(1, 1)};
    return lqg_performance(plant, cfg, solve_gains(plant, cfg));
}

bool trace_nonincreasing(const RunReport& report, double slack) {
    for (std::size_t i = 1; i < report.outer_trace.size(); ++i) {
        if (report.outer_trace[i].j_total > report.outer_trace[i - 1].j_total + slack) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_SUITE_BEGIN("admm");

TEST_CASE("params validation") {
    AdmmParams params;
    CHECK_NOTHROW(params.validate());
    params.alpha = 1.0;
    CHECK_THROWS_AS(params.validate(), InconsistentInputError);
    params.alpha = 0.5;
    params.rho = 0.0;
    CHECK_THROWS_AS(params.validate(), InconsistentInputError);
    params.rho = 1.0;
    params.eps_main = -1e-5;
    CHECK_THROWS_AS(params.validate(), InconsistentInputError);
}

TEST_CASE("smooth block descent reaches its exit criterion and decreases f") {
    const PlantModel plant = rea1::plant();
    const Configuration cfg = rea1::initial_config();
    const AdmmParams params = rea1::benchmark_params();
    AdmmState state{cfg.b, cfg.b, Eigen::MatrixXd::Zero(4, 4), 0};

    auto objective = [&](const Eigen::MatrixXd& b) {
        Configuration probe{b, cfg.c};
        const RiccatiPair ric = solve_gains(plant, probe);
        const Eigen::MatrixXd diff = b - state.auxiliary;
        return lqg_performance(plant, probe, ric) +
               (state.dual.array() * diff.array()).sum() +
               0.5 * params.rho * diff.squaredNorm();
    };
    auto gradient = [&](const Eigen::MatrixXd& b) {
        Configuration probe{b, cfg.c};
        const RiccatiPair ric = solve_gains(plant, probe);
        return (grad_b(plant, probe, ric) + state.dual + params.rho * (b - state.auxiliary))
            .eval();
    };

    const Eigen::MatrixXd out =
        smooth_block_descent(plant, cfg.c, state, params, ConfigSide::kActuator);
    const double f0 = objective(state.primal);
    const double f1 = objective(out);
    CHECK(f1 <= f0);
    // Exit: relative gradient norm (10x slack covers a noise-floor stall exit).
    CHECK(gradient(out).norm() <= 10.0 * kDescentGradTol * (1.0 + std::abs(f1)));
}

TEST_CASE("smooth block descent solves the scalar composite problem") {
    const PlantModel plant = scalar_plant();
    AdmmParams params;
    params.rho = 2.0;
    AdmmState state;
    state.primal = Eigen::MatrixXd::Ones(1, 1);
    state.auxiliary = Eigen::MatrixXd::Constant(1, 1, 0.5);
    state.dual = Eigen::MatrixXd::Constant(1, 1, 0.3);

    const Eigen::MatrixXd fixed_c = Eigen::MatrixXd::Ones(1, 1);
    const double b_star =
        smooth_block_descent(plant, fixed_c, state, params, ConfigSide::kActuator)(0, 0);

    // Grid oracle over the composite objective.
    auto f = [&](double b) {
        return scalar_lqg(plant, b) + 0.3 * (b - 0.5) + 1.0 * (b - 0.5) * (b - 0.5);
    };
    double best_b = 0.05, best = f(0.05);
    for (int i = 1; i <= 3000; ++i) {
        const double b = 0.05 + 2.95 * i / 3000.0;
        if (const double v = f(b); v < best) {
            best = v;
            best_b = b;
        }
    }
    CHECK(b_star == doctest::Approx(best_b).epsilon(5e-3));
    CHECK(f(b_star) <= best + 1e-9);
}

TEST_CASE("descent from an infeasible start throws") {
    const PlantModel plant = rea1::plant();
    const Configuration cfg = rea1::initial_config();
    AdmmState state{Eigen::MatrixXd::Zero(4, 4), Eigen::MatrixXd::Zero(4, 4),
                    Eigen::MatrixXd::Zero(4, 4), 0};
    CHECK_THROWS_AS(
        smooth_block_descent(plant, cfg.c, state, rea1::benchmark_params(),
                             ConfigSide::kActuator),
        InfeasibleInitError);
}

TEST_CASE("dual update identity after one admm iteration") {
    const PlantModel plant = rea1::plant();
    const Configuration cfg = rea1::initial_config();
    AdmmParams params = rea1::benchmark_params();
    params.max_admm_iters = 1;
    AdmmState state{cfg.b, cfg.b, Eigen::MatrixXd::Zero(4, 4), 0};
    admm_subproblem(plant, cfg.c, rea1::scenario(ScenarioKind::kSparsity), params,
                    ConfigSide::kActuator, state);
    // L^1 - L^0 = rho (B^1 - M^1) with L^0 = 0, bitwise.
    CHECK((state.dual - params.rho * (state.primal - state.auxiliary)).norm() == 0.0);
    CHECK(state.iter == 1);
}

TEST_CASE("first sparsity subproblem starts sparsifying") {
    const PlantModel plant = rea1::plant();
    const Configuration cfg = rea1::initial_config();
    AdmmParams params = rea1::benchmark_params();
    params.eps_pri = params.eps_dual = 1e-4;
    const auto [m, trace] =
        admm_subproblem(plant, cfg.c, cfg.b, rea1::scenario(ScenarioKind::kSparsity), params,
                        ConfigSide::kActuator);
    CHECK(trace.converged);
    CHECK(trace.primal_residuals.back() <= params.eps_pri);
    CHECK(trace.dual_residuals.back() <= params.eps_dual);
    CHECK((m.array().abs() < 1e-8).count() > 0);  // exact zeros from the prox
    CHECK(check_stabilizable(plant.a, m));
}

TEST_CASE("gamma zero degenerates to identity prox") {
    const PlantModel plant = scalar_plant();
    ScenarioSpec scenario;
    scenario.kind = ScenarioKind::kSparsity;
    scenario.gamma = 0.0;
    AdmmParams params;
    AdmmState state{Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1),
                    Eigen::MatrixXd::Zero(1, 1), 0};
    admm_subproblem(plant, Eigen::MatrixXd::Ones(1, 1), scenario, params,
                    ConfigSide::kActuator, state);
    CHECK(state.dual.norm() == 0.0);                        // dual never leaves zero
    CHECK((state.primal - state.auxiliary).norm() == 0.0);  // M^k == B^k
}

TEST_CASE("structured subproblem keeps the mask exact at every exit") {
    const PlantModel plant = rea1::plant();
    const Configuration cfg = rea1::initial_config();
    const ScenarioSpec scenario = rea1::scenario(ScenarioKind::kStructured);
    for (int iters : {1, 2, 5}) {
        AdmmParams params = rea1::benchmark_params();
        params.max_admm_iters = iters;
        AdmmState state{cfg.b, (cfg.b.array() * (1.0 - scenario.s_b.array())).matrix(),
                        Eigen::MatrixXd::Zero(4, 4), 0};
        admm_subproblem(plant, cfg.c, scenario, params, ConfigSide::kActuator, state);
        CHECK((state.auxiliary.array() * scenario.s_b.array()).matrix().norm() == 0.0);
    }
}

TEST_CASE("alternate rejects infeasible initializations") {
    const PlantModel plant = rea1::plant();
    Configuration cfg = rea1::initial_config();
    cfg.b = Eigen::MatrixXd::Zero(4, 4);
    CHECK_THROWS_AS(alternate(plant, cfg, rea1::scenario(ScenarioKind::kSparsity),
                              rea1::benchmark_params()),
                    InfeasibleInitError);
}

TEST_CASE("alternate on rea1 sparsity: descent chain and report invariants") {
    const PlantModel plant = rea1::plant();
    AdmmParams params = rea1::benchmark_params();
    params.eps_pri = params.eps_dual = params.eps_main = 1e-4;
    const RunReport report =
        alternate(plant, rea1::initial_config(), rea1::scenario(ScenarioKind::kSparsity),
                  params);
    CHECK(report.converged);
    CHECK(report.outer_iterations <= 12);
    CHECK(trace_nonincreasing(report, 1e-8));
    CHECK(report.outer_trace.front().j_total == doctest::Approx(0.4689).epsilon(1e-3));
    CHECK(report.outer_trace.back().j_total == doctest::Approx(0.1823).epsilon(0.05));
    CHECK(report.stationarity.passed);
    CHECK(check_stabilizable(plant.a, report.final_cfg.b));
    CHECK(check_detectable(plant.a, report.final_cfg.c));
    CHECK(report.admm_traces.size() == 2 * static_cast<std::size_t>(report.outer_iterations));
    CHECK(report.wall_time_seconds > 0.0);
}

TEST_CASE("interleaved objective chain decreases across half-steps") {
    // J(B_{h+1}, C_h) <= J(B_h, C_h) <= J(B_h, C_{h-1}).
    const PlantModel plant = rea1::plant();
    const ScenarioSpec scenario = rea1::scenario(ScenarioKind::kSparsity);
    AdmmParams params = rea1::benchmark_params();
    params.eps_pri = params.eps_dual = 1e-4;

    auto j_total = [&](const Configuration& cfg) {
        const RiccatiPair ric = solve_gains(plant, cfg);
        return lqg_performance(plant, cfg, ric) +
               scenario.gamma * scenario_cost_relaxed(scenario, cfg.b, cfg.c);
    };

    Configuration cfg = rea1::initial_config();
    AdmmState sb{cfg.b, cfg.b, Eigen::MatrixXd::Zero(4, 4), 0};
    AdmmState sc{cfg.c, cfg.c, Eigen::MatrixXd::Zero(4, 4), 0};
    double j_prev = j_total(cfg);
    for (int h = 0; h < 2; ++h) {
        admm_subproblem(plant, cfg.c, scenario, params, ConfigSide::kActuator, sb);
        cfg.b = sb.auxiliary;
        sb.primal = cfg.b;
        const double j_half = j_total(cfg);
        CHECK(j_half <= j_prev + 1e-8);
        admm_subproblem(plant, cfg.b, scenario, params, ConfigSide::kSensor, sc);
        cfg.c = sc.auxiliary;
        sc.primal = cfg.c;
        const double j_full = j_total(cfg);
        CHECK(j_full <= j_half + 1e-8);
        j_prev = j_full;
    }
}

TEST_CASE("gamma zero run reduces pure lqg cost with vanishing gradients") {
    Eigen::MatrixXd a(2, 2);
    a << 0.3, 1.0, 0.0, -0.5;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
    const PlantModel plant(a, 0.01 * eye, 0.1 * eye, eye, 0.1 * eye);
    ScenarioSpec scenario;
    scenario.kind = ScenarioKind::kSparsity;
    scenario.gamma = 0.0;
    AdmmParams params;
    params.max_outer_iters = 16;
    const RunReport report = alternate(plant, Configuration{eye, eye}, scenario, params);

    for (std::size_t i = 1; i < report.outer_trace.size(); ++i) {
        CHECK(report.outer_trace[i].j_lqg <= report.outer_trace[i - 1].j_lqg + 1e-8);
    }
    const RiccatiPair ric = solve_gains(plant, report.final_cfg);
    CHECK(grad_b(plant, report.final_cfg, ric).norm() <= 1e-4);
    CHECK(grad_c(plant, report.final_cfg, ric).norm() <= 1e-4);
}

TEST_CASE("scenario costs") {
    ScenarioSpec spc;
    spc.kind = ScenarioKind::kSparsity;
    spc.gamma = 0.01;
    Eigen::MatrixXd b(2, 2), c(2, 2);
    b << 1.0, -2.0, 0.0, 0.5;
    c << 0.0, 0.0, 3.0, 0.0;
    CHECK(scenario_cost_relaxed(spc, b, c) == doctest::Approx(6.5));
    CHECK(scenario_cost_raw(spc, b, c) == doctest::Approx(4.0));

    ScenarioSpec lpc;
    lpc.kind = ScenarioKind::kLowRank;
    lpc.gamma = 0.01;
    const Eigen::MatrixXd outer_prod = Eigen::Vector2d(1, 2) * Eigen::RowVector2d(3, 4);
    CHECK(scenario_cost_raw(lpc, outer_prod, outer_prod) == doctest::Approx(2.0));

    ScenarioSpec scc;
    scc.kind = ScenarioKind::kStructured;
    scc.gamma = 0.01;
    scc.s_b = Eigen::MatrixXd::Zero(2, 2);
    scc.s_c = Eigen::MatrixXd::Zero(2, 2);
    CHECK(scenario_cost_relaxed(scc, b, c) ==
          doctest::Approx(b.squaredNorm() + c.squaredNorm()));
    CHECK(scenario_cost_raw(scc, b, c) == scenario_cost_relaxed(scc, b, c));
}

TEST_SUITE_END();
