#pragma once

#include "sacd/admm.hpp"
#include "sacd/lqg.hpp"
#include "sacd/prox.hpp"

namespace sacd::rea1 {

// COMPleib REA1 chemical-reactor benchmark: fixed open-loop (unstable) A with
// Q = I, R = 0.1 I, Pi_w = 0.01 I, Pi_v = 0.1 I and free 4x4 B, C.

Eigen::MatrixXd system_matrix();

PlantModel plant();

// The benchmark initialization B0, C0 (stabilizable and detectable).
Configuration initial_config();

// SCC structure masks (1 = forbidden channel).
Eigen::MatrixXd actuator_mask();
Eigen::MatrixXd sensor_mask();

// rho = 1, alpha = beta = 0.5, all tolerances 1e-5.
AdmmParams benchmark_params();

// Scenario with the benchmark gamma (masks attached for SCC).
ScenarioSpec scenario(ScenarioKind kind, double gamma = 0.01);

}  // namespace sacd::rea1
