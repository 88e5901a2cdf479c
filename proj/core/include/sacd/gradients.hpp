#pragma once

#include <Eigen/Core>

#include "sacd/lqg.hpp"

namespace sacd {

// Which of the two configuration matrices an operation targets.
enum class ConfigSide { kActuator, kSensor };

struct GradientPair {
    Eigen::MatrixXd grad_b;  // n x m
    Eigen::MatrixXd grad_c;  // q x n
};

// dJ_LQG/dB = -2 P (G1 + G2) P B R^-1, with G1, G2 the symmetric solutions of
//   G1 (A+BK*)^T + (A+BK*) G1 + Pi_w        = 0,
//   G2 (A+BK*)^T + (A+BK*) G2 + X A^T + A X = 0.
Eigen::MatrixXd grad_b(const PlantModel& plant, const Configuration& cfg,
                       const RiccatiPair& ric);

// dJ_LQG/dC = -2 Pi_v^-1 C X (H1 + H2) X, with H1, H2 the symmetric solutions of
//   H1 (A+L*C) + (A+L*C)^T H1 + Q             = 0,
//   H2 (A+L*C) + (A+L*C)^T H2 + P A + A^T P   = 0.
Eigen::MatrixXd grad_c(const PlantModel& plant, const Configuration& cfg,
                       const RiccatiPair& ric);

GradientPair gradient_pair(const PlantModel& plant, const Configuration& cfg,
                           const RiccatiPair& ric);

// Central-difference oracle for the analytic gradients; entry (i,j) is
// [J(X + h E_ij) - J(X - h E_ij)] / (2h). Throws PerturbationInfeasibleError
// if any probe leaves the stabilizable/detectable domain.
Eigen::MatrixXd fd_gradient(const PlantModel& plant, const Configuration& cfg,
                            ConfigSide which, double step = 1e-6);

}  // namespace sacd
