#pragma once

#include <Eigen/Core>

#include "sacd/errors.hpp"

namespace sacd {

// Fixed data of the design problem: dx = A x + B u + w, y = C x + v,
// cost weights Q, R and noise covariances Pi_w, Pi_v. B and C are the
// design variables and live in Configuration.
struct PlantModel {
    Eigen::MatrixXd a;         // n x n
    Eigen::MatrixXd pi_w;      // n x n SPD process-noise covariance
    Eigen::MatrixXd pi_v;      // q x q SPD measurement-noise covariance
    Eigen::MatrixXd q_weight;  // n x n SPD state weight
    Eigen::MatrixXd r_weight;  // m x m SPD input weight

    PlantModel(Eigen::MatrixXd a_in, Eigen::MatrixXd pi_w_in, Eigen::MatrixXd pi_v_in,
               Eigen::MatrixXd q_in, Eigen::MatrixXd r_in);

    Eigen::Index state_dim() const { return a.rows(); }
    Eigen::Index input_dim() const { return r_weight.rows(); }
    Eigen::Index output_dim() const { return pi_v.rows(); }
};

// Candidate actuator/sensor pair.
struct Configuration {
    Eigen::MatrixXd b;  // n x m
    Eigen::MatrixXd c;  // q x n

    void check_dims(const PlantModel& plant) const;
};

// Solutions of the dual CAREs plus the optimal gains
// K* = -R^-1 B^T P, L* = -X C^T Pi_v^-1.
struct RiccatiPair {
    Eigen::MatrixXd x;      // filter CARE solution, SPD
    Eigen::MatrixXd p;      // control CARE solution, SPD
    Eigen::MatrixXd k_opt;  // m x n
    Eigen::MatrixXd l_opt;  // n x q
};

// PBH stabilizability of (A, B).
bool check_stabilizable(const Eigen::Ref<const Eigen::MatrixXd>& a,
                        const Eigen::Ref<const Eigen::MatrixXd>& b);

// PBH detectability of (A, C); dual of check_stabilizable via (A^T, C^T).
bool check_detectable(const Eigen::Ref<const Eigen::MatrixXd>& a,
                      const Eigen::Ref<const Eigen::MatrixXd>& c);

// Solves both CAREs and forms the optimal gains.
// Throws NotStabilizableError / NotDetectableError / SolverFailureError.
RiccatiPair solve_gains(const PlantModel& plant, const Configuration& cfg);

// J_LQG = tr(XQ) + tr(P X C^T Pi_v^-1 C X)  (controller form; canonical).
// Debug builds assert agreement with the observer form.
double lqg_performance(const PlantModel& plant, const Configuration& cfg,
                       const RiccatiPair& ric);

// Observer form tr(P Pi_w) + tr(X P B R^-1 B^T P); equals the controller
// form analytically, exposed for cross-checks.
double lqg_performance_observer_form(const PlantModel& plant, const Configuration& cfg,
                                     const RiccatiPair& ric);

}  // namespace sacd
