#pragma once

#include <Eigen/Core>
#include <utility>

#include "sacd/errors.hpp"

namespace sacd {

enum class ScenarioKind {
    kSparsity,    // SPC: l1 cost, unconstrained
    kLowRank,     // LPC: nuclear-norm cost, unconstrained
    kStructured,  // SCC: squared-Frobenius cost, Hadamard-mask constraint
};

const char* to_string(ScenarioKind kind);

// Which configuration cost/constraints apply, with weight gamma and the
// SCC forbidden-entry masks (1 = forbidden channel). Masks are empty for
// SPC/LPC.
struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::kSparsity;
    double gamma = 0.01;
    Eigen::MatrixXd s_b;  // n x m binary, SCC only
    Eigen::MatrixXd s_c;  // q x n binary, SCC only

    void validate(Eigen::Index n, Eigen::Index m, Eigen::Index q) const;
};

// Entrywise shrinkage: x - tau for x >= tau, 0 for |x| < tau, x + tau else.
Eigen::MatrixXd soft_threshold(const Eigen::Ref<const Eigen::MatrixXd>& x, double tau);

// Singular value thresholding U (Sigma - tau I)+ V^T. Ties sigma == tau map
// to exactly zero.
Eigen::MatrixXd svt(const Eigen::Ref<const Eigen::MatrixXd>& x, double tau);

// Closed-form M-update of the structure-constrained scenario:
// minimizes gamma ||M||_F^2 - <L, M> + rho/2 ||B - M||_F^2 subject to
// M o S = 0, giving M = (L + rho B) / (rho + 2 gamma) on allowed entries
// and exact zeros on the mask support.
Eigen::MatrixXd masked_ridge_prox(const Eigen::Ref<const Eigen::MatrixXd>& dual,
                                  const Eigen::Ref<const Eigen::MatrixXd>& b_iter,
                                  double rho, double gamma,
                                  const Eigen::Ref<const Eigen::MatrixXd>& mask);

// Factors B = B1 B2 with inner dimension r = #{sigma_i > tol * sigma_max},
// using B1 = U_r Sigma_r, B2 = V_r^T. Rank 0 yields empty-inner factors.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> rank_factorize(
    const Eigen::Ref<const Eigen::MatrixXd>& b, double tol = 1e-6);

}  // namespace sacd
