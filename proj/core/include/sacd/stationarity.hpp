#pragma once

#include <string>
#include <vector>

#include "sacd/gradients.hpp"
#include "sacd/prox.hpp"

namespace sacd {

// Default certification tolerance; an order of magnitude above the residuals
// a converged run produces, well below anything non-stationary.
inline constexpr double kCertificationTol = 1e-3;

// Entries below this magnitude count as zero for sign classification and
// raw sparsity/rank reporting.
inline constexpr double kMagnitudeFloor = 1e-4;

struct ConditionResidual {
    std::string name;
    double value = 0.0;
};

struct StationarityReport {
    ScenarioKind scenario = ScenarioKind::kSparsity;
    double max_violation_b = 0.0;
    double max_violation_c = 0.0;
    bool passed = false;
    double tol = kCertificationTol;
    std::vector<ConditionResidual> details;

    double max_violation() const {
        return max_violation_b > max_violation_c ? max_violation_b : max_violation_c;
    }
};

// Sparsity scenario: entries of P(G1+G2)PBR^-1 must equal +-gamma/2 at the
// nonzeros of B (sign-matched) and lie within [-gamma/2, gamma/2] at zeros;
// dual conditions on Pi_v^-1 C X (H1+H2) X.
StationarityReport check_spc(const PlantModel& plant, const Configuration& cfg,
                             const RiccatiPair& ric, double gamma,
                             double tol = kCertificationTol);

// Low-rank scenario: ||2T - gamma U V^T||_2 <= gamma plus the two equality
// conditions 2 U^T T = gamma V^T and 2 T V = gamma U, on both sides.
StationarityReport check_lpc(const PlantModel& plant, const Configuration& cfg,
                             const RiccatiPair& ric, double gamma,
                             double tol = kCertificationTol);

// Structure-constrained scenario: [T - gamma B] o complement(S) must vanish.
// Throws MaskViolationError if the configuration itself violates the masks.
StationarityReport check_scc(const PlantModel& plant, const Configuration& cfg,
                             const RiccatiPair& ric, double gamma,
                             const Eigen::Ref<const Eigen::MatrixXd>& s_b,
                             const Eigen::Ref<const Eigen::MatrixXd>& s_c,
                             double tol = kCertificationTol);

// Dispatches to the scenario-specific checker.
StationarityReport check_general(const PlantModel& plant, const Configuration& cfg,
                                 const RiccatiPair& ric, const ScenarioSpec& scenario,
                                 double tol = kCertificationTol);

}  // namespace sacd
