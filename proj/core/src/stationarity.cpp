#include "sacd/stationarity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "sacd/linalg.hpp"

namespace sacd {

namespace {

// The optimality conditions are stated on T_B = P(G1+G2)PBR^-1 and
// T_C = Pi_v^-1 C X (H1+H2) X, which are -grad/2.
Eigen::MatrixXd half_neg_grad_b(const PlantModel& plant, const Configuration& cfg,
                                const RiccatiPair& ric) {
    return -0.5 * grad_b(plant, cfg, ric);
}

Eigen::MatrixXd half_neg_grad_c(const PlantModel& plant, const Configuration& cfg,
                                const RiccatiPair& ric) {
    return -0.5 * grad_c(plant, cfg, ric);
}

struct SignSplit {
    double support_equality = 0.0;  // worst |T -+ gamma/2| over sign-matched nonzeros
    double zero_interval = 0.0;     // worst interval excess over zeros
};

SignSplit spc_violations(const Eigen::MatrixXd& t, const Eigen::MatrixXd& var, double gamma) {
    SignSplit out;
    const double half = 0.5 * gamma;
    for (Eigen::Index i = 0; i < var.rows(); ++i) {
        for (Eigen::Index j = 0; j < var.cols(); ++j) {
            const double v = var(i, j);
            if (v > kMagnitudeFloor) {
                out.support_equality = std::max(out.support_equality, std::abs(t(i, j) - half));
            } else if (v < -kMagnitudeFloor) {
                out.support_equality = std::max(out.support_equality, std::abs(t(i, j) + half));
            } else {
                out.zero_interval =
                    std::max(out.zero_interval, std::max(0.0, std::abs(t(i, j)) - half));
            }
        }
    }
    return out;
}

double spectral_norm(const Eigen::MatrixXd& m) {
    return m.jacobiSvd().singularValues()(0);
}

struct LpcViolations {
    double norm_excess = 0.0;
    double left_equality = 0.0;
    double right_equality = 0.0;
    double max() const { return std::max({norm_excess, left_equality, right_equality}); }
};

// Restriction of the SVD to singular values above the numeric-rank floor
// (the same kMagnitudeFloor used for rank reporting) before evaluating the
// low-rank optimality conditions.
LpcViolations lpc_violations(const Eigen::MatrixXd& t, const Eigen::MatrixXd& var,
                             double gamma) {
    const SvdResult dec = svd(var);
    Eigen::Index rank = 0;
    if (dec.sigma.size() > 0) {
        const double cutoff = kMagnitudeFloor * dec.sigma(0);
        while (rank < dec.sigma.size() && dec.sigma(rank) > cutoff) {
            ++rank;
        }
    }
    const Eigen::MatrixXd u = dec.u.leftCols(rank);
    const Eigen::MatrixXd vt = dec.vt.topRows(rank);
    LpcViolations out;
    out.norm_excess = std::max(0.0, spectral_norm(2.0 * t - gamma * u * vt) - gamma);
    out.left_equality = (2.0 * u.transpose() * t - gamma * vt).norm();
    out.right_equality = (2.0 * t * vt.transpose() - gamma * u).norm();
    return out;
}

StationarityReport finalize(ScenarioKind kind, double viol_b, double viol_c, double tol,
                            std::vector<ConditionResidual> details) {
    StationarityReport report;
    report.scenario = kind;
    report.max_violation_b = viol_b;
    report.max_violation_c = viol_c;
    report.tol = tol;
    report.passed = report.max_violation() <= tol;
    report.details = std::move(details);
    return report;
}

}  // namespace

StationarityReport check_spc(const PlantModel& plant, const Configuration& cfg,
                             const RiccatiPair& ric, double gamma, double tol) {
    const SignSplit b = spc_violations(half_neg_grad_b(plant, cfg, ric), cfg.b, gamma);
    const SignSplit c = spc_violations(half_neg_grad_c(plant, cfg, ric), cfg.c, gamma);
    return finalize(ScenarioKind::kSparsity, std::max(b.support_equality, b.zero_interval),
                    std::max(c.support_equality, c.zero_interval), tol,
                    {{"b_support_equality", b.support_equality},
                     {"b_zero_interval_excess", b.zero_interval},
                     {"c_support_equality", c.support_equality},
                     {"c_zero_interval_excess", c.zero_interval}});
}

StationarityReport check_lpc(const PlantModel& plant, const Configuration& cfg,
                             const RiccatiPair& ric, double gamma, double tol) {
    const LpcViolations b = lpc_violations(half_neg_grad_b(plant, cfg, ric), cfg.b, gamma);
    const LpcViolations c = lpc_violations(half_neg_grad_c(plant, cfg, ric), cfg.c, gamma);
    return finalize(ScenarioKind::kLowRank, b.max(), c.max(), tol,
                    {{"b_spectral_norm_excess", b.norm_excess},
                     {"b_left_equality", b.left_equality},
                     {"b_right_equality", b.right_equality},
                     {"c_spectral_norm_excess", c.norm_excess},
                     {"c_left_equality", c.left_equality},
                     {"c_right_equality", c.right_equality}});
}

StationarityReport check_scc(const PlantModel& plant, const Configuration& cfg,
                             const RiccatiPair& ric, double gamma,
                             const Eigen::Ref<const Eigen::MatrixXd>& s_b,
                             const Eigen::Ref<const Eigen::MatrixXd>& s_c, double tol) {
    if ((cfg.b.array() * s_b.array()).matrix().norm() > 0.0) {
        throw MaskViolationError("b has nonzero entries on forbidden channels");
    }
    if ((cfg.c.array() * s_c.array()).matrix().norm() > 0.0) {
        throw MaskViolationError("c has nonzero entries on forbidden channels");
    }
    const Eigen::MatrixXd tb = half_neg_grad_b(plant, cfg, ric);
    const Eigen::MatrixXd tc = half_neg_grad_c(plant, cfg, ric);
    const double viol_b =
        ((tb - gamma * cfg.b).array() * (1.0 - s_b.array())).matrix().norm();
    const double viol_c =
        ((tc - gamma * cfg.c).array() * (1.0 - s_c.array())).matrix().norm();
    return finalize(ScenarioKind::kStructured, viol_b, viol_c, tol,
                    {{"b_masked_residual", viol_b}, {"c_masked_residual", viol_c}});
}

StationarityReport check_general(const PlantModel& plant, const Configuration& cfg,
                                 const RiccatiPair& ric, const ScenarioSpec& scenario,
                                 double tol) {
    scenario.validate(plant.state_dim(), plant.input_dim(), plant.output_dim());
    switch (scenario.kind) {
        case ScenarioKind::kSparsity:
            return check_spc(plant, cfg, ric, scenario.gamma, tol);
        case ScenarioKind::kLowRank:
            return check_lpc(plant, cfg, ric, scenario.gamma, tol);
        case ScenarioKind::kStructured:
            return check_scc(plant, cfg, ric, scenario.gamma, scenario.s_b, scenario.s_c, tol);
    }
    throw InconsistentInputError("unknown scenario kind");
}

}  // namespace sacd
