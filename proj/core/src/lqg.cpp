#include "sacd/lqg.hpp"

#include <Eigen/Dense>
#include <cassert>
#include <cmath>
#include <utility>

#include "sacd/linalg.hpp"

namespace sacd {

namespace {

void require_spd(const Eigen::MatrixXd& m, const char* name) {
    if (m.rows() != m.cols()) {
        throw InconsistentInputError(std::string(name) + " must be square");
    }
    if (!all_finite(m)) {
        throw InconsistentInputError(std::string(name) + " contains NaN/Inf");
    }
    if (min_symmetric_eigenvalue(m) <= 0.0) {
        throw InconsistentInputError(std::string(name) + " must be positive definite");
    }
}

}  // namespace

PlantModel::PlantModel(Eigen::MatrixXd a_in, Eigen::MatrixXd pi_w_in, Eigen::MatrixXd pi_v_in,
                       Eigen::MatrixXd q_in, Eigen::MatrixXd r_in)
    : a(std::move(a_in)),
      pi_w(std::move(pi_w_in)),
      pi_v(std::move(pi_v_in)),
      q_weight(std::move(q_in)),
      r_weight(std::move(r_in)) {
    if (a.rows() != a.cols()) {
        throw InconsistentInputError("a must be square");
    }
    if (!all_finite(a)) {
        throw InconsistentInputError("a contains NaN/Inf");
    }
    require_spd(pi_w, "pi_w");
    require_spd(pi_v, "pi_v");
    require_spd(q_weight, "q_weight");
    require_spd(r_weight, "r_weight");
    if (pi_w.rows() != a.rows() || q_weight.rows() != a.rows()) {
        throw InconsistentInputError("pi_w/q_weight dimensions must match a");
    }
}

void Configuration::check_dims(const PlantModel& plant) const {
    if (b.rows() != plant.state_dim() || b.cols() != plant.input_dim()) {
        throw InconsistentInputError("b must be n x m");
    }
    if (c.rows() != plant.output_dim() || c.cols() != plant.state_dim()) {
        throw InconsistentInputError("c must be q x n");
    }
    if (!all_finite(b) || !all_finite(c)) {
        throw InconsistentInputError("configuration contains NaN/Inf");
    }
}

bool check_stabilizable(const Eigen::Ref<const Eigen::MatrixXd>& a,
                        const Eigen::Ref<const Eigen::MatrixXd>& b) {
    return pbh_stabilizable(a, b);
}

bool check_detectable(const Eigen::Ref<const Eigen::MatrixXd>& a,
                      const Eigen::Ref<const Eigen::MatrixXd>& c) {
    return pbh_stabilizable(a.transpose(), c.transpose());
}

RiccatiPair solve_gains(const PlantModel& plant, const Configuration& cfg) {
    cfg.check_dims(plant);
    RiccatiPair ric;
    ric.p = solve_care_control(plant.a, cfg.b, plant.q_weight, plant.r_weight);
    ric.x = solve_care_filter(plant.a, cfg.c, plant.pi_w, plant.pi_v);
    ric.k_opt = -plant.r_weight.llt().solve(cfg.b.transpose() * ric.p);
    ric.l_opt = -(plant.pi_v.llt().solve(cfg.c * ric.x)).transpose();
    return ric;
}

namespace {

// Residual checks guarding against a RiccatiPair computed for a different
// configuration. Tolerance is 10x the solver bound to absorb re-evaluation
// rounding.
void validate_riccati(const PlantModel& plant, const Configuration& cfg,
                      const RiccatiPair& ric) {
    const Eigen::MatrixXd control_res =
        plant.a.transpose() * ric.p + ric.p * plant.a -
        ric.p * cfg.b * plant.r_weight.llt().solve(cfg.b.transpose() * ric.p) + plant.q_weight;
    if (control_res.norm() > 1e-7 * (1.0 + plant.q_weight.norm())) {
        throw InconsistentInputError("RiccatiPair does not solve the control CARE");
    }
    const Eigen::MatrixXd filter_res =
        plant.a * ric.x + ric.x * plant.a.transpose() -
        ric.x * cfg.c.transpose() * plant.pi_v.llt().solve(cfg.c * ric.x) + plant.pi_w;
    if (filter_res.norm() > 1e-7 * (1.0 + plant.pi_w.norm())) {
        throw InconsistentInputError("RiccatiPair does not solve the filter CARE");
    }
}

}  // namespace

double lqg_performance(const PlantModel& plant, const Configuration& cfg,
                       const RiccatiPair& ric) {
    cfg.check_dims(plant);
    validate_riccati(plant, cfg, ric);
    const Eigen::MatrixXd cx = cfg.c * ric.x;
    const double j = (ric.x * plant.q_weight).trace() +
                     (ric.p * ric.x * cfg.c.transpose() * plant.pi_v.llt().solve(cx)).trace();
#ifndef NDEBUG
    const double j_obs = lqg_performance_observer_form(plant, cfg, ric);
    assert(std::abs(j - j_obs) <= 1e-8 * (1.0 + std::abs(j)) &&
           "LQG performance forms disagree; RiccatiPair is inconsistent");
#endif
    return j;
}

double lqg_performance_observer_form(const PlantModel& plant, const Configuration& cfg,
                                     const RiccatiPair& ric) {
    cfg.check_dims(plant);
    const Eigen::MatrixXd btp = cfg.b.transpose() * ric.p;
    return (ric.p * plant.pi_w).trace() +
           (ric.x * btp.transpose() * plant.r_weight.llt().solve(btp)).trace();
}

}  // namespace sacd
