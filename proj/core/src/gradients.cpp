#include "sacd/gradients.hpp"

#include <Eigen/Dense>

#include "sacd/linalg.hpp"

namespace sacd {

Eigen::MatrixXd grad_b(const PlantModel& plant, const Configuration& cfg,
                       const RiccatiPair& ric) {
    const Eigen::MatrixXd a_cl = plant.a + cfg.b * ric.k_opt;
    const Eigen::MatrixXd g1 = solve_lyapunov(a_cl, plant.pi_w);
    const Eigen::MatrixXd g2 =
        solve_lyapunov(a_cl, ric.x * plant.a.transpose() + plant.a * ric.x);
    const Eigen::MatrixXd pgp = ric.p * (g1 + g2) * ric.p;
    return -2.0 * (plant.r_weight.llt().solve(cfg.b.transpose() * pgp)).transpose();
}

Eigen::MatrixXd grad_c(const PlantModel& plant, const Configuration& cfg,
                       const RiccatiPair& ric) {
    const Eigen::MatrixXd a_cl = plant.a + ric.l_opt * cfg.c;
    const Eigen::MatrixXd h1 = solve_lyapunov_transposed(a_cl, plant.q_weight);
    const Eigen::MatrixXd h2 = solve_lyapunov_transposed(
        a_cl, ric.p * plant.a + plant.a.transpose() * ric.p);
    const Eigen::MatrixXd xhx = ric.x * (h1 + h2) * ric.x;
    return -2.0 * plant.pi_v.llt().solve(cfg.c * xhx);
}

GradientPair gradient_pair(const PlantModel& plant, const Configuration& cfg,
                           const RiccatiPair& ric) {
    return GradientPair{grad_b(plant, cfg, ric), grad_c(plant, cfg, ric)};
}

Eigen::MatrixXd fd_gradient(const PlantModel& plant, const Configuration& cfg,
                            ConfigSide which, double step) {
    if (step <= 0.0) {
        throw InconsistentInputError("fd step must be positive");
    }
    cfg.check_dims(plant);
    const bool actuator = which == ConfigSide::kActuator;
    const Eigen::MatrixXd& base = actuator ? cfg.b : cfg.c;
    Eigen::MatrixXd result(base.rows(), base.cols());

    auto evaluate = [&](const Eigen::MatrixXd& probe) {
        Configuration perturbed = cfg;
        (actuator ? perturbed.b : perturbed.c) = probe;
        try {
            const RiccatiPair ric = solve_gains(plant, perturbed);
            return lqg_performance(plant, perturbed, ric);
        } catch (const Error&) {
            throw PerturbationInfeasibleError(
                "finite-difference probe lost stabilizability/detectability");
        }
    };

    Eigen::MatrixXd probe = base;
    for (Eigen::Index i = 0; i < base.rows(); ++i) {
        for (Eigen::Index j = 0; j < base.cols(); ++j) {
            probe(i, j) = base(i, j) + step;
            const double j_plus = evaluate(probe);
            probe(i, j) = base(i, j) - step;
            const double j_minus = evaluate(probe);
            probe(i, j) = base(i, j);
            result(i, j) = (j_plus - j_minus) / (2.0 * step);
        }
    }
    return result;
}

}  // namespace sacd
