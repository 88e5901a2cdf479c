#include "sacd/rea1.hpp"

namespace sacd::rea1 {

Eigen::MatrixXd system_matrix() {
    Eigen::MatrixXd a(4, 4);
    a << 1.38, -0.2077, 6.715, -5.676,
        -0.5814, -4.29, 0.0, 0.675,
        1.067, 4.273, -6.654, 5.893,
        0.048, 4.273, 1.343, -2.104;
    return a;
}

PlantModel plant() {
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(4, 4);
    return PlantModel(system_matrix(), 0.01 * eye, 0.1 * eye, eye, 0.1 * eye);
}

Configuration initial_config() {
    Configuration cfg;
    cfg.b.resize(4, 4);
    cfg.b << 0.6281, 0.4653, 1.3792, 0.7538,
        0.7641, -1.0122, -0.4788, -0.7347,
        -0.6719, -1.1430, 0.2558, 0.0179,
        0.5391, -0.0049, -0.8286, 0.5972;
    cfg.c.resize(4, 4);
    cfg.c << 1.1727, -1.0521, 0.9429, -0.9102,
        1.3779, -0.7275, -0.7694, -0.7467,
        0.1416, 1.0222, 1.2878, 0.3481,
        -1.0841, -0.7372, -0.4500, -0.0801;
    return cfg;
}

Eigen::MatrixXd actuator_mask() {
    Eigen::MatrixXd s(4, 4);
    s << 1, 0, 0, 1,
        0, 1, 0, 0,
        0, 0, 1, 0,
        1, 0, 0, 0;
    return s;
}

Eigen::MatrixXd sensor_mask() {
    Eigen::MatrixXd s(4, 4);
    s << 0, 1, 0, 0,
        0, 0, 0, 1,
        1, 0, 0, 0,
        0, 0, 1, 0;
    return s;
}

AdmmParams benchmark_params() {
    AdmmParams params;
    params.rho = 1.0;
    params.alpha = 0.5;
    params.beta = 0.5;
    params.eps_pri = 1e-5;
    params.eps_dual = 1e-5;
    params.eps_main = 1e-5;
    return params;
}

ScenarioSpec scenario(ScenarioKind kind, double gamma) {
    ScenarioSpec spec;
    spec.kind = kind;
    spec.gamma = gamma;
    if (kind == ScenarioKind::kStructured) {
        spec.s_b = actuator_mask();
        spec.s_c = sensor_mask();
    }
    return spec;
}

}  // namespace sacd::rea1
