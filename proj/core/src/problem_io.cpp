#include "sacd/problem_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace sacd {

using nlohmann::json;

namespace {

const json& require_field(const json& node, const std::string& path, const char* key) {
    const auto it = node.find(key);
    if (it == node.end()) {
        throw ParseError("missing field: " + (path.empty() ? key : path + "." + key));
    }
    return *it;
}

Eigen::MatrixXd parse_matrix(const json& node, const std::string& path) {
    if (!node.is_array() || node.empty() || !node[0].is_array()) {
        throw ParseError(path + ": expected a nested array of rows");
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(node.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(node[0].size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = node[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw ParseError(path + ": ragged rows");
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
            const json& cell = row[static_cast<std::size_t>(j)];
            if (!cell.is_number()) {
                throw ParseError(path + ": non-numeric entry");
            }
            m(i, j) = cell.get<double>();
        }
    }
    if (!m.allFinite()) {
        throw ParseError(path + ": entries must be finite");
    }
    return m;
}

InitSpec parse_init(const json& node, const std::string& path) {
    InitSpec spec;
    if (node.is_string()) {
        const std::string text = node.get<std::string>();
        unsigned long seed = 0;
        if (std::sscanf(text.c_str(), "random(%lu)", &seed) != 1) {
            throw ParseError(path + ": expected a matrix or \"random(<seed>)\"");
        }
        spec.random = true;
        spec.seed = seed;
        return spec;
    }
    spec.value = parse_matrix(node, path);
    return spec;
}

double parse_positive(const json& node, const std::string& path) {
    if (!node.is_number()) {
        throw ParseError(path + ": expected a number");
    }
    const double v = node.get<double>();
    if (!(v > 0.0)) {
        throw ParseError(path + ": must be positive");
    }
    return v;
}

ScenarioKind parse_kind(const json& node, const std::string& path) {
    if (!node.is_string()) {
        throw ParseError(path + ": expected \"spc\", \"lpc\" or \"scc\"");
    }
    const std::string text = node.get<std::string>();
    if (text == "spc") {
        return ScenarioKind::kSparsity;
    }
    if (text == "lpc") {
        return ScenarioKind::kLowRank;
    }
    if (text == "scc") {
        return ScenarioKind::kStructured;
    }
    throw ParseError(path + ": unknown scenario kind \"" + text + "\"");
}

AdmmParams parse_params(const json& doc) {
    AdmmParams params;
    const auto it = doc.find("params");
    if (it == doc.end()) {
        return params;
    }
    const json& node = *it;
    auto number = [&](const char* key, double fallback) {
        const auto f = node.find(key);
        return f == node.end() ? fallback : parse_positive(*f, std::string("params.") + key);
    };
    params.rho = number("rho", params.rho);
    params.alpha = number("alpha", params.alpha);
    params.beta = number("beta", params.beta);
    params.eps_pri = number("eps_pri", params.eps_pri);
    params.eps_dual = number("eps_dual", params.eps_dual);
    params.eps_main = number("eps_main", params.eps_main);
    auto integer = [&](const char* key, int fallback) {
        const auto f = node.find(key);
        if (f == node.end()) {
            return fallback;
        }
        if (!f->is_number_integer() || f->get<int>() < 1) {
            throw ParseError(std::string("params.") + key + ": expected a positive integer");
        }
        return f->get<int>();
    };
    params.max_inner_iters = integer("max_inner_iters", params.max_inner_iters);
    params.max_admm_iters = integer("max_admm_iters", params.max_admm_iters);
    params.max_outer_iters = integer("max_outer_iters", params.max_outer_iters);
    try {
        params.validate();
    } catch (const Error& e) {
        throw ParseError(std::string("params: ") + e.what());
    }
    return params;
}

ProblemFile parse_document(const json& doc) {
    const json& plant_node = require_field(doc, "", "plant");
    const Eigen::MatrixXd a = parse_matrix(require_field(plant_node, "plant", "a"), "plant.a");
    const Eigen::MatrixXd pi_w =
        parse_matrix(require_field(plant_node, "plant", "pi_w"), "plant.pi_w");
    const Eigen::MatrixXd pi_v =
        parse_matrix(require_field(plant_node, "plant", "pi_v"), "plant.pi_v");
    const Eigen::MatrixXd q_weight =
        parse_matrix(require_field(plant_node, "plant", "q_weight"), "plant.q_weight");
    const Eigen::MatrixXd r_weight =
        parse_matrix(require_field(plant_node, "plant", "r_weight"), "plant.r_weight");

    PlantModel plant = [&] {
        try {
            return PlantModel(a, pi_w, pi_v, q_weight, r_weight);
        } catch (const Error& e) {
            throw ParseError(std::string("plant: ") + e.what());
        }
    }();

    InitSpec init_b = parse_init(require_field(doc, "", "init_b"), "init_b");
    InitSpec init_c = parse_init(require_field(doc, "", "init_c"), "init_c");

    const json& scenario_node = require_field(doc, "", "scenario");
    ScenarioSpec scenario;
    scenario.kind = parse_kind(require_field(scenario_node, "scenario", "kind"),
                               "scenario.kind");
    scenario.gamma =
        parse_positive(require_field(scenario_node, "scenario", "gamma"), "scenario.gamma");
    if (scenario.kind == ScenarioKind::kStructured) {
        scenario.s_b =
            parse_matrix(require_field(scenario_node, "scenario", "s_b"), "scenario.s_b");
        scenario.s_c =
            parse_matrix(require_field(scenario_node, "scenario", "s_c"), "scenario.s_c");
    }
    try {
        scenario.validate(plant.state_dim(), plant.input_dim(), plant.output_dim());
    } catch (const Error& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }

    std::vector<double> sweep;
    if (const auto it = doc.find("sweep"); it != doc.end()) {
        if (!it->is_array() || it->empty()) {
            throw ParseError("sweep: expected a nonempty array of gammas");
        }
        double prev = 0.0;
        for (std::size_t i = 0; i < it->size(); ++i) {
            const double g = parse_positive((*it)[i], "sweep[" + std::to_string(i) + "]");
            if (g <= prev) {
                throw ParseError("sweep: gammas must be strictly ascending");
            }
            sweep.push_back(g);
            prev = g;
        }
    }

    return ProblemFile{std::move(plant), std::move(init_b), std::move(init_c),
                       std::move(scenario), parse_params(doc), std::move(sweep)};
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

Eigen::MatrixXd draw_matrix(std::mt19937& gen, Eigen::Index rows, Eigen::Index cols) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = dist(gen);
        }
    }
    return m;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open output file: " + path);
    }
    return out;
}

}  // namespace

ProblemFile parse_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open problem file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_problem_string(buffer.str());
}

ProblemFile parse_problem_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return parse_document(doc);
}

Configuration resolve_initial_config(const ProblemFile& problem,
                                     std::optional<unsigned long> seed_override) {
    const PlantModel& plant = problem.plant;
    const bool structured = problem.scenario.kind == ScenarioKind::kStructured;
    constexpr int kMaxDraws = 1000;

    auto resolve = [&](const InitSpec& spec, ConfigSide side) -> Eigen::MatrixXd {
        const Eigen::Index rows =
            side == ConfigSide::kActuator ? plant.state_dim() : plant.output_dim();
        const Eigen::Index cols =
            side == ConfigSide::kActuator ? plant.input_dim() : plant.state_dim();
        auto feasible = [&](const Eigen::MatrixXd& m) {
            return side == ConfigSide::kActuator ? check_stabilizable(plant.a, m)
                                                 : check_detectable(plant.a, m);
        };
        if (!spec.random) {
            if (spec.value.rows() != rows || spec.value.cols() != cols) {
                throw ParseError(side == ConfigSide::kActuator ? "init_b: wrong dimensions"
                                                               : "init_c: wrong dimensions");
            }
            if (!feasible(spec.value)) {
                throw InfeasibleInitError(side == ConfigSide::kActuator
                                              ? "(a, init_b) is not stabilizable"
                                              : "(a, init_c) is not detectable");
            }
            return spec.value;
        }
        std::mt19937 gen(
            static_cast<std::mt19937::result_type>(seed_override.value_or(spec.seed)));
        for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
            Eigen::MatrixXd candidate = draw_matrix(gen, rows, cols);
            if (structured) {
                const Eigen::MatrixXd& mask = side == ConfigSide::kActuator
                                                  ? problem.scenario.s_b
                                                  : problem.scenario.s_c;
                candidate = candidate.array() * (1.0 - mask.array());
            }
            if (feasible(candidate)) {
                return candidate;
            }
        }
        throw InfeasibleInitError("random initialization failed after " +
                                  std::to_string(kMaxDraws) + " draws");
    };

    Configuration cfg;
    cfg.b = resolve(problem.init_b, ConfigSide::kActuator);
    cfg.c = resolve(problem.init_c, ConfigSide::kSensor);
    return cfg;
}

namespace {

json stationarity_to_json(const StationarityReport& report) {
    json details = json::array();
    for (const ConditionResidual& r : report.details) {
        details.push_back({{"name", r.name}, {"value", r.value}});
    }
    return {{"scenario", to_string(report.scenario)},
            {"passed", report.passed},
            {"tol", report.tol},
            {"max_violation_b", report.max_violation_b},
            {"max_violation_c", report.max_violation_c},
            {"details", std::move(details)}};
}

}  // namespace

void write_run_report(const std::string& path, const RunReport& report,
                      const ScenarioSpec& scenario) {
    const OuterTraceRow& last = report.outer_trace.back();
    json doc = {{"scenario", to_string(scenario.kind)},
                {"gamma", scenario.gamma},
                {"converged", report.converged},
                {"outer_iterations", report.outer_iterations},
                {"wall_time_seconds", report.wall_time_seconds},
                {"j_total", last.j_total},
                {"j_lqg", last.j_lqg},
                {"j_sac_relaxed", last.j_sac_relaxed},
                {"j_sac_raw", last.j_sac_raw},
                {"final_b", matrix_to_json(report.final_cfg.b)},
                {"final_c", matrix_to_json(report.final_cfg.c)},
                {"stationarity", stationarity_to_json(report.stationarity)}};
    open_output(path) << doc.dump(2) << '\n';
}

void write_convergence_trace(const std::string& path, const RunReport& report) {
    std::ofstream out = open_output(path);
    out << "iteration,j_total,j_lqg,j_sac_relaxed,j_sac_raw\n";
    for (const OuterTraceRow& row : report.outer_trace) {
        out << row.iteration << ',' << format9(row.j_total) << ',' << format9(row.j_lqg)
            << ',' << format9(row.j_sac_relaxed) << ',' << format9(row.j_sac_raw) << '\n';
    }
}

void write_stationarity_report(const std::string& path, const StationarityReport& report) {
    open_output(path) << stationarity_to_json(report).dump(2) << '\n';
}

void write_final_config(const std::string& path, const ProblemFile& problem,
                        const Configuration& cfg) {
    json doc = {{"plant",
                 {{"a", matrix_to_json(problem.plant.a)},
                  {"pi_w", matrix_to_json(problem.plant.pi_w)},
                  {"pi_v", matrix_to_json(problem.plant.pi_v)},
                  {"q_weight", matrix_to_json(problem.plant.q_weight)},
                  {"r_weight", matrix_to_json(problem.plant.r_weight)}}},
                {"init_b", matrix_to_json(cfg.b)},
                {"init_c", matrix_to_json(cfg.c)},
                {"scenario",
                 {{"kind", to_string(problem.scenario.kind)},
                  {"gamma", problem.scenario.gamma}}},
                {"params",
                 {{"rho", problem.params.rho},
                  {"alpha", problem.params.alpha},
                  {"beta", problem.params.beta},
                  {"eps_pri", problem.params.eps_pri},
                  {"eps_dual", problem.params.eps_dual},
                  {"eps_main", problem.params.eps_main},
                  {"max_inner_iters", problem.params.max_inner_iters},
                  {"max_admm_iters", problem.params.max_admm_iters},
                  {"max_outer_iters", problem.params.max_outer_iters}}}};
    if (problem.scenario.kind == ScenarioKind::kStructured) {
        doc["scenario"]["s_b"] = matrix_to_json(problem.scenario.s_b);
        doc["scenario"]["s_c"] = matrix_to_json(problem.scenario.s_c);
    }
    open_output(path) << doc.dump(2) << '\n';
}

void write_sweep_table(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out = open_output(path);
    out << "gamma,j_lqg,j_sac_relaxed,j_sac_raw,outer_iters,stationarity_passed,status\n";
    for (const SweepRow& row : rows) {
        out << format9(row.gamma) << ',' << format9(row.j_lqg) << ','
            << format9(row.j_sac_relaxed) << ',' << format9(row.j_sac_raw) << ','
            << row.outer_iters << ',' << (row.stationarity_passed ? "true" : "false") << ','
            << row.status << '\n';
    }
}

}  // namespace sacd
