#include "qgame/serialization.hpp"

#include <fstream>
#include <stdexcept>

namespace qgame {

Json complex_to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json matrix_to_json(const RMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json matrix_to_json(const CMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json vector_to_json(const RVector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Json to_json(const GameSpec& spec) {
    Json j{{"inputs", spec.inputs}, {"outputs", spec.outputs}, {"target", matrix_to_json(spec.target)}};
    if (!spec.input_weights.empty()) j["input_weights"] = spec.input_weights;
    return j;
}

GameSpec game_spec_from_json(const Json& j) {
    GameSpec spec;
    try {
        spec.inputs = j.at("inputs").get<std::vector<int>>();
        spec.outputs = j.at("outputs").get<std::vector<int>>();
        const auto rows = j.at("target").get<std::vector<std::vector<double>>>();
        if (rows.size() != spec.inputs.size()) throw std::invalid_argument("GameSpec: target row count mismatch");
        spec.target.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(spec.outputs.size()));
        for (std::size_t x = 0; x < rows.size(); ++x) {
            if (rows[x].size() != spec.outputs.size())
                throw std::invalid_argument("GameSpec: target column count mismatch");
            for (std::size_t y = 0; y < rows[x].size(); ++y)
                spec.target(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = rows[x][y];
        }
        if (j.contains("input_weights")) spec.input_weights = j.at("input_weights").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("GameSpec: malformed JSON: ") + e.what());
    }
    spec.validate();
    return spec;
}

GameSpec load_game_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spec file: " + path.string());
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("spec file is not valid JSON: " + std::string(e.what()));
    }
    return game_spec_from_json(j);
}

Json to_json(const RealizedChannel& channel) { return Json{{"table", matrix_to_json(channel.table)}}; }

Json to_json(const BargmannInvariant& inv) {
    return Json{{"index", inv.index.labels()}, {"re", inv.value.real()}, {"im", inv.value.imag()}};
}

Json to_json(const WitnessReport& report) {
    Json j{{"witnessed", report.witnessed}, {"invariants_checked", report.invariants_checked}};
    if (report.witness) {
        j["index"] = report.witness->index.labels();
        j["value_re"] = report.witness->value.real();
        j["value_imag"] = report.witness->value.imag();
    } else {
        j["index"] = nullptr;
    }
    return j;
}

Json to_json(const VerifyReport& report) {
    return Json{{"exact", report.exact},
                {"d", report.d},
                {"cost", report.cost},
                {"theory_valid", report.theory_valid},
                {"min_purity", report.min_purity},
                {"realized", matrix_to_json(report.realized.table)}};
}

Json to_json(const InfeasibilityReport& report) {
    return Json{{"target_rank", report.target_rank},
                {"feasible", report.feasible},
                {"best_deterministic_d", report.best_deterministic_d},
                {"best_encoder", report.best_encoder},
                {"best_decoder", matrix_to_json(report.best_decoder)}};
}

Json to_json(const SimulationResult& result) {
    return Json{{"rounds_per_input", result.rounds_per_input},
                {"counts", result.counts},
                {"empirical", matrix_to_json(result.empirical.table)},
                {"max_tv_deviation", result.max_tv_deviation}};
}

Json to_json(const GreatCircleReport& report) {
    Json triples = Json::array();
    for (const auto& t : report.triples)
        triples.push_back(Json{{"labels", t.labels}, {"abs_det", t.abs_det}, {"coplanar", t.coplanar}});
    return Json{{"triples", triples},
                {"all_four_coplanar", report.all_four_coplanar},
                {"four_state_sigma_min", report.four_state_sigma_min}};
}

Json to_json(const PureState& state) {
    Json amps = Json::array();
    for (Eigen::Index k = 0; k < state.dim(); ++k) amps.push_back(complex_to_json(state[k]));
    return amps;
}

Json to_json(const OptimizerConfig& config) {
    Json j{{"restarts", config.restarts},
           {"seed", config.seed},
           {"max_iterations", config.max_iterations},
           {"initial_step", config.initial_step},
           {"fd_step", config.fd_step},
           {"shrink", config.shrink},
           {"convergence_tol", config.convergence_tol},
           {"method", std::string(to_string(config.method))},
           {"start_scale", config.start_scale}};
    if (config.initial_params) j["initial_params"] = *config.initial_params;
    return j;
}

Json to_json(const OptimizationResult& result, bool verbose) {
    Json restarts = Json::array();
    for (const auto& r : result.per_restart) {
        Json item{{"final_d", r.final_d}, {"iterations", r.iterations}, {"evaluations", r.evaluations}};
        if (verbose) {
            item["params"] = r.params;
            item["trace"] = r.trace;
        }
        restarts.push_back(std::move(item));
    }
    return Json{{"best_d", result.best_d},
                {"best_restart", result.best_restart},
                {"best_params", result.best_params},
                {"evaluations", result.evaluations},
                {"per_restart", restarts}};
}

}  // namespace qgame
