#pragma once

// JSON forms of specs and reports. Reals are written with nlohmann's
// shortest round-trip formatting, i.e. full double precision.

#include <filesystem>
#include <json.hpp>

#include "qgame/bargmann.hpp"
#include "qgame/embedding.hpp"
#include "qgame/game.hpp"
#include "qgame/optimizer.hpp"

namespace qgame {

using Json = nlohmann::ordered_json;

Json complex_to_json(Complex z);
Json matrix_to_json(const RMatrix& m);
Json matrix_to_json(const CMatrix& m);
Json vector_to_json(const RVector& v);

Json to_json(const GameSpec& spec);
/// Throws std::invalid_argument on missing fields or an invalid table.
GameSpec game_spec_from_json(const Json& j);
GameSpec load_game_spec(const std::filesystem::path& path);

Json to_json(const RealizedChannel& channel);
Json to_json(const BargmannInvariant& inv);
Json to_json(const WitnessReport& report);
Json to_json(const VerifyReport& report);
Json to_json(const InfeasibilityReport& report);
Json to_json(const SimulationResult& result);
Json to_json(const GreatCircleReport& report);
Json to_json(const PureState& state);
Json to_json(const OptimizerConfig& config);
/// Per-restart parameter vectors and traces only when verbose.
Json to_json(const OptimizationResult& result, bool verbose);

}  // namespace qgame
