#pragma once

// Runs every headline check end to end and reports measured values.

#include <cstdint>
#include <string>
#include <vector>

#include "qgame/serialization.hpp"

namespace qgame {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    Json measured;
};

struct ReproductionReport {
    std::vector<CriterionResult> criteria;
    /// Recorded but never asserted (e.g. whether the rebit search beats 1/12).
    Json findings;
    [[nodiscard]] bool all_passed() const;
};

/// Locked |det| of each Bloch-vector triple of the plus-branch qubit states.
/// The four vectors form a regular tetrahedron, |det| = 4/(3 sqrt 3).
inline constexpr double kQubitTripleAbsDet = 0.7698003589195010;

ReproductionReport reproduce_all(std::uint64_t seed);

Json to_json(const ReproductionReport& report);

}  // namespace qgame
