#pragma once

// Randomised invariant checks shared by the reproduction report.

#include <cstdint>
#include <string>
#include <vector>

#include "qgame/quantum_core.hpp"

namespace qgame {

struct PropertyResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    /// Largest observed violation measure (0 for pass/fail style checks).
    double worst = 0.0;
    double tolerance = 0.0;
    [[nodiscard]] bool passed() const { return failures == 0; }
};

/// Random density matrix of the given rank (rank 1 is pure).
DensityMatrix random_density(Eigen::Index dim, Eigen::Index rank, std::uint64_t seed);
PureState random_pure(Eigen::Index dim, std::uint64_t seed);
/// Random real density matrices as above.
DensityMatrix random_real_density(Eigen::Index dim, Eigen::Index rank, std::uint64_t seed);

PropertyResult check_unitary_invariance(std::uint64_t seed, std::size_t cases = 200);
PropertyResult check_cyclic_invariance(std::uint64_t seed, std::size_t cases = 200);
PropertyResult check_phase_invariance(std::uint64_t seed, std::size_t cases = 200);
PropertyResult check_gram_round_trip(std::uint64_t seed, std::size_t cases = 100);
PropertyResult check_validation_fuzz(std::uint64_t seed, std::size_t cases = 500);
PropertyResult check_realized_linearity(std::uint64_t seed, std::size_t cases = 100);
/// Real ensembles under a random complex unitary never witness imaginarity.
PropertyResult check_rotated_real_ensembles(std::uint64_t seed, std::size_t cases = 100);

std::vector<PropertyResult> run_property_suites(std::uint64_t seed);

}  // namespace qgame
