#pragma once

// The referee game: Charlie draws x, Alice sends rho_x, Bob measures and
// post-processes into y. A Strategy carries no round index or memory, so
// every round is an independent instance and no randomness is shared.

#include <cstdint>
#include <vector>

#include "qgame/quantum_core.hpp"

namespace qgame {

inline constexpr double kExactTol = 1e-9;
inline constexpr double kStochasticTol = 1e-12;

struct GameSpec {
    std::vector<int> inputs;
    std::vector<int> outputs;
    /// target(x, y) = P(y|x), rows indexed like `inputs`, columns like `outputs`.
    RMatrix target;
    /// Distribution over inputs used to average distances; uniform if empty.
    std::vector<double> input_weights;

    /// X = Y = {0,1,2,3}, P(y|x) = (1 - delta_xy) / 3.
    static GameSpec default_instance();

    /// Throws std::invalid_argument on shape or stochasticity violations.
    void validate() const;
    [[nodiscard]] double weight(std::size_t x) const;
};

struct Strategy {
    TheoryTag theory = TheoryTag::complex;
    std::vector<DensityMatrix> encoder;
    Povm measurement;
    /// post_processing(m, y) = R(y|m); each row sums to one.
    RMatrix post_processing;

    /// Shapes, stochasticity and the TheoryTag predicates.
    void validate(double tol = kValidationTol) const;
    [[nodiscard]] bool theory_valid(double tol = kValidationTol) const;
    [[nodiscard]] std::size_t input_count() const { return encoder.size(); }
    [[nodiscard]] Eigen::Index output_count() const { return post_processing.cols(); }
};

struct RealizedChannel {
    /// table(x, y) = realised P~(y|x).
    RMatrix table;
};

RealizedChannel realized_distribution(const Strategy& strategy);

/// sum_m R(y|m) M_m for each y.
std::vector<CMatrix> effective_povm(const Strategy& strategy);

/// Input-weighted mean of the per-row total-variation distance.
double average_trace_distance(const GameSpec& spec, const RealizedChannel& realized);

/// P~(y = x | x) for each input, matched by label.
RVector forbidden_event_rate(const GameSpec& spec, const Strategy& strategy);

struct SimulationResult {
    RealizedChannel empirical;
    std::vector<std::vector<std::uint64_t>> counts;
    std::uint64_t rounds_per_input = 0;
    /// max over x of TV(empirical row, exact row).
    double max_tv_deviation = 0.0;
};

/// Samples outcome m from the Born rule and then y from R(.|m), round by
/// round. Rounds are split into fixed-size shards, each with its own stream
/// derived from (seed, input, shard), so the result does not depend on how
/// shards are scheduled.
SimulationResult simulate_rounds(const Strategy& strategy, std::uint64_t rounds_per_input, std::uint64_t seed,
                                 unsigned workers = 0);

struct VerifyReport {
    bool exact = false;
    double d = 0.0;
    double cost = 0.0;
    bool theory_valid = false;
    double min_purity = 0.0;
    RealizedChannel realized;
};

VerifyReport verify_strategy(const GameSpec& spec, const Strategy& strategy, double tol = kExactTol);

struct InfeasibilityReport {
    int target_rank = 0;
    bool feasible = false;
    double best_deterministic_d = 0.0;
    /// Encoder x -> w achieving best_deterministic_d.
    std::vector<int> best_encoder;
    /// Matching decoder rows R(.|w), w = 0, 1.
    RMatrix best_decoder;
};

/// A bit strategy realises R Q, which has rank <= 2; a target of larger
/// rank has no exact bit strategy. Also scans every deterministic encoder
/// x -> {0,1} and solves each decoder row exactly.
InfeasibilityReport classical_bit_exact_infeasibility(const GameSpec& spec);

/// Exact minimiser of sum_{x in group} w_x * TV(P(.|x), r) over
/// distributions r. Returns (cost, r).
std::pair<double, RVector> best_decoder_row(const GameSpec& spec, const std::vector<std::size_t>& group);

/// Numerical rank with threshold rel_tol * largest singular value.
int numerical_rank(const RMatrix& m, double rel_tol = 1e-10);

}  // namespace qgame
