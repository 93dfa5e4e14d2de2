#pragma once

// Multistart local search over strategy classes, minimising the average
// trace distance to a target channel.
//
// Every Parameterization maps an unconstrained real vector onto a valid
// strategy of its class. POVMs come from the congruence construction
//   C_y = L_y L_y^dag,  S = sum_y C_y,  M_y = S^{-1/2} C_y S^{-1/2},
// which sums to the identity for any lower-triangular factors L_y, so
// the objective is exactly d with no penalty terms.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgame/game.hpp"

namespace qgame {

struct Parameterization {
    std::string name;
    TheoryTag theory = TheoryTag::complex;
    Eigen::Index message_dim = 2;
    bool allow_mixed_states = false;
    std::size_t param_count = 0;
    std::function<Strategy(std::span<const double>)> decode;
};

/// Four real 2-dim messages (pure: one angle each; mixed: radius and angle
/// in the real Bloch disk) and a 4-outcome real POVM.
Parameterization rebit_parameterization(bool allow_mixed = true);
/// Four pure qubit messages (two Bloch angles each) and a 4-outcome POVM.
Parameterization qubit_parameterization();
/// Q(w|x) and R(y|w) as column/row-normalised squares.
Parameterization classical_bit_parameterization();

/// POVM from lower-triangular factors, `dim*(dim+1)/2` (real) or
/// `dim*(dim+1)` (complex, interleaved re/im) parameters per outcome.
std::vector<CMatrix> congruence_povm(std::span<const double> params, Eigen::Index dim, std::size_t outcomes,
                                     bool complex_factors);

/// Lower-triangular L with L L^dag = m for Hermitian PSD m (rank-deficient allowed).
CMatrix psd_lower_factor(const CMatrix& m);

/// Parameters at which the parameterization decodes to `strategy`
/// (2-dim pure encoder, identity post-processing collapsed into the POVM).
std::vector<double> rebit_parameters(const Strategy& strategy, bool allow_mixed = true);
std::vector<double> qubit_parameters(const Strategy& strategy);

enum class SearchMethod { finite_difference_descent, pattern_search };

std::string_view to_string(SearchMethod method);

struct OptimizerConfig {
    std::size_t restarts = 20;
    std::uint64_t seed = 0;
    std::size_t max_iterations = 5000;
    /// Initial move length for line search and pattern polls.
    double initial_step = 0.5;
    /// Central finite-difference width.
    double fd_step = 1e-5;
    double shrink = 0.5;
    /// Stop once the step length falls below this.
    double convergence_tol = 1e-9;
    /// Descent runs first and hands over to pattern search when it stalls.
    SearchMethod method = SearchMethod::finite_difference_descent;
    /// Starting point of restart 0 (others are random).
    std::optional<std::vector<double>> initial_params;
    /// Scale of random starting coordinates, uniform in [-scale, scale].
    double start_scale = 3.141592653589793;
    /// Keep per-iteration objective traces.
    bool record_traces = false;
    /// 0 = hardware concurrency.
    unsigned workers = 0;

    void validate() const;
};

struct RestartResult {
    double final_d = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    std::vector<double> params;
    /// Objective after every iteration (when recorded).
    std::vector<double> trace;
};

struct OptimizationResult {
    double best_d = 0.0;
    std::vector<double> best_params;
    std::size_t best_restart = 0;
    std::vector<RestartResult> per_restart;
    std::size_t evaluations = 0;
};

/// d(spec, realized_distribution(decode(params))); throws std::runtime_error
/// if the value is not finite.
double objective(const Parameterization& p, const GameSpec& spec, std::span<const double> params);

OptimizationResult minimize(const Parameterization& p, const GameSpec& spec, const OptimizerConfig& config);

}  // namespace qgame
