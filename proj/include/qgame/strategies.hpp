#pragma once

// Closed-form strategies for the default four-symbol game.

#include <string>
#include <string_view>
#include <vector>

#include "qgame/embedding.hpp"
#include "qgame/game.hpp"

namespace qgame {

struct DilationIsometry {
    /// 4x2, columns orthonormal.
    CMatrix matrix;
};

enum class RebitVariant { original, symmetrized };

std::string_view to_string(RebitVariant variant);
RebitVariant variant_from_string(std::string_view name);

/// The four message states in the 4-dimensional dilated space,
/// amplitude sqrt(P(y|x)) on |y> with phases fixed by phi = +-pi/3.
std::vector<PureState> dilated_states(SignBranch branch);

/// Dilated states measured in the computational basis, no post-processing.
Strategy dilated_strategy(SignBranch branch);

/// Qubit embedding of the dilated states (same overlaps).
std::vector<PureState> qubit_states(SignBranch branch);

/// V with V|sigma_x> = e^{i theta_x}|sigma_bar_x>, built by matching the
/// Gram-Schmidt frames of {sigma_0, sigma_1} in both spaces. Phases are
/// fixed so that <sigma_bar_0|V|sigma_0> is real positive.
/// Throws std::runtime_error if the two ensembles are not unitarily related.
DilationIsometry dilation_isometry(SignBranch branch);

/// Qubit states decoded by M_y = V^dag |y><y| V.
Strategy qubit_strategy(SignBranch branch);

/// No communication: a single 1-dimensional message, Bob samples P(Y).
Strategy baseline_d0();

/// The three real dilated states (dim 3); the fourth input reuses the third.
std::vector<PureState> rebit_trio_states();
/// Same four messages as real 2-dimensional vectors.
std::vector<PureState> rebit_embedded_states();

/// R(y|m) = 2/3 delta_ym + 1/3 delta_y3; the symmetrized variant then
/// sends 2 and 3 to either of {2,3} with probability 1/2.
RMatrix rebit_post_processing(RebitVariant variant);

/// Measures the trio in {|0>,|1>,|2>} and applies rebit_post_processing.
Strategy rebit_trio_strategy(RebitVariant variant);
/// The same strategy on the 2-dimensional real embedding, with the measurement
/// pulled back to the rebit.
Strategy rebit_embedded_strategy(RebitVariant variant);

/// "qubit+", "qubit-", "dilated+", "dilated-", "baseline0",
/// "rebit-original", "rebit-symmetrized".
const std::vector<std::string>& catalog_ids();
bool is_catalog_id(std::string_view id);
/// Throws std::invalid_argument for unknown ids.
Strategy catalog_strategy(std::string_view id);

}  // namespace qgame
