#pragma once

// Minimal-dimension state vectors from overlaps, and Bloch-sphere geometry.

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qgame/quantum_core.hpp"

namespace qgame {

enum class SignBranch { plus, minus };

std::string_view to_string(SignBranch branch);
SignBranch branch_from_string(std::string_view name);
/// +1 for plus (phi = +pi/3), -1 for minus.
inline double sign_of(SignBranch b) { return b == SignBranch::plus ? 1.0 : -1.0; }

inline constexpr double kCoplanarTol = 1e-6;

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    [[nodiscard]] double norm() const;
};

/// Reverse Gram-Schmidt. The Gram matrix is factored by eigendecomposition
/// (eigenvalues <= tol dropped), then expressed in the orthonormal basis
/// built greedily from the states in order, so the first state is (1,0,...)
/// and each new basis direction enters with a real positive coefficient.
std::vector<PureState> states_from_gram(const GramMatrix& gram, double tol = kRankTol);

struct RealAlignment {
    std::vector<PureState> states;
    /// Largest |Im| among the output amplitudes.
    double max_imag = 0.0;
};

/// Rephases the states along a spanning tree of non-negligible overlaps so
/// the tree overlaps become real and positive, then factors the rephased
/// Gram matrix. For a real-representable ensemble the output is real.
RealAlignment real_aligned_states(const GramMatrix& gram, double tol = kRankTol);

/// Table of <sigma_a|sigma_b> for the two exact single-qubit strategies.
GramMatrix overlap_table(SignBranch branch);

/// Expectations of (X, Y, Z) for a qubit state.
BlochVector bloch_vector(const PureState& state);
BlochVector bloch_vector(const DensityMatrix& state);

struct GreatCircleReport {
    struct Triple {
        std::array<std::size_t, 3> labels;
        double abs_det = 0.0;
        bool coplanar = false;
    };
    std::vector<Triple> triples;
    bool all_four_coplanar = false;
    /// Smallest singular value of the 4x3 Bloch matrix.
    double four_state_sigma_min = 0.0;
};

/// Three Bloch vectors lie on a common great circle iff their 3x3
/// determinant vanishes; all four do iff the 4x3 matrix has rank <= 2.
GreatCircleReport great_circle_test(std::span<const PureState> states, double tol = kCoplanarTol);

/// CSV with header "label,x,y,z", values printed round-trip exact.
void write_bloch_csv(std::ostream& out, std::span<const PureState> states);

}  // namespace qgame
