#pragma once

// Finite-dimensional state and measurement primitives.
//
// Every value type here validates on construction and is immutable
// afterwards, so instances can be shared freely between threads.

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qgame {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Structural checks (Hermiticity, PSD, trace, normalization).
inline constexpr double kValidationTol = 1e-9;
/// Eigenvalues of the support form above this count toward span dimension.
inline constexpr double kRankTol = 1e-8;

enum class TheoryTag { classical, real, complex };

std::string_view to_string(TheoryTag tag);
TheoryTag theory_from_string(std::string_view name);

class PureState {
public:
    /// Throws std::invalid_argument unless | ||amplitudes|| - 1 | <= tol.
    explicit PureState(CVector amplitudes, double tol = kValidationTol);

    /// Rescales to unit norm first; throws on a zero vector.
    static PureState normalized(CVector amplitudes);

    [[nodiscard]] Eigen::Index dim() const { return amplitudes_.size(); }
    [[nodiscard]] const CVector& amplitudes() const { return amplitudes_; }
    [[nodiscard]] Complex operator[](Eigen::Index k) const { return amplitudes_(k); }

    /// Multiplies by a unit-modulus scalar.
    [[nodiscard]] PureState with_phase(double angle) const;

private:
    CVector amplitudes_;
};

class DensityMatrix {
public:
    /// Validates Hermiticity, trace and PSD at tol. Eigenvalues in
    /// [-tol, 0) are accepted as rounding; anything lower throws.
    explicit DensityMatrix(CMatrix entries, double tol = kValidationTol);
    explicit DensityMatrix(const PureState& state);

    /// For callers that guarantee validity by construction (optimizer decode).
    static DensityMatrix trusted(CMatrix entries);

    [[nodiscard]] Eigen::Index dim() const { return entries_.rows(); }
    [[nodiscard]] const CMatrix& matrix() const { return entries_; }

private:
    struct TrustedTag {};
    DensityMatrix(CMatrix entries, TrustedTag) : entries_(std::move(entries)) {}
    CMatrix entries_;
};

class Povm {
public:
    /// Labels default to 0..n-1. Each element must be Hermitian PSD and
    /// the elements must sum to the identity within tol.
    explicit Povm(std::vector<CMatrix> elements, double tol = kValidationTol);
    Povm(std::vector<CMatrix> elements, std::vector<int> labels, double tol = kValidationTol);

    static Povm trusted(std::vector<CMatrix> elements);
    /// Rank-one projectors onto the computational basis of `dim`.
    static Povm computational(Eigen::Index dim);

    [[nodiscard]] Eigen::Index dim() const { return dim_; }
    [[nodiscard]] std::size_t size() const { return elements_.size(); }
    [[nodiscard]] const std::vector<CMatrix>& elements() const { return elements_; }
    [[nodiscard]] const std::vector<int>& labels() const { return labels_; }

private:
    Povm() = default;
    Eigen::Index dim_ = 0;
    std::vector<CMatrix> elements_;
    std::vector<int> labels_;
};

struct GramMatrix {
    CMatrix entries;
    [[nodiscard]] Eigen::Index n() const { return entries.rows(); }
};

// Structural predicates.
bool is_hermitian(const CMatrix& m, double tol = kValidationTol);
/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const CMatrix& m);
bool is_psd(const CMatrix& m, double tol = kValidationTol);
bool is_diagonal(const CMatrix& m, double tol = kValidationTol);
bool is_real(const CMatrix& m, double tol = kValidationTol);
/// classical => diagonal; real => no imaginary parts; complex => anything.
bool satisfies_theory(const CMatrix& m, TheoryTag tag, double tol = kValidationTol);

/// <a|b>, conjugate-linear in the first argument.
Complex inner_product(const PureState& a, const PureState& b);

/// Tr(rho M_m) for each outcome m.
RVector born_probabilities(const DensityMatrix& state, const Povm& measurement);

GramMatrix gram_matrix(std::span<const PureState> states);

/// log2 of the dimension of the subspace the states are supported on.
double communication_cost(std::span<const DensityMatrix> states, double tol = kRankTol);

/// Tr(rho^2).
double purity(const DensityMatrix& state);

/// Haar-distributed unitary (QR of a complex Ginibre matrix with the
/// R-diagonal phases divided out). Deterministic for a fixed seed.
CMatrix random_unitary(Eigen::Index dim, std::uint64_t seed);

DensityMatrix rotate(const DensityMatrix& state, const CMatrix& unitary);
PureState rotate(const PureState& state, const CMatrix& unitary);

std::vector<DensityMatrix> to_density(std::span<const PureState> states);

}  // namespace qgame
