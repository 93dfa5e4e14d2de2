#pragma once

// Bargmann invariants: traces of ordered products of ensemble states.
// They are basis independent, so a single non-real value rules out any
// basis in which every state of the ensemble is real.

#include <compare>
#include <optional>
#include <span>
#include <vector>

#include "qgame/quantum_core.hpp"

namespace qgame {

inline constexpr double kWitnessTol = 1e-8;

/// Cyclic label tuple, always held as its lexicographically smallest rotation.
/// Reversed tuples are distinct classes (their values are conjugate).
class InvariantIndex {
public:
    explicit InvariantIndex(std::vector<std::size_t> labels);

    [[nodiscard]] const std::vector<std::size_t>& labels() const { return labels_; }
    [[nodiscard]] std::size_t order() const { return labels_.size(); }
    [[nodiscard]] bool has_repeats() const;

    auto operator<=>(const InvariantIndex&) const = default;

private:
    std::vector<std::size_t> labels_;
};

struct BargmannInvariant {
    InvariantIndex index;
    Complex value;
};

/// Tr(rho_{i1} rho_{i2} ... rho_{iN}).
BargmannInvariant bargmann_value(std::span<const DensityMatrix> states, const InvariantIndex& index);

/// Cyclic overlap product <psi_i1|psi_i2><psi_i2|psi_i3>...<psi_iN|psi_i1>.
/// Agrees with the trace route on |psi><psi|.
BargmannInvariant bargmann_value(std::span<const PureState> states, const InvariantIndex& index);

/// One entry per cyclic class of length-`order` tuples over the state labels,
/// in canonical sorted order. `allow_repeats = false` keeps distinct-label
/// tuples only.
std::vector<BargmannInvariant> enumerate_invariants(std::span<const DensityMatrix> states, std::size_t order,
                                                    bool allow_repeats);

/// Canonical cyclic classes without evaluating anything.
std::vector<InvariantIndex> canonical_indices(std::size_t n_states, std::size_t order, bool allow_repeats);

struct WitnessReport {
    bool witnessed = false;
    std::optional<BargmannInvariant> witness;
    std::size_t invariants_checked = 0;
};

/// Scans orders 1..max_order (repeats allowed) in canonical order and
/// reports the first invariant whose imaginary part exceeds tol.
WitnessReport imaginarity_witness(std::span<const DensityMatrix> states, std::size_t max_order = 3,
                                  double tol = kWitnessTol);

}  // namespace qgame
