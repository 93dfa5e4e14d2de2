#include "qgame/bargmann.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qgame {

namespace {

std::vector<std::size_t> min_rotation(const std::vector<std::size_t>& labels) {
    std::vector<std::size_t> best = labels;
    std::vector<std::size_t> rot = labels;
    for (std::size_t k = 1; k < labels.size(); ++k) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < best) best = rot;
    }
    return best;
}

template <typename State>
void check_labels(std::span<const State> states, const InvariantIndex& index) {
    if (states.empty()) throw std::invalid_argument("bargmann_value: empty ensemble");
    const auto dim = states.front().dim();
    for (std::size_t label : index.labels()) {
        if (label >= states.size()) throw std::out_of_range("bargmann_value: label out of range");
        if (states[label].dim() != dim) throw std::invalid_argument("bargmann_value: dimension mismatch");
    }
}

}  // namespace

InvariantIndex::InvariantIndex(std::vector<std::size_t> labels) {
    if (labels.empty()) throw std::invalid_argument("InvariantIndex: order must be >= 1");
    labels_ = min_rotation(labels);
}

bool InvariantIndex::has_repeats() const {
    std::set<std::size_t> seen(labels_.begin(), labels_.end());
    return seen.size() != labels_.size();
}

BargmannInvariant bargmann_value(std::span<const DensityMatrix> states, const InvariantIndex& index) {
    check_labels(states, index);
    const auto& labels = index.labels();
    CMatrix product = states[labels.front()].matrix();
    for (std::size_t k = 1; k < labels.size(); ++k) product = product * states[labels[k]].matrix();
    return {index, product.trace()};
}

BargmannInvariant bargmann_value(std::span<const PureState> states, const InvariantIndex& index) {
    check_labels(states, index);
    const auto& labels = index.labels();
    Complex value = 1.0;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        const auto& a = states[labels[k]];
        const auto& b = states[labels[(k + 1) % labels.size()]];
        value *= inner_product(a, b);
    }
    return {index, value};
}

std::vector<InvariantIndex> canonical_indices(std::size_t n_states, std::size_t order, bool allow_repeats) {
    if (order < 1) throw std::invalid_argument("canonical_indices: order must be >= 1");
    std::vector<InvariantIndex> out;
    if (n_states == 0) return out;
    // Odometer over all n^order tuples; keep those already in canonical form.
    std::vector<std::size_t> tuple(order, 0);
    while (true) {
        bool keep = true;
        if (!allow_repeats) {
            std::set<std::size_t> seen(tuple.begin(), tuple.end());
            keep = seen.size() == tuple.size();
        }
        if (keep && min_rotation(tuple) == tuple) out.emplace_back(tuple);

        std::size_t pos = order;
        while (pos > 0) {
            --pos;
            if (++tuple[pos] < n_states) break;
            tuple[pos] = 0;
            if (pos == 0) return out;
        }
    }
}

std::vector<BargmannInvariant> enumerate_invariants(std::span<const DensityMatrix> states, std::size_t order,
                                                    bool allow_repeats) {
    if (order < 1) throw std::invalid_argument("enumerate_invariants: order must be >= 1");
    std::vector<BargmannInvariant> out;
    for (auto& index : canonical_indices(states.size(), order, allow_repeats))
        out.push_back(bargmann_value(states, index));
    return out;
}

WitnessReport imaginarity_witness(std::span<const DensityMatrix> states, std::size_t max_order, double tol) {
    if (max_order < 1) throw std::invalid_argument("imaginarity_witness: max_order must be >= 1");
    WitnessReport report;
    for (std::size_t order = 1; order <= max_order; ++order) {
        for (auto& index : canonical_indices(states.size(), order, true)) {
            auto inv = bargmann_value(states, index);
            ++report.invariants_checked;
            if (std::abs(inv.value.imag()) > tol) {
                report.witnessed = true;
                report.witness = std::move(inv);
                return report;
            }
        }
    }
    return report;
}

}  // namespace qgame
