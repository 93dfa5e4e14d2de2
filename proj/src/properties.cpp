#include "qgame/properties.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qgame/bargmann.hpp"
#include "qgame/embedding.hpp"
#include "qgame/game.hpp"
#include "qgame/optimizer.hpp"
#include "qgame/rng.hpp"

namespace qgame {

namespace {

CMatrix gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng, bool real_only) {
    CMatrix g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = rng.normal();
            const double im = real_only ? 0.0 : rng.normal();
            g(i, j) = Complex(re, im);
        }
    return g;
}

DensityMatrix density_from(Eigen::Index dim, Eigen::Index rank, Rng& rng, bool real_only) {
    const CMatrix g = gaussian(dim, rank, rng, real_only);
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(std::move(rho));
}

std::vector<DensityMatrix> random_ensemble(Rng& rng, std::size_t n, Eigen::Index dim, bool real_only) {
    std::vector<DensityMatrix> states;
    for (std::size_t k = 0; k < n; ++k) {
        const auto rank = 1 + static_cast<Eigen::Index>(rng.next() % static_cast<std::uint64_t>(dim));
        states.push_back(density_from(dim, rank, rng, real_only));
    }
    return states;
}

Eigen::Index pick_dim(Rng& rng, Eigen::Index lo, Eigen::Index hi) {
    return lo + static_cast<Eigen::Index>(rng.next() % static_cast<std::uint64_t>(hi - lo + 1));
}

void note(PropertyResult& r, double violation) {
    ++r.cases;
    r.worst = std::max(r.worst, violation);
    if (!(violation <= r.tolerance)) ++r.failures;
}

double angle_gap(Complex a, Complex b) {
    double gap = std::abs(std::arg(a) - std::arg(b));
    return std::min(gap, 2 * std::numbers::pi - gap);
}

}  // namespace

DensityMatrix random_density(Eigen::Index dim, Eigen::Index rank, std::uint64_t seed) {
    Rng rng(seed);
    return density_from(dim, rank, rng, false);
}

DensityMatrix random_real_density(Eigen::Index dim, Eigen::Index rank, std::uint64_t seed) {
    Rng rng(seed);
    return density_from(dim, rank, rng, true);
}

PureState random_pure(Eigen::Index dim, std::uint64_t seed) {
    Rng rng(seed);
    return PureState::normalized(gaussian(dim, 1, rng, false).col(0));
}

PropertyResult check_unitary_invariance(std::uint64_t seed, std::size_t cases) {
    PropertyResult r{"bargmann unitary invariance (order <= 4)", 0, 0, 0.0, 1e-10};
    for (std::size_t c = 0; c < cases; ++c) {
        Rng rng(seed, c);
        const Eigen::Index dim = pick_dim(rng, 2, 4);
        const std::size_t n = 3 + rng.next() % 2;
        const auto states = random_ensemble(rng, n, dim, false);
        const CMatrix u = random_unitary(dim, rng.next());
        std::vector<DensityMatrix> rotated;
        for (const auto& s : states) rotated.push_back(rotate(s, u));
        double worst = 0.0;
        for (std::size_t order = 1; order <= 4; ++order) {
            const auto before = enumerate_invariants(states, order, true);
            const auto after = enumerate_invariants(rotated, order, true);
            for (std::size_t k = 0; k < before.size(); ++k) {
                worst = std::max(worst, std::abs(std::abs(before[k].value) - std::abs(after[k].value)));
                if (std::abs(before[k].value) > 1e-3)
                    worst = std::max(worst, angle_gap(before[k].value, after[k].value) * std::abs(before[k].value));
            }
        }
        note(r, worst);
    }
    return r;
}

PropertyResult check_cyclic_invariance(std::uint64_t seed, std::size_t cases) {
    PropertyResult r{"bargmann cyclic invariance and conjugate reversal", 0, 0, 0.0, 1e-12};
    for (std::size_t c = 0; c < cases; ++c) {
        Rng rng(seed, c);
        const Eigen::Index dim = pick_dim(rng, 2, 4);
        const auto states = random_ensemble(rng, 4, dim, false);
        std::vector<std::size_t> labels(3 + rng.next() % 2);
        for (auto& l : labels) l = rng.next() % states.size();
        const auto base = bargmann_value(states, InvariantIndex(labels));
        double worst = 0.0;
        auto rot = labels;
        for (std::size_t k = 0; k < labels.size(); ++k) {
            std::rotate(rot.begin(), rot.begin() + 1, rot.end());
            const InvariantIndex idx(rot);
            const auto v = bargmann_value(states, idx);
            // Canonicalisation makes rotations identical, not merely close.
            if (!(idx == base.index) || v.value != base.value) worst = std::max(worst, 1.0);
            // Raw product in the rotated order, without canonicalisation.
            CMatrix prod = states[rot[0]].matrix();
            for (std::size_t j = 1; j < rot.size(); ++j) prod = prod * states[rot[j]].matrix();
            worst = std::max(worst, std::abs(prod.trace() - base.value));
        }
        std::vector<std::size_t> reversed(labels.rbegin(), labels.rend());
        const auto rev = bargmann_value(states, InvariantIndex(reversed));
        worst = std::max(worst, std::abs(rev.value - std::conj(base.value)));
        note(r, worst);
    }
    return r;
}

PropertyResult check_phase_invariance(std::uint64_t seed, std::size_t cases) {
    PropertyResult r{"bargmann phase invariance and pure/mixed agreement", 0, 0, 0.0, 1e-12};
    for (std::size_t c = 0; c < cases; ++c) {
        Rng rng(seed, c);
        const Eigen::Index dim = pick_dim(rng, 2, 4);
        std::vector<PureState> states;
        for (int k = 0; k < 4; ++k) states.push_back(random_pure(dim, rng.next()));
        auto shifted = states;
        const std::size_t which = rng.next() % states.size();
        shifted[which] = states[which].with_phase(rng.uniform(-std::numbers::pi, std::numbers::pi));
        const auto dens = to_density(states);
        double worst = 0.0;
        for (std::size_t order = 1; order <= 4; ++order)
            for (const auto& idx : canonical_indices(states.size(), order, true)) {
                const Complex a = bargmann_value(std::span<const PureState>(states), idx).value;
                const Complex b = bargmann_value(std::span<const PureState>(shifted), idx).value;
                const Complex t = bargmann_value(std::span<const DensityMatrix>(dens), idx).value;
                worst = std::max({worst, std::abs(a - b), std::abs(a - t)});
            }
        note(r, worst);
    }
    return r;
}

PropertyResult check_gram_round_trip(std::uint64_t seed, std::size_t cases) {
    PropertyResult r{"gram round trip (dims 2-4)", 0, 0, 0.0, 1e-10};
    for (std::size_t c = 0; c < cases; ++c) {
        Rng rng(seed, c);
        const Eigen::Index dim = pick_dim(rng, 2, 4);
        const std::size_t n = static_cast<std::size_t>(dim) + rng.next() % 3;
        std::vector<PureState> states;
        for (std::size_t k = 0; k < n; ++k) states.push_back(random_pure(dim, rng.next()));
        const GramMatrix g = gram_matrix(states);
        const auto rebuilt = states_from_gram(g);
        double worst = (gram_matrix(rebuilt).entries - g.entries).cwiseAbs().maxCoeff();
        if (rebuilt.front().dim() != dim) worst = std::max(worst, 1.0);
        note(r, worst);
    }
    return r;
}

PropertyResult check_validation_fuzz(std::uint64_t seed, std::size_t cases) {
    // Violation 1 marks a misclassification; otherwise the Born-rule error.
    PropertyResult r{"state/POVM validation fuzz", 0, 0, 0.0, 1e-10};
    for (std::size_t c = 0; c < cases; ++c) {
        Rng rng(seed, c);
        const Eigen::Index dim = pick_dim(rng, 1, 4);
        const auto rank = 1 + static_cast<Eigen::Index>(rng.next() % static_cast<std::uint64_t>(dim));
        const DensityMatrix rho = density_from(dim, rank, rng, false);
        const std::size_t outcomes = 1 + rng.next() % 5;
        const std::size_t per = static_cast<std::size_t>(dim * (dim + 1));
        std::vector<double> params(per * outcomes);
        for (auto& v : params) v = rng.normal();
        const auto elements = congruence_povm(params, dim, outcomes, true);
        double violation = 0.0;
        try {
            const Povm povm(elements);
            const RVector p = born_probabilities(rho, povm);
            violation = std::abs(p.sum() - 1.0);
            if (p.minCoeff() < -1e-12) violation = 1.0;
        } catch (const std::invalid_argument&) {
            violation = 1.0;  // a valid POVM was rejected
        }

        // Corrupt a copy in one of several ways; each must be rejected.
        CMatrix bad = rho.matrix();
        switch (rng.next() % 3) {
            case 0: bad *= 1.0 + 1e-6 + rng.uniform(); break;  // trace
            case 1:                                            // Hermiticity
                if (dim > 1) bad(0, 1) += Complex(1e-6 + rng.uniform(), 0.0);
                else bad(0, 0) += Complex(0.0, 1e-6 + rng.uniform());
                break;
            default: {  // a negative eigenvalue with unit trace kept
                CMatrix shift = CMatrix::Zero(dim, dim);
                shift(0, 0) = -(1.0 + 1e-6);
                bad = rho.matrix() + shift;
                if (dim > 1) bad(dim - 1, dim - 1) += 1.0 + 1e-6;
                else bad(0, 0) = -1.0;
            }
        }
        bool rejected = false;
        try {
            DensityMatrix probe(bad);
        } catch (const std::invalid_argument&) {
            rejected = true;
        }
        if (!rejected) violation = 1.0;

        std::vector<CMatrix> broken = elements;
        broken.front() *= 1.5;
        try {
            Povm probe(broken);
            violation = 1.0;
        } catch (const std::invalid_argument&) {
        }
        note(r, violation);
    }
    return r;
}

PropertyResult check_realized_linearity(std::uint64_t seed, std::size_t cases) {
    PropertyResult r{"realized_distribution affine in the encoder", 0, 0, 0.0, 1e-12};
    const Parameterization p = qubit_parameterization();
    for (std::size_t c = 0; c < cases; ++c) {
        Rng rng(seed, c);
        std::vector<double> a(p.param_count), b(p.param_count);
        for (auto& v : a) v = rng.uniform(-3, 3);
        for (auto& v : b) v = rng.uniform(-3, 3);
        // Same decoder, different encoders.
        std::copy(a.begin() + 8, a.end(), b.begin() + 8);
        const Strategy sa = p.decode(a);
        const Strategy sb = p.decode(b);
        const double lambda = rng.uniform();
        std::vector<DensityMatrix> mixed;
        for (std::size_t x = 0; x < sa.encoder.size(); ++x)
            mixed.push_back(DensityMatrix(lambda * sa.encoder[x].matrix() + (1 - lambda) * sb.encoder[x].matrix()));
        const Strategy sm{TheoryTag::complex, std::move(mixed), sa.measurement, sa.post_processing};
        const RMatrix expect = lambda * realized_distribution(sa).table + (1 - lambda) * realized_distribution(sb).table;
        note(r, (realized_distribution(sm).table - expect).cwiseAbs().maxCoeff());
    }
    return r;
}

PropertyResult check_rotated_real_ensembles(std::uint64_t seed, std::size_t cases) {
    PropertyResult r{"rotated real ensembles carry no witness (order <= 4)", 0, 0, 0.0, 0.0};
    for (std::size_t c = 0; c < cases; ++c) {
        Rng rng(seed, c);
        const Eigen::Index dim = pick_dim(rng, 2, 4);
        const std::size_t n = 3 + rng.next() % 2;
        const auto states = random_ensemble(rng, n, dim, true);
        const CMatrix u = random_unitary(dim, rng.next());
        std::vector<DensityMatrix> rotated;
        for (const auto& s : states) rotated.push_back(rotate(s, u));
        const WitnessReport w = imaginarity_witness(rotated, 4, kWitnessTol);
        note(r, w.witnessed ? 1.0 : 0.0);
    }
    return r;
}

std::vector<PropertyResult> run_property_suites(std::uint64_t seed) {
    return {check_unitary_invariance(seed),  check_cyclic_invariance(seed + 1), check_phase_invariance(seed + 2),
            check_gram_round_trip(seed + 3), check_validation_fuzz(seed + 4),  check_realized_linearity(seed + 5)};
}

}  // namespace qgame
