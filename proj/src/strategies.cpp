#include "qgame/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qgame {

namespace {

constexpr double kPi = std::numbers::pi;

/// Isometry taking the span of `source` onto the span of `target`, state by
/// state up to phase. Both ensembles must have two independent leading states.
CMatrix align_isometry(std::span<const PureState> source, std::span<const PureState> target) {
    if (source.size() != target.size() || source.size() < 2)
        throw std::invalid_argument("align_isometry: ensembles must match in size (>= 2)");
    const Complex s01 = inner_product(source[0], source[1]);
    const Complex t01 = inner_product(target[0], target[1]);
    if (std::abs(std::abs(s01) - std::abs(t01)) > kValidationTol)
        throw std::runtime_error("align_isometry: leading overlaps differ in modulus");

    // Rephase target[1] so its overlap with target[0] matches the source's.
    CVector t1 = target[1].amplitudes();
    if (std::abs(t01) > 0.0) t1 *= (s01 / std::abs(s01)) / (t01 / std::abs(t01));

    auto frame = [](const CVector& a, const CVector& b) {
        CVector r = b - a.dot(b) * a;
        const double norm = r.norm();
        if (norm < 1e-9) throw std::runtime_error("align_isometry: leading states are parallel");
        CMatrix f(a.size(), 2);
        f.col(0) = a;
        f.col(1) = r / norm;
        return f;
    };
    const CMatrix fs = frame(source[0].amplitudes(), source[1].amplitudes());
    const CMatrix ft = frame(target[0].amplitudes(), t1);
    CMatrix v = ft * fs.adjoint();

    for (std::size_t x = 0; x < source.size(); ++x) {
        const double overlap = std::abs(target[x].amplitudes().dot(v * source[x].amplitudes()));
        if (std::abs(overlap - 1.0) > kValidationTol)
            throw std::runtime_error("align_isometry: ensembles are not unitarily related");
    }
    return v;
}

std::vector<CMatrix> pulled_back_projectors(const CMatrix& v) {
    std::vector<CMatrix> elements;
    for (Eigen::Index y = 0; y < v.rows(); ++y) {
        const CMatrix row = v.row(y);
        elements.push_back(row.adjoint() * row);
    }
    return elements;
}

}  // namespace

std::string_view to_string(RebitVariant variant) {
    return variant == RebitVariant::original ? "original" : "symmetrized";
}

RebitVariant variant_from_string(std::string_view name) {
    if (name == "original") return RebitVariant::original;
    if (name == "symmetrized") return RebitVariant::symmetrized;
    throw std::invalid_argument("unknown rebit variant: " + std::string(name));
}

std::vector<PureState> dilated_states(SignBranch branch) {
    const double s = sign_of(branch);
    const double k = 1.0 / std::sqrt(3.0);
    const Complex up = std::polar(1.0, s * kPi / 3);    // e^{+-i pi/3}
    const Complex down = std::polar(1.0, -s * kPi / 3);  // e^{-+i pi/3}
    std::vector<CVector> amps(4, CVector(4));
    amps[0] << 0.0, 1.0, 1.0, 1.0;
    amps[1] << 1.0, 0.0, 1.0, up;
    amps[2] << -1.0, 1.0, 0.0, down;
    amps[3] << -down, 1.0, up, 0.0;
    std::vector<PureState> out;
    for (auto& a : amps) out.emplace_back(k * a);
    return out;
}

Strategy dilated_strategy(SignBranch branch) {
    const auto states = dilated_states(branch);
    Strategy s{TheoryTag::complex, to_density(states), Povm::computational(4), RMatrix::Identity(4, 4)};
    s.validate();
    return s;
}

std::vector<PureState> qubit_states(SignBranch branch) {
    const double s = sign_of(branch);
    const double a = 1.0 / std::sqrt(3.0);
    const double b = std::sqrt(2.0) / std::sqrt(3.0);
    std::vector<CVector> amps(4, CVector(2));
    amps[0] << 1.0, 0.0;
    amps[1] << std::polar(a, s * kPi / 6), b;
    amps[2] << std::polar(a, -s * kPi / 6), -b;
    amps[3] << std::polar(a, s * kPi / 6), std::polar(b, s * 2 * kPi / 3);
    std::vector<PureState> out;
    for (auto& v : amps) out.emplace_back(std::move(v));
    return out;
}

DilationIsometry dilation_isometry(SignBranch branch) {
    return {align_isometry(qubit_states(branch), dilated_states(branch))};
}

Strategy qubit_strategy(SignBranch branch) {
    const DilationIsometry v = dilation_isometry(branch);
    Strategy s{TheoryTag::complex, to_density(qubit_states(branch)), Povm(pulled_back_projectors(v.matrix)),
               RMatrix::Identity(4, 4)};
    s.validate();
    return s;
}

Strategy baseline_d0() {
    const GameSpec spec = GameSpec::default_instance();
    std::vector<DensityMatrix> encoder(spec.inputs.size(), DensityMatrix(CMatrix::Identity(1, 1)));
    // Marginal P(Y) under the input distribution.
    RMatrix marginal = RMatrix::Zero(1, spec.target.cols());
    for (std::size_t x = 0; x < spec.inputs.size(); ++x)
        marginal += spec.weight(x) * spec.target.row(static_cast<Eigen::Index>(x));
    Strategy s{TheoryTag::classical, std::move(encoder), Povm::computational(1), marginal};
    s.validate();
    return s;
}

std::vector<PureState> rebit_trio_states() {
    const double k = 1.0 / std::sqrt(2.0);
    std::vector<CVector> amps(3, CVector(3));
    amps[0] << 0.0, 1.0, 1.0;
    amps[1] << 1.0, 0.0, -1.0;
    amps[2] << 1.0, 1.0, 0.0;
    std::vector<PureState> out;
    for (auto& a : amps) out.emplace_back(k * a);
    out.push_back(out[2]);
    return out;
}

std::vector<PureState> rebit_embedded_states() {
    const auto trio = rebit_trio_states();
    const RealAlignment aligned = real_aligned_states(gram_matrix(trio));
    if (aligned.max_imag > 1e-12) throw std::runtime_error("rebit_embedded_states: embedding is not real");
    std::vector<PureState> out;
    for (const auto& s : aligned.states) out.emplace_back(CVector(s.amplitudes().real().cast<Complex>()));
    return out;
}

RMatrix rebit_post_processing(RebitVariant variant) {
    RMatrix r = RMatrix::Zero(3, 4);
    for (Eigen::Index m = 0; m < 3; ++m) {
        r(m, m) += 2.0 / 3.0;
        r(m, 3) += 1.0 / 3.0;
    }
    if (variant == RebitVariant::symmetrized) {
        RMatrix mix = RMatrix::Identity(4, 4);
        mix.block(2, 2, 2, 2).setConstant(0.5);
        r = r * mix;
    }
    return r;
}

Strategy rebit_trio_strategy(RebitVariant variant) {
    // Built as a a^T / 2 from the integer vectors so the Born weights are exactly 1/2.
    std::vector<DensityMatrix> encoder;
    for (const auto& state : rebit_trio_states()) {
        const CVector a = (state.amplitudes().real() * std::sqrt(2.0)).array().round().matrix().cast<Complex>();
        encoder.emplace_back(CMatrix(0.5 * a * a.adjoint()));
    }
    Strategy s{TheoryTag::real, std::move(encoder), Povm::computational(3),
               rebit_post_processing(variant)};
    s.validate();
    return s;
}

Strategy rebit_embedded_strategy(RebitVariant variant) {
    const auto embedded = rebit_embedded_states();
    const auto trio = rebit_trio_states();
    // Isometry rebit -> trio space; the leading two messages are independent.
    const CMatrix w = align_isometry(std::span(embedded).first(3), std::span(trio).first(3));
    Strategy s{TheoryTag::real, to_density(embedded), Povm(pulled_back_projectors(w)), rebit_post_processing(variant)};
    s.validate();
    return s;
}

const std::vector<std::string>& catalog_ids() {
    static const std::vector<std::string> ids{"qubit+",    "qubit-",         "dilated+",         "dilated-",
                                              "baseline0", "rebit-original", "rebit-symmetrized"};
    return ids;
}

bool is_catalog_id(std::string_view id) {
    const auto& ids = catalog_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

Strategy catalog_strategy(std::string_view id) {
    if (id == "qubit+") return qubit_strategy(SignBranch::plus);
    if (id == "qubit-") return qubit_strategy(SignBranch::minus);
    if (id == "dilated+") return dilated_strategy(SignBranch::plus);
    if (id == "dilated-") return dilated_strategy(SignBranch::minus);
    if (id == "baseline0") return baseline_d0();
    if (id == "rebit-original") return rebit_trio_strategy(RebitVariant::original);
    if (id == "rebit-symmetrized") return rebit_trio_strategy(RebitVariant::symmetrized);
    throw std::invalid_argument("unknown strategy id: " + std::string(id));
}

}  // namespace qgame
