#include "qgame/quantum_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qgame/rng.hpp"

namespace qgame {

std::string_view to_string(TheoryTag tag) {
    switch (tag) {
        case TheoryTag::classical: return "classical";
        case TheoryTag::real: return "real";
        case TheoryTag::complex: return "complex";
    }
    return "unknown";
}

TheoryTag theory_from_string(std::string_view name) {
    if (name == "classical") return TheoryTag::classical;
    if (name == "real") return TheoryTag::real;
    if (name == "complex") return TheoryTag::complex;
    throw std::invalid_argument("unknown theory tag: " + std::string(name));
}

// ---------------------------------------------------------------------------
// Predicates

bool is_hermitian(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue(const CMatrix& m) {
    const CMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

bool is_psd(const CMatrix& m, double tol) {
    return is_hermitian(m, tol) && min_eigenvalue(m) >= -tol;
}

bool is_diagonal(const CMatrix& m, double tol) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j && std::abs(m(i, j)) > tol) return false;
    return true;
}

bool is_real(const CMatrix& m, double tol) {
    return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() <= tol;
}

bool satisfies_theory(const CMatrix& m, TheoryTag tag, double tol) {
    switch (tag) {
        case TheoryTag::classical: return is_diagonal(m, tol) && is_real(m, tol);
        case TheoryTag::real: return is_real(m, tol);
        case TheoryTag::complex: return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(CVector amplitudes, double tol) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 1) throw std::invalid_argument("PureState: dimension must be positive");
    const double norm = amplitudes_.norm();
    if (!(std::abs(norm - 1.0) <= tol))
        throw std::invalid_argument("PureState: norm " + std::to_string(norm) + " is not 1");
}

PureState PureState::normalized(CVector amplitudes) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("PureState: cannot normalize zero vector");
    return PureState(amplitudes / norm);
}

PureState PureState::with_phase(double angle) const {
    return PureState(amplitudes_ * std::polar(1.0, angle));
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(CMatrix entries, double tol) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.rows() != entries_.cols())
        throw std::invalid_argument("DensityMatrix: must be square with positive dimension");
    if (!is_hermitian(entries_, tol)) throw std::invalid_argument("DensityMatrix: not Hermitian");
    const Complex tr = entries_.trace();
    if (std::abs(tr - 1.0) > tol) throw std::invalid_argument("DensityMatrix: trace is not 1");
    if (min_eigenvalue(entries_) < -tol) throw std::invalid_argument("DensityMatrix: not positive semidefinite");
}

DensityMatrix::DensityMatrix(const PureState& state)
    : entries_(state.amplitudes() * state.amplitudes().adjoint()) {}

DensityMatrix DensityMatrix::trusted(CMatrix entries) { return DensityMatrix(std::move(entries), TrustedTag{}); }

// ---------------------------------------------------------------------------
// Povm

Povm::Povm(std::vector<CMatrix> elements, double tol)
    : Povm(std::move(elements), std::vector<int>{}, tol) {}

Povm::Povm(std::vector<CMatrix> elements, std::vector<int> labels, double tol)
    : elements_(std::move(elements)), labels_(std::move(labels)) {
    if (elements_.empty()) throw std::invalid_argument("Povm: needs at least one element");
    dim_ = elements_.front().rows();
    if (dim_ < 1) throw std::invalid_argument("Povm: dimension must be positive");
    if (labels_.empty()) {
        for (std::size_t m = 0; m < elements_.size(); ++m) labels_.push_back(static_cast<int>(m));
    } else if (labels_.size() != elements_.size()) {
        throw std::invalid_argument("Povm: label count does not match element count");
    }
    CMatrix sum = CMatrix::Zero(dim_, dim_);
    for (const auto& e : elements_) {
        if (e.rows() != dim_ || e.cols() != dim_) throw std::invalid_argument("Povm: element dimension mismatch");
        if (!is_psd(e, tol)) throw std::invalid_argument("Povm: element is not Hermitian PSD");
        sum += e;
    }
    if ((sum - CMatrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("Povm: elements do not sum to identity");
}

Povm Povm::trusted(std::vector<CMatrix> elements) {
    Povm p;
    p.dim_ = elements.front().rows();
    p.elements_ = std::move(elements);
    for (std::size_t m = 0; m < p.elements_.size(); ++m) p.labels_.push_back(static_cast<int>(m));
    return p;
}

Povm Povm::computational(Eigen::Index dim) {
    std::vector<CMatrix> elements;
    for (Eigen::Index k = 0; k < dim; ++k) {
        CMatrix e = CMatrix::Zero(dim, dim);
        e(k, k) = 1.0;
        elements.push_back(std::move(e));
    }
    return Povm(std::move(elements));
}

// ---------------------------------------------------------------------------
// Operations

Complex inner_product(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("inner_product: dimension mismatch");
    return a.amplitudes().dot(b.amplitudes());  // Eigen's dot conjugates the left operand
}

RVector born_probabilities(const DensityMatrix& state, const Povm& measurement) {
    if (state.dim() != measurement.dim()) throw std::invalid_argument("born_probabilities: dimension mismatch");
    RVector p(static_cast<Eigen::Index>(measurement.size()));
    for (std::size_t m = 0; m < measurement.size(); ++m)
        p(static_cast<Eigen::Index>(m)) =
            (state.matrix().cwiseProduct(measurement.elements()[m].transpose())).sum().real();
    return p;
}

GramMatrix gram_matrix(std::span<const PureState> states) {
    if (states.empty()) throw std::invalid_argument("gram_matrix: empty state list");
    const auto n = static_cast<Eigen::Index>(states.size());
    GramMatrix g{CMatrix(n, n)};
    for (Eigen::Index a = 0; a < n; ++a) {
        g.entries(a, a) = inner_product(states[a], states[a]);
        for (Eigen::Index b = a + 1; b < n; ++b) {
            const Complex v = inner_product(states[a], states[b]);
            g.entries(a, b) = v;
            g.entries(b, a) = std::conj(v);
        }
    }
    return g;
}

double communication_cost(std::span<const DensityMatrix> states, double tol) {
    if (states.empty()) throw std::invalid_argument("communication_cost: empty state list");
    const Eigen::Index dim = states.front().dim();
    CMatrix support = CMatrix::Zero(dim, dim);
    for (const auto& s : states) {
        if (s.dim() != dim) throw std::invalid_argument("communication_cost: dimension mismatch");
        support += s.matrix();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(support, Eigen::EigenvaluesOnly);
    const auto rank = (solver.eigenvalues().array() > tol).count();
    return std::log2(static_cast<double>(rank));
}

double purity(const DensityMatrix& state) {
    // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    return state.matrix().cwiseAbs2().sum();
}

CMatrix random_unitary(Eigen::Index dim, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("random_unitary: dim must be >= 1");
    Rng rng(seed);
    CMatrix z(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            z(i, j) = Complex(re, im) / std::sqrt(2.0);
        }
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < dim; ++k) {
        const Complex d = r(k, k);
        const double mag = std::abs(d);
        q.col(k) *= mag > 0.0 ? d / mag : Complex(1.0);
    }
    return q;
}

DensityMatrix rotate(const DensityMatrix& state, const CMatrix& unitary) {
    if (unitary.rows() != state.dim()) throw std::invalid_argument("rotate: dimension mismatch");
    CMatrix m = unitary * state.matrix() * unitary.adjoint();
    return DensityMatrix(std::move(m));
}

PureState rotate(const PureState& state, const CMatrix& unitary) {
    if (unitary.rows() != state.dim()) throw std::invalid_argument("rotate: dimension mismatch");
    return PureState(unitary * state.amplitudes());
}

std::vector<DensityMatrix> to_density(std::span<const PureState> states) {
    std::vector<DensityMatrix> out;
    out.reserve(states.size());
    for (const auto& s : states) out.emplace_back(s);
    return out;
}

}  // namespace qgame
