#include "qgame/embedding.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>

namespace qgame {

std::string_view to_string(SignBranch branch) { return branch == SignBranch::plus ? "plus" : "minus"; }

SignBranch branch_from_string(std::string_view name) {
    if (name == "plus" || name == "+") return SignBranch::plus;
    if (name == "minus" || name == "-") return SignBranch::minus;
    throw std::invalid_argument("unknown branch: " + std::string(name));
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

namespace {

// Residual norm below which a factor vector adds no new basis direction.
constexpr double kGreedyResidualTol = 1e-6;

std::vector<CVector> factor_vectors(const GramMatrix& gram, double tol) {
    const CMatrix& g = gram.entries;
    if (g.rows() < 1 || g.rows() != g.cols()) throw std::invalid_argument("states_from_gram: gram must be square and non-empty");
    if (!is_hermitian(g, tol)) throw std::invalid_argument("states_from_gram: gram is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (g + g.adjoint()));
    const RVector& evals = solver.eigenvalues();
    if (evals.minCoeff() < -tol) throw std::invalid_argument("states_from_gram: gram is not positive semidefinite");

    std::vector<Eigen::Index> kept;
    for (Eigen::Index k = evals.size() - 1; k >= 0; --k)
        if (evals(k) > tol) kept.push_back(k);
    if (kept.empty()) throw std::invalid_argument("states_from_gram: zero-rank gram");

    // G = U diag(l) U^dag, so psi_b[k] = sqrt(l_k) conj(U_bk) reproduces G_ab.
    const CMatrix& u = solver.eigenvectors();
    const auto rank = static_cast<Eigen::Index>(kept.size());
    std::vector<CVector> vectors(static_cast<std::size_t>(g.rows()), CVector(rank));
    for (Eigen::Index b = 0; b < g.rows(); ++b)
        for (Eigen::Index k = 0; k < rank; ++k)
            vectors[static_cast<std::size_t>(b)](k) = std::sqrt(evals(kept[k])) * std::conj(u(b, kept[k]));
    return vectors;
}

std::vector<PureState> greedy_gram_schmidt(const std::vector<CVector>& vectors) {
    const Eigen::Index rank = vectors.front().size();
    std::vector<CVector> basis;
    for (const auto& v : vectors) {
        if (static_cast<Eigen::Index>(basis.size()) == rank) break;
        CVector residual = v;
        for (const auto& e : basis) residual -= e.dot(residual) * e;
        const double norm = residual.norm();
        if (norm > kGreedyResidualTol) basis.push_back(residual / norm);
    }
    if (static_cast<Eigen::Index>(basis.size()) != rank)
        throw std::runtime_error("states_from_gram: failed to build a full basis");

    std::vector<PureState> out;
    out.reserve(vectors.size());
    for (const auto& v : vectors) {
        CVector coords(rank);
        for (Eigen::Index k = 0; k < rank; ++k) coords(k) = basis[static_cast<std::size_t>(k)].dot(v);
        out.emplace_back(std::move(coords));
    }
    return out;
}

}  // namespace

std::vector<PureState> states_from_gram(const GramMatrix& gram, double tol) {
    return greedy_gram_schmidt(factor_vectors(gram, tol));
}

RealAlignment real_aligned_states(const GramMatrix& gram, double tol) {
    const CMatrix& g = gram.entries;
    const Eigen::Index n = g.rows();
    std::vector<Complex> phase(static_cast<std::size_t>(n), Complex(0.0));
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (Eigen::Index root = 0; root < n; ++root) {
        if (seen[static_cast<std::size_t>(root)]) continue;
        seen[static_cast<std::size_t>(root)] = true;
        phase[static_cast<std::size_t>(root)] = 1.0;
        std::queue<Eigen::Index> frontier;
        frontier.push(root);
        while (!frontier.empty()) {
            const Eigen::Index a = frontier.front();
            frontier.pop();
            for (Eigen::Index b = 0; b < n; ++b) {
                if (seen[static_cast<std::size_t>(b)] || std::abs(g(a, b)) <= kGreedyResidualTol) continue;
                // <a'|b'> = conj(p_a) p_b G_ab is made real positive.
                phase[static_cast<std::size_t>(b)] = phase[static_cast<std::size_t>(a)] * std::conj(g(a, b)) / std::abs(g(a, b));
                seen[static_cast<std::size_t>(b)] = true;
                frontier.push(b);
            }
        }
    }
    GramMatrix rephased{g};
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            rephased.entries(a, b) = std::conj(phase[static_cast<std::size_t>(a)]) * g(a, b) * phase[static_cast<std::size_t>(b)];

    RealAlignment result{states_from_gram(rephased, tol), 0.0};
    for (const auto& s : result.states)
        result.max_imag = std::max(result.max_imag, s.amplitudes().imag().cwiseAbs().maxCoeff());
    return result;
}

GramMatrix overlap_table(SignBranch branch) {
    const double s = sign_of(branch);
    const double r3 = std::sqrt(3.0);
    const double pi = std::numbers::pi;
    auto e = [&](double angle) { return std::polar(1.0 / r3, angle); };
    CMatrix t(4, 4);
    t << 1.0, e(s * pi / 6), e(-s * pi / 6), e(s * pi / 6),
        e(-s * pi / 6), 1.0, e(-s * 5 * pi / 6), Complex(0.0, s / r3),
        e(s * pi / 6), e(s * 5 * pi / 6), 1.0, e(-s * pi / 6),
        e(-s * pi / 6), Complex(0.0, -s / r3), e(s * pi / 6), 1.0;
    return {t};
}

BlochVector bloch_vector(const DensityMatrix& state) {
    if (state.dim() != 2) throw std::invalid_argument("bloch_vector: state must be a qubit");
    const CMatrix& r = state.matrix();
    return {2.0 * r(0, 1).real(), -2.0 * r(0, 1).imag(), (r(0, 0) - r(1, 1)).real()};
}

BlochVector bloch_vector(const PureState& state) {
    if (state.dim() != 2) throw std::invalid_argument("bloch_vector: state must be a qubit");
    const Complex a = state[0];
    const Complex b = state[1];
    const Complex ab = a * std::conj(b);  // rho_01
    return {2.0 * ab.real(), -2.0 * ab.imag(), std::norm(a) - std::norm(b)};
}

GreatCircleReport great_circle_test(std::span<const PureState> states, double tol) {
    if (states.size() != 4) throw std::invalid_argument("great_circle_test: needs exactly 4 states");
    Eigen::MatrixXd m(4, 3);
    for (Eigen::Index k = 0; k < 4; ++k) {
        const BlochVector v = bloch_vector(states[static_cast<std::size_t>(k)]);
        m.row(k) << v.x, v.y, v.z;
    }
    GreatCircleReport report;
    constexpr std::array<std::array<std::size_t, 3>, 4> triples{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
    for (const auto& t : triples) {
        Eigen::Matrix3d sub;
        for (int r = 0; r < 3; ++r) sub.row(r) = m.row(static_cast<Eigen::Index>(t[static_cast<std::size_t>(r)]));
        const double det = std::abs(sub.determinant());
        report.triples.push_back({t, det, det < tol});
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    report.four_state_sigma_min = svd.singularValues()(2);
    report.all_four_coplanar = report.four_state_sigma_min < tol;
    return report;
}

void write_bloch_csv(std::ostream& out, std::span<const PureState> states) {
    out << "label,x,y,z\n";
    char buf[128];
    for (std::size_t k = 0; k < states.size(); ++k) {
        const BlochVector v = bloch_vector(states[k]);
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", k, v.x + 0.0, v.y + 0.0, v.z + 0.0);
        out << buf;
    }
}

}  // namespace qgame
