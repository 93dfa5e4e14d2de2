#include "qgame/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qgame/rng.hpp"

namespace qgame {

namespace {

constexpr std::size_t kOutcomes = 4;
constexpr double kRidge = 1e-12;

std::size_t factor_params(Eigen::Index dim, bool complex_factors) {
    const auto tri = static_cast<std::size_t>(dim * (dim + 1) / 2);
    return complex_factors ? 2 * tri : tri;
}

CMatrix inverse_sqrt(const CMatrix& s) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(s);
    const RVector inv = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().cwiseInverse();
    return solver.eigenvectors() * inv.asDiagonal() * solver.eigenvectors().adjoint();
}

/// Nonnegative weights proportional to squares; uniform if all vanish.
RVector squared_simplex(std::span<const double> raw) {
    RVector w(static_cast<Eigen::Index>(raw.size()));
    for (std::size_t k = 0; k < raw.size(); ++k) w(static_cast<Eigen::Index>(k)) = raw[k] * raw[k];
    const double total = w.sum();
    if (!(total > 0.0)) return RVector::Constant(w.size(), 1.0 / static_cast<double>(w.size()));
    return w / total;
}

CMatrix real_disk_state(double radius, double angle) {
    // Bloch vector (r sin 2a, 0, r cos 2a); radius 1 is the pure state (cos a, sin a).
    CMatrix rho(2, 2);
    const double c = radius * std::cos(2 * angle);
    const double s = radius * std::sin(2 * angle);
    rho << 0.5 * (1 + c), 0.5 * s, 0.5 * s, 0.5 * (1 - c);
    return rho;
}

/// Principal eigenvector of a (near-)pure density matrix.
CVector principal_vector(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.matrix());
    const Eigen::Index top = rho.dim() - 1;
    if (std::abs(solver.eigenvalues()(top) - 1.0) > 1e-9)
        throw std::invalid_argument("encoder state is not pure");
    return solver.eigenvectors().col(top);
}

std::vector<CMatrix> collapsed_povm(const Strategy& strategy) {
    if (strategy.encoder.front().dim() != 2 || strategy.output_count() != static_cast<Eigen::Index>(kOutcomes))
        throw std::invalid_argument("strategy must use 2-dim messages and 4 outputs");
    return effective_povm(strategy);
}

void append_factor(std::vector<double>& out, const CMatrix& l, bool complex_factors) {
    for (Eigen::Index i = 0; i < l.rows(); ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            out.push_back(l(i, j).real());
            if (complex_factors) out.push_back(l(i, j).imag());
        }
}

}  // namespace

std::string_view to_string(SearchMethod method) {
    return method == SearchMethod::pattern_search ? "pattern-search" : "finite-difference-descent";
}

// ---------------------------------------------------------------------------
// POVM construction

std::vector<CMatrix> congruence_povm(std::span<const double> params, Eigen::Index dim, std::size_t outcomes,
                                     bool complex_factors) {
    const std::size_t per = factor_params(dim, complex_factors);
    if (params.size() != per * outcomes) throw std::invalid_argument("congruence_povm: wrong parameter count");
    std::vector<CMatrix> c(outcomes);
    CMatrix s = CMatrix::Zero(dim, dim);
    std::size_t k = 0;
    for (std::size_t y = 0; y < outcomes; ++y) {
        CMatrix l = CMatrix::Zero(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j <= i; ++j) {
                const double re = params[k++];
                const double im = complex_factors ? params[k++] : 0.0;
                l(i, j) = Complex(re, im);
            }
        c[y] = l * l.adjoint();
        s += c[y];
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> probe(s, Eigen::EigenvaluesOnly);
    if (probe.eigenvalues().minCoeff() < kRidge) {
        // Spread the ridge over the outcomes so the elements still sum to S + ridge.
        const CMatrix eps = CMatrix::Identity(dim, dim) * (kRidge / static_cast<double>(outcomes));
        for (auto& cy : c) cy += eps;
        s += CMatrix::Identity(dim, dim) * kRidge;
    }
    const CMatrix w = inverse_sqrt(s);
    for (auto& cy : c) {
        cy = w * cy * w;
        cy = 0.5 * (cy + cy.adjoint()).eval();
    }
    return c;
}

CMatrix psd_lower_factor(const CMatrix& m) {
    const Eigen::Index n = m.rows();
    CMatrix l = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Complex diag = m(j, j);
        for (Eigen::Index k = 0; k < j; ++k) diag -= l(j, k) * std::conj(l(j, k));
        const double d = std::sqrt(std::max(diag.real(), 0.0));
        l(j, j) = d;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            Complex v = m(i, j);
            for (Eigen::Index k = 0; k < j; ++k) v -= l(i, k) * std::conj(l(j, k));
            l(i, j) = d > 1e-14 ? v / d : Complex(0.0);
        }
    }
    return l;
}

// ---------------------------------------------------------------------------
// Parameterizations

Parameterization rebit_parameterization(bool allow_mixed) {
    Parameterization p;
    p.name = allow_mixed ? "rebit-mixed" : "rebit-pure";
    p.theory = TheoryTag::real;
    p.message_dim = 2;
    p.allow_mixed_states = allow_mixed;
    const std::size_t per_state = allow_mixed ? 2 : 1;
    const std::size_t povm_count = kOutcomes * factor_params(2, false);
    p.param_count = kOutcomes * per_state + povm_count;
    p.decode = [allow_mixed, per_state, povm_count](std::span<const double> v) {
        std::vector<DensityMatrix> encoder;
        for (std::size_t x = 0; x < kOutcomes; ++x) {
            const double angle = v[x * per_state + (allow_mixed ? 1 : 0)];
            const double radius = allow_mixed ? std::pow(std::sin(v[x * per_state]), 2) : 1.0;
            encoder.push_back(DensityMatrix::trusted(real_disk_state(radius, angle)));
        }
        auto povm = congruence_povm(v.subspan(kOutcomes * per_state, povm_count), 2, kOutcomes, false);
        return Strategy{TheoryTag::real, std::move(encoder), Povm::trusted(std::move(povm)),
                        RMatrix::Identity(4, 4)};
    };
    return p;
}

Parameterization qubit_parameterization() {
    Parameterization p;
    p.name = "qubit";
    p.theory = TheoryTag::complex;
    p.message_dim = 2;
    const std::size_t povm_count = kOutcomes * factor_params(2, true);
    p.param_count = kOutcomes * 2 + povm_count;
    p.decode = [povm_count](std::span<const double> v) {
        std::vector<DensityMatrix> encoder;
        for (std::size_t x = 0; x < kOutcomes; ++x) {
            const double theta = v[2 * x];
            const double phi = v[2 * x + 1];
            CVector psi(2);
            psi << std::cos(theta / 2), std::sin(theta / 2) * std::polar(1.0, phi);
            encoder.push_back(DensityMatrix::trusted(psi * psi.adjoint()));
        }
        auto povm = congruence_povm(v.subspan(kOutcomes * 2, povm_count), 2, kOutcomes, true);
        return Strategy{TheoryTag::complex, std::move(encoder), Povm::trusted(std::move(povm)),
                        RMatrix::Identity(4, 4)};
    };
    return p;
}

Parameterization classical_bit_parameterization() {
    Parameterization p;
    p.name = "classical-bit";
    p.theory = TheoryTag::classical;
    p.message_dim = 2;
    p.param_count = 2 * kOutcomes + 2 * kOutcomes;
    p.decode = [](std::span<const double> v) {
        std::vector<DensityMatrix> encoder;
        for (std::size_t x = 0; x < kOutcomes; ++x) {
            const RVector q = squared_simplex(v.subspan(2 * x, 2));
            CMatrix rho = CMatrix::Zero(2, 2);
            rho(0, 0) = q(0);
            rho(1, 1) = q(1);
            encoder.push_back(DensityMatrix::trusted(std::move(rho)));
        }
        RMatrix r(2, 4);
        for (Eigen::Index w = 0; w < 2; ++w)
            r.row(w) = squared_simplex(v.subspan(2 * kOutcomes + 4 * static_cast<std::size_t>(w), 4)).transpose();
        return Strategy{TheoryTag::classical, std::move(encoder), Povm::computational(2), std::move(r)};
    };
    return p;
}

std::vector<double> rebit_parameters(const Strategy& strategy, bool allow_mixed) {
    const auto povm = collapsed_povm(strategy);
    std::vector<double> out;
    for (const auto& rho : strategy.encoder) {
        CVector psi = principal_vector(rho);
        // Remove the global phase so the vector is real.
        const Eigen::Index lead = std::abs(psi(0)) > std::abs(psi(1)) ? 0 : 1;
        psi *= std::conj(psi(lead)) / std::abs(psi(lead));
        if (allow_mixed) out.push_back(std::numbers::pi / 2);  // sin^2 = 1
        out.push_back(std::atan2(psi(1).real(), psi(0).real()));
    }
    for (const auto& e : povm) append_factor(out, psd_lower_factor(e), false);
    return out;
}

std::vector<double> qubit_parameters(const Strategy& strategy) {
    const auto povm = collapsed_povm(strategy);
    std::vector<double> out;
    for (const auto& rho : strategy.encoder) {
        const CVector psi = principal_vector(rho);
        out.push_back(2.0 * std::atan2(std::abs(psi(1)), std::abs(psi(0))));
        out.push_back(std::arg(psi(1)) - std::arg(psi(0)));
    }
    for (const auto& e : povm) append_factor(out, psd_lower_factor(e), true);
    return out;
}

// ---------------------------------------------------------------------------
// Search

void OptimizerConfig::validate() const {
    if (restarts < 1) throw std::invalid_argument("OptimizerConfig: restarts must be >= 1");
    if (!(convergence_tol > 0.0)) throw std::invalid_argument("OptimizerConfig: convergence_tol must be > 0");
    if (!(initial_step > 0.0) || !(fd_step > 0.0)) throw std::invalid_argument("OptimizerConfig: steps must be > 0");
    if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("OptimizerConfig: shrink must be in (0, 1)");
    if (max_iterations < 1) throw std::invalid_argument("OptimizerConfig: max_iterations must be >= 1");
}

double objective(const Parameterization& p, const GameSpec& spec, std::span<const double> params) {
    const double d = average_trace_distance(spec, realized_distribution(p.decode(params)));
    if (!std::isfinite(d)) throw std::runtime_error("objective: non-finite value from " + p.name);
    return d;
}

namespace {

class LocalSearch {
public:
    LocalSearch(const Parameterization& p, const GameSpec& spec, const OptimizerConfig& config, Rng& rng)
        : p_(p), spec_(spec), config_(config), rng_(rng), n_(p.param_count) {}

    RestartResult run(std::vector<double> x) {
        RestartResult result;
        double f = eval(x);
        if (config_.method == SearchMethod::finite_difference_descent) descend(x, f, result);
        pattern(x, f, result);
        result.final_d = f;
        result.params = std::move(x);
        result.evaluations = evaluations_;
        return result;
    }

private:
    double eval(std::span<const double> x) {
        ++evaluations_;
        return objective(p_, spec_, x);
    }

    void record(RestartResult& r, double f) const {
        ++r.iterations;
        if (config_.record_traces) r.trace.push_back(f);
    }

    /// w_x/2 (P~(y|x) - P(y|x)), so that d is the L1 norm of the vector.
    RVector residuals(std::span<const double> x) {
        ++evaluations_;
        const RealizedChannel realized = realized_distribution(p_.decode(x));
        const auto rows = spec_.target.rows();
        const auto cols = spec_.target.cols();
        RVector r(rows * cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j)
                r(i * cols + j) = 0.5 * spec_.weight(static_cast<std::size_t>(i)) * (realized.table(i, j) - spec_.target(i, j));
        return r;
    }

    // Damped Gauss-Newton on iteratively reweighted residuals: weights
    // 1/|r_i| turn the least-squares model into a local model of the L1
    // objective. The Jacobian is taken by central differences; a step is
    // kept only if the exact objective decreases, otherwise the damping
    // grows (i.e. the step shrinks) and the step is retried.
    void descend(std::vector<double>& x, double& f, RestartResult& r) {
        const auto n = static_cast<Eigen::Index>(n_);
        double damping = 1e-3;
        std::vector<double> probe(x), trial(n_);
        while (r.iterations < config_.max_iterations) {
            const RVector res = residuals(x);
            RMatrix jac(res.size(), n);
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto k = static_cast<std::size_t>(i);
                probe[k] = x[k] + config_.fd_step;
                const RVector up = residuals(probe);
                probe[k] = x[k] - config_.fd_step;
                const RVector down = residuals(probe);
                probe[k] = x[k];
                jac.col(i) = (up - down) / (2 * config_.fd_step);
            }
            const double floor = std::max(1e-14, 1e-6 * f);
            const RVector weight = res.cwiseAbs().cwiseMax(floor).cwiseInverse();
            const RMatrix jtw = jac.transpose() * weight.asDiagonal();
            const RMatrix normal = jtw * jac;
            const RVector rhs = -(jtw * res);
            const double scale = std::max(normal.diagonal().maxCoeff(), 1e-300);

            bool moved = false;
            double step_norm = 0.0;
            while (damping < 1e12) {
                RMatrix lhs = normal;
                lhs.diagonal().array() += damping * scale;
                const RVector delta = lhs.ldlt().solve(rhs);
                step_norm = delta.norm();
                if (!std::isfinite(step_norm) || step_norm < config_.convergence_tol) break;
                for (std::size_t k = 0; k < n_; ++k) trial[k] = x[k] + delta(static_cast<Eigen::Index>(k));
                const double ft = eval(trial);
                if (ft < f) {
                    x = trial;
                    probe = x;
                    f = ft;
                    damping = std::max(damping / 3.0, 1e-12);
                    moved = true;
                    break;
                }
                damping *= 1.0 / config_.shrink;
            }
            record(r, f);
            if (!moved || f == 0.0) break;
        }
    }

    // Compass search over a freshly rotated orthonormal frame each sweep, so
    // that no fixed coordinate system can trap it on a ridge of kinks.
    void pattern(std::vector<double>& x, double& f, RestartResult& r) {
        double delta = config_.initial_step;
        std::vector<double> trial(n_);
        while (r.iterations < config_.max_iterations && delta >= config_.convergence_tol && f > 0.0) {
            const RMatrix frame = random_frame();
            bool improved = false;
            for (Eigen::Index k = 0; k < frame.cols() && !improved; ++k) {
                for (double sign : {1.0, -1.0}) {
                    for (std::size_t i = 0; i < n_; ++i)
                        trial[i] = x[i] + sign * delta * frame(static_cast<Eigen::Index>(i), k);
                    const double ft = eval(trial);
                    if (ft < f) {
                        x = trial;
                        f = ft;
                        improved = true;
                        break;
                    }
                }
            }
            delta = improved ? std::min(delta * 2.0, config_.initial_step) : delta * config_.shrink;
            record(r, f);
        }
    }

    RMatrix random_frame() {
        const auto n = static_cast<Eigen::Index>(n_);
        RMatrix z(n, n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i) z(i, j) = rng_.normal();
        Eigen::HouseholderQR<RMatrix> qr(z);
        return qr.householderQ() * RMatrix::Identity(n, n);
    }

    const Parameterization& p_;
    const GameSpec& spec_;
    const OptimizerConfig& config_;
    Rng& rng_;
    std::size_t n_;
    std::size_t evaluations_ = 0;
};

}  // namespace

OptimizationResult minimize(const Parameterization& p, const GameSpec& spec, const OptimizerConfig& config) {
    config.validate();
    spec.validate();
    if (config.initial_params && config.initial_params->size() != p.param_count)
        throw std::invalid_argument("minimize: initial_params has the wrong length");

    OptimizationResult result;
    result.per_restart.resize(config.restarts);

    auto run_restart = [&](std::size_t index) {
        Rng rng(config.seed, index);
        std::vector<double> x0(p.param_count);
        if (index == 0 && config.initial_params) {
            x0 = *config.initial_params;
        } else {
            for (auto& v : x0) v = rng.uniform(-config.start_scale, config.start_scale);
        }
        LocalSearch search(p, spec, config, rng);
        result.per_restart[index] = search.run(std::move(x0));
    };

    unsigned workers = config.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.workers;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, config.restarts));
    if (workers <= 1) {
        for (std::size_t i = 0; i < config.restarts; ++i) run_restart(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t i = next++; i < config.restarts; i = next++) run_restart(i);
                    } catch (...) {
                        errors[w] = std::current_exception();
                        next = config.restarts;
                    }
                });
        }
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    result.best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < result.per_restart.size(); ++i) {
        const auto& r = result.per_restart[i];
        result.evaluations += r.evaluations;
        if (r.final_d < result.best_d) {
            result.best_d = r.final_d;
            result.best_params = r.params;
            result.best_restart = i;
        }
    }
    return result;
}

}  // namespace qgame
