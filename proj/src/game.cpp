#include "qgame/game.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qgame/rng.hpp"

namespace qgame {

// ---------------------------------------------------------------------------
// GameSpec

GameSpec GameSpec::default_instance() {
    GameSpec spec;
    spec.inputs = {0, 1, 2, 3};
    spec.outputs = {0, 1, 2, 3};
    spec.target = (RMatrix::Ones(4, 4) - RMatrix::Identity(4, 4)) / 3.0;
    return spec;
}

void GameSpec::validate() const {
    if (inputs.empty() || outputs.empty()) throw std::invalid_argument("GameSpec: empty alphabet");
    if (target.rows() != static_cast<Eigen::Index>(inputs.size()) ||
        target.cols() != static_cast<Eigen::Index>(outputs.size()))
        throw std::invalid_argument("GameSpec: target shape does not match alphabets");
    for (const auto* labels : {&inputs, &outputs}) {
        std::vector<int> sorted = *labels;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("GameSpec: duplicate alphabet label");
    }
    for (Eigen::Index x = 0; x < target.rows(); ++x) {
        if ((target.row(x).array() < 0.0).any() || !target.row(x).allFinite())
            throw std::invalid_argument("GameSpec: negative or non-finite target entry");
        if (std::abs(target.row(x).sum() - 1.0) > kStochasticTol)
            throw std::invalid_argument("GameSpec: target row does not sum to 1");
    }
    if (!input_weights.empty()) {
        if (input_weights.size() != inputs.size())
            throw std::invalid_argument("GameSpec: input_weights size mismatch");
        double total = 0.0;
        for (double w : input_weights) {
            if (w < 0.0) throw std::invalid_argument("GameSpec: negative input weight");
            total += w;
        }
        if (std::abs(total - 1.0) > kStochasticTol) throw std::invalid_argument("GameSpec: input_weights do not sum to 1");
    }
}

double GameSpec::weight(std::size_t x) const {
    return input_weights.empty() ? 1.0 / static_cast<double>(inputs.size()) : input_weights[x];
}

// ---------------------------------------------------------------------------
// Strategy

void Strategy::validate(double tol) const {
    if (encoder.empty()) throw std::invalid_argument("Strategy: empty encoder");
    const auto dim = encoder.front().dim();
    for (const auto& s : encoder)
        if (s.dim() != dim) throw std::invalid_argument("Strategy: encoder states differ in dimension");
    if (measurement.dim() != dim) throw std::invalid_argument("Strategy: decoder dimension does not match encoder");
    if (post_processing.rows() != static_cast<Eigen::Index>(measurement.size()))
        throw std::invalid_argument("Strategy: post-processing rows do not match measurement outcomes");
    for (Eigen::Index m = 0; m < post_processing.rows(); ++m) {
        if ((post_processing.row(m).array() < 0.0).any())
            throw std::invalid_argument("Strategy: negative post-processing entry");
        if (std::abs(post_processing.row(m).sum() - 1.0) > kStochasticTol)
            throw std::invalid_argument("Strategy: post-processing row does not sum to 1");
    }
    if (!theory_valid(tol)) throw std::invalid_argument("Strategy: violates its theory tag");
}

bool Strategy::theory_valid(double tol) const {
    for (const auto& s : encoder)
        if (!satisfies_theory(s.matrix(), theory, tol)) return false;
    for (const auto& e : measurement.elements())
        if (!satisfies_theory(e, theory, tol)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Channels

RealizedChannel realized_distribution(const Strategy& strategy) {
    if (strategy.encoder.empty()) throw std::invalid_argument("realized_distribution: empty encoder");
    const auto n_in = static_cast<Eigen::Index>(strategy.encoder.size());
    RMatrix born(n_in, static_cast<Eigen::Index>(strategy.measurement.size()));
    for (Eigen::Index x = 0; x < n_in; ++x)
        born.row(x) = born_probabilities(strategy.encoder[x], strategy.measurement).transpose();
    if (born.cols() != strategy.post_processing.rows())
        throw std::invalid_argument("realized_distribution: post-processing shape mismatch");
    return {born * strategy.post_processing};
}

std::vector<CMatrix> effective_povm(const Strategy& strategy) {
    const auto dim = strategy.measurement.dim();
    std::vector<CMatrix> out(static_cast<std::size_t>(strategy.output_count()), CMatrix::Zero(dim, dim));
    const auto& elements = strategy.measurement.elements();
    for (std::size_t m = 0; m < elements.size(); ++m)
        for (Eigen::Index y = 0; y < strategy.output_count(); ++y)
            out[static_cast<std::size_t>(y)] += strategy.post_processing(static_cast<Eigen::Index>(m), y) * elements[m];
    return out;
}

double average_trace_distance(const GameSpec& spec, const RealizedChannel& realized) {
    if (realized.table.rows() != spec.target.rows() || realized.table.cols() != spec.target.cols())
        throw std::invalid_argument("average_trace_distance: alphabet mismatch");
    double d = 0.0;
    for (Eigen::Index x = 0; x < spec.target.rows(); ++x)
        // TV as the positive-part sum; equals half the L1 norm for normalized rows.
        d += spec.weight(static_cast<std::size_t>(x)) *
             (realized.table.row(x) - spec.target.row(x)).cwiseMax(0.0).sum();
    return d;
}

RVector forbidden_event_rate(const GameSpec& spec, const Strategy& strategy) {
    const RealizedChannel realized = realized_distribution(strategy);
    if (realized.table.rows() != static_cast<Eigen::Index>(spec.inputs.size()) ||
        realized.table.cols() != static_cast<Eigen::Index>(spec.outputs.size()))
        throw std::invalid_argument("forbidden_event_rate: alphabet mismatch");
    RVector rate(static_cast<Eigen::Index>(spec.inputs.size()));
    for (std::size_t x = 0; x < spec.inputs.size(); ++x) {
        auto it = std::find(spec.outputs.begin(), spec.outputs.end(), spec.inputs[x]);
        if (it == spec.outputs.end()) throw std::invalid_argument("forbidden_event_rate: input label missing from outputs");
        rate(static_cast<Eigen::Index>(x)) = realized.table(static_cast<Eigen::Index>(x), it - spec.outputs.begin());
    }
    return rate;
}

// ---------------------------------------------------------------------------
// Monte Carlo

namespace {

constexpr std::uint64_t kShardRounds = 1 << 16;

std::size_t sample_index(const RVector& cdf, double u) {
    // First bin whose cumulative mass exceeds u; trailing zero-mass bins are never picked.
    for (Eigen::Index k = 0; k < cdf.size(); ++k)
        if (u < cdf(k)) return static_cast<std::size_t>(k);
    Eigen::Index last = cdf.size() - 1;
    while (last > 0 && cdf(last) == cdf(last - 1)) --last;
    return static_cast<std::size_t>(last);
}

RVector cumulative(const RVector& p) {
    RVector c(p.size());
    double acc = 0.0;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        acc += std::max(p(k), 0.0);
        c(k) = acc;
    }
    if (acc > 0.0) c /= acc;
    return c;
}

}  // namespace

SimulationResult simulate_rounds(const Strategy& strategy, std::uint64_t rounds_per_input, std::uint64_t seed,
                                 unsigned workers) {
    if (rounds_per_input < 1) throw std::invalid_argument("simulate_rounds: rounds_per_input must be >= 1");
    const std::size_t n_in = strategy.encoder.size();
    const auto n_out = static_cast<std::size_t>(strategy.output_count());

    std::vector<RVector> born_cdf(n_in);
    for (std::size_t x = 0; x < n_in; ++x)
        born_cdf[x] = cumulative(born_probabilities(strategy.encoder[x], strategy.measurement));
    std::vector<RVector> post_cdf(static_cast<std::size_t>(strategy.post_processing.rows()));
    for (std::size_t m = 0; m < post_cdf.size(); ++m)
        post_cdf[m] = cumulative(strategy.post_processing.row(static_cast<Eigen::Index>(m)).transpose());

    const std::uint64_t shards_per_input = (rounds_per_input + kShardRounds - 1) / kShardRounds;
    const std::uint64_t total_shards = shards_per_input * n_in;
    std::vector<std::vector<std::uint64_t>> shard_counts(total_shards, std::vector<std::uint64_t>(n_out, 0));

    auto run_shard = [&](std::uint64_t shard) {
        const std::size_t x = shard / shards_per_input;
        const std::uint64_t local = shard % shards_per_input;
        const std::uint64_t begin = local * kShardRounds;
        const std::uint64_t end = std::min(rounds_per_input, begin + kShardRounds);
        Rng rng(seed, shard);
        auto& counts = shard_counts[shard];
        for (std::uint64_t r = begin; r < end; ++r) {
            const std::size_t m = sample_index(born_cdf[x], rng.uniform());
            const std::size_t y = sample_index(post_cdf[m], rng.uniform());
            ++counts[y];
        }
    };

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, total_shards));
    if (workers <= 1) {
        for (std::uint64_t s = 0; s < total_shards; ++s) run_shard(s);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::uint64_t s = next++; s < total_shards; s = next++) run_shard(s);
            });
    }

    SimulationResult result;
    result.rounds_per_input = rounds_per_input;
    result.counts.assign(n_in, std::vector<std::uint64_t>(n_out, 0));
    for (std::uint64_t s = 0; s < total_shards; ++s)
        for (std::size_t y = 0; y < n_out; ++y) result.counts[s / shards_per_input][y] += shard_counts[s][y];

    result.empirical.table.resize(static_cast<Eigen::Index>(n_in), static_cast<Eigen::Index>(n_out));
    for (std::size_t x = 0; x < n_in; ++x)
        for (std::size_t y = 0; y < n_out; ++y)
            result.empirical.table(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) =
                static_cast<double>(result.counts[x][y]) / static_cast<double>(rounds_per_input);

    const RealizedChannel exact = realized_distribution(strategy);
    for (Eigen::Index x = 0; x < exact.table.rows(); ++x)
        result.max_tv_deviation = std::max(
            result.max_tv_deviation, 0.5 * (exact.table.row(x) - result.empirical.table.row(x)).cwiseAbs().sum());
    return result;
}

// ---------------------------------------------------------------------------
// Verification

VerifyReport verify_strategy(const GameSpec& spec, const Strategy& strategy, double tol) {
    VerifyReport report;
    report.realized = realized_distribution(strategy);
    report.d = average_trace_distance(spec, report.realized);
    report.exact = report.d < tol;
    report.cost = communication_cost(strategy.encoder);
    report.theory_valid = strategy.theory_valid();
    report.min_purity = std::numeric_limits<double>::infinity();
    for (const auto& s : strategy.encoder) report.min_purity = std::min(report.min_purity, purity(s));
    return report;
}

int numerical_rank(const RMatrix& m, double rel_tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<RMatrix> svd(m);
    const RVector sv = svd.singularValues();
    if (sv(0) <= 0.0) return 0;
    return static_cast<int>((sv.array() > rel_tol * sv(0)).count());
}

std::pair<double, RVector> best_decoder_row(const GameSpec& spec, const std::vector<std::size_t>& group) {
    const auto n_out = spec.target.cols();
    RVector r = RVector::Zero(n_out);
    if (group.empty()) {
        r.setConstant(1.0 / static_cast<double>(n_out));
        return {0.0, r};
    }
    // The objective is separable, sum_y g_y(r_y), with each g_y(t) =
    // 1/2 sum_x w_x |P(y|x) - t| convex piecewise linear. Pouring the unit
    // mass into segments in order of increasing slope is exact.
    struct Segment {
        double slope;
        double length;
        Eigen::Index y;
    };
    std::vector<Segment> segments;
    double base = 0.0;
    double total_weight = 0.0;
    for (auto x : group) total_weight += spec.weight(x);
    for (Eigen::Index y = 0; y < n_out; ++y) {
        std::vector<std::pair<double, double>> points;  // (P(y|x), w_x)
        for (auto x : group) {
            points.emplace_back(spec.target(static_cast<Eigen::Index>(x), y), spec.weight(x));
            base += 0.5 * spec.weight(x) * spec.target(static_cast<Eigen::Index>(x), y);
        }
        std::sort(points.begin(), points.end());
        double left = 0.0;
        double below = 0.0;  // weight of breakpoints <= left
        std::size_t k = 0;
        while (k < points.size() && points[k].first <= left) below += points[k++].second;
        while (true) {
            const double right = k < points.size() ? points[k].first : std::numeric_limits<double>::infinity();
            segments.push_back({0.5 * (below - (total_weight - below)), right - left, y});
            if (k == points.size()) break;
            left = right;
            while (k < points.size() && points[k].first <= left) below += points[k++].second;
        }
    }
    std::stable_sort(segments.begin(), segments.end(),
                     [](const Segment& a, const Segment& b) { return a.slope < b.slope; });
    double remaining = 1.0;
    double cost = base;
    for (const auto& seg : segments) {
        if (remaining <= 0.0) break;
        const double take = std::min(remaining, seg.length);
        r(seg.y) += take;
        cost += seg.slope * take;
        remaining -= take;
    }
    return {cost, r};
}

InfeasibilityReport classical_bit_exact_infeasibility(const GameSpec& spec) {
    spec.validate();
    const std::size_t n_in = spec.inputs.size();
    if (n_in > 20) throw std::invalid_argument("classical_bit_exact_infeasibility: too many inputs to enumerate");
    InfeasibilityReport report;
    report.target_rank = numerical_rank(spec.target);
    // Stochastic matrices of rank <= 2 always admit a nonnegative rank-2 factorisation.
    report.feasible = report.target_rank <= 2;
    report.best_deterministic_d = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n_in); ++mask) {
        std::vector<std::size_t> groups[2];
        std::vector<int> encoder(n_in);
        for (std::size_t x = 0; x < n_in; ++x) {
            const int w = static_cast<int>((mask >> x) & 1U);
            encoder[x] = w;
            groups[w].push_back(x);
        }
        auto [c0, r0] = best_decoder_row(spec, groups[0]);
        auto [c1, r1] = best_decoder_row(spec, groups[1]);
        if (c0 + c1 < report.best_deterministic_d - 1e-15) {
            report.best_deterministic_d = c0 + c1;
            report.best_encoder = encoder;
            report.best_decoder.resize(2, spec.target.cols());
            report.best_decoder.row(0) = r0.transpose();
            report.best_decoder.row(1) = r1.transpose();
        }
    }
    return report;
}

}  // namespace qgame
