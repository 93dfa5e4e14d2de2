#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "qgame/game.hpp"
#include "qgame/strategies.hpp"

using namespace qgame;

namespace {

RMatrix uniform_rows(Eigen::Index rows, Eigen::Index cols) { return RMatrix::Constant(rows, cols, 1.0 / cols); }

double max_row_tv(const RMatrix& a, const RMatrix& b) {
    double worst = 0.0;
    for (Eigen::Index x = 0; x < a.rows(); ++x) worst = std::max(worst, 0.5 * (a.row(x) - b.row(x)).cwiseAbs().sum());
    return worst;
}

}  // namespace

TEST(GameSpec, DefaultInstance) {
    const GameSpec spec = GameSpec::default_instance();
    EXPECT_EQ(spec.inputs, (std::vector<int>{0, 1, 2, 3}));
    EXPECT_EQ(spec.outputs, (std::vector<int>{0, 1, 2, 3}));
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) EXPECT_DOUBLE_EQ(spec.target(x, y), x == y ? 0.0 : 1.0 / 3);
    EXPECT_DOUBLE_EQ(spec.weight(2), 0.25);
}

TEST(GameSpec, ValidationRejectsBadShapesAndRows) {
    GameSpec spec = GameSpec::default_instance();
    spec.target(0, 1) = 0.5;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec = GameSpec::default_instance();
    spec.target(1, 0) = -0.1;
    spec.target(1, 2) += 0.1;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec = GameSpec::default_instance();
    spec.inputs.pop_back();
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec = GameSpec::default_instance();
    spec.input_weights = {0.5, 0.5, 0.5, -0.5};
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec = GameSpec::default_instance();
    spec.inputs = {0, 0, 1, 2};
    EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(Strategy, ValidateChecksShapesAndTheory) {
    Strategy s = qubit_strategy(SignBranch::plus);
    EXPECT_NO_THROW(s.validate());
    s.theory = TheoryTag::real;
    EXPECT_FALSE(s.theory_valid());
    EXPECT_THROW(s.validate(), std::invalid_argument);
    Strategy bad_r = qubit_strategy(SignBranch::plus);
    bad_r.post_processing(0, 0) += 0.1;
    EXPECT_THROW(bad_r.validate(), std::invalid_argument);
    Strategy bad_rows = qubit_strategy(SignBranch::plus);
    bad_rows.post_processing = RMatrix::Identity(3, 4);
    EXPECT_THROW(bad_rows.validate(), std::invalid_argument);
}

TEST(RealizedDistribution, DilatedStrategyHitsTarget) {
    const GameSpec spec = GameSpec::default_instance();
    for (SignBranch b : {SignBranch::plus, SignBranch::minus})
        EXPECT_LT((realized_distribution(dilated_strategy(b)).table - spec.target).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RealizedDistribution, UniformPostProcessingGivesUniformRows) {
    Strategy s = qubit_strategy(SignBranch::plus);
    s.post_processing = uniform_rows(4, 4);
    EXPECT_LT((realized_distribution(s).table - uniform_rows(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(RealizedDistribution, RebitRowThree) {
    const RMatrix t = realized_distribution(rebit_trio_strategy(RebitVariant::original)).table;
    const RVector expected = (RVector(4) << 1.0 / 3, 1.0 / 3, 0.0, 1.0 / 3).finished();
    EXPECT_LT((t.row(3).transpose() - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EffectivePovm, SumsToIdentity) {
    const auto m = effective_povm(qubit_strategy(SignBranch::minus));
    CMatrix total = CMatrix::Zero(2, 2);
    for (const auto& e : m) total += e;
    EXPECT_LT((total - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(AverageTraceDistance, KnownValues) {
    const GameSpec spec = GameSpec::default_instance();
    EXPECT_EQ(average_trace_distance(spec, {uniform_rows(4, 4)}), 0.25);
    EXPECT_EQ(average_trace_distance(spec, {spec.target}), 0.0);
    EXPECT_EQ(average_trace_distance(spec, realized_distribution(rebit_trio_strategy(RebitVariant::original))),
              1.0 / 12);
    EXPECT_THROW(average_trace_distance(spec, {uniform_rows(3, 4)}), std::invalid_argument);
}

TEST(AverageTraceDistance, HonorsInputWeights) {
    GameSpec spec = GameSpec::default_instance();
    spec.input_weights = {0.0, 0.0, 0.0, 1.0};
    EXPECT_NEAR(average_trace_distance(spec, realized_distribution(rebit_trio_strategy(RebitVariant::original))),
                1.0 / 3, 1e-15);
}

TEST(ForbiddenEventRate, CatalogValues) {
    const GameSpec spec = GameSpec::default_instance();
    EXPECT_LT((forbidden_event_rate(spec, baseline_d0()).array() - 0.25).abs().maxCoeff(), 1e-15);
    const RVector orig = forbidden_event_rate(spec, rebit_trio_strategy(RebitVariant::original));
    const RVector sym = forbidden_event_rate(spec, rebit_trio_strategy(RebitVariant::symmetrized));
    EXPECT_LT((orig - (RVector(4) << 0, 0, 0, 1.0 / 3).finished()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((sym - (RVector(4) << 0, 0, 1.0 / 6, 1.0 / 6).finished()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT(forbidden_event_rate(spec, qubit_strategy(SignBranch::plus)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ForbiddenEventRate, MatchesByLabel) {
    GameSpec spec = GameSpec::default_instance();
    spec.outputs = {3, 2, 1, 0};
    // Forbidden output for input label x is now column 3 - x.
    const RVector rate = forbidden_event_rate(spec, rebit_trio_strategy(RebitVariant::original));
    EXPECT_NEAR(rate(0), 1.0 / 3, 1e-15);
    EXPECT_NEAR(rate(3), 1.0 / 3, 1e-15);
}

TEST(SimulateRounds, MillionRoundsWithinTolerance) {
    const SimulationResult r = simulate_rounds(qubit_strategy(SignBranch::plus), 1'000'000, 0);
    EXPECT_EQ(r.rounds_per_input, 1'000'000u);
    EXPECT_LT(max_row_tv(r.empirical.table, GameSpec::default_instance().target), 0.005);
    EXPECT_LT(r.max_tv_deviation, 0.005);
}

TEST(SimulateRounds, SingleRoundRowsAreOneHot) {
    const SimulationResult r = simulate_rounds(rebit_trio_strategy(RebitVariant::symmetrized), 1, 11);
    for (Eigen::Index x = 0; x < r.empirical.table.rows(); ++x) {
        EXPECT_DOUBLE_EQ(r.empirical.table.row(x).sum(), 1.0);
        EXPECT_DOUBLE_EQ(r.empirical.table.row(x).maxCoeff(), 1.0);
    }
}

TEST(SimulateRounds, DeterministicAndWorkerIndependent) {
    const Strategy s = qubit_strategy(SignBranch::minus);
    const SimulationResult a = simulate_rounds(s, 200'000, 7, 1);
    const SimulationResult b = simulate_rounds(s, 200'000, 7, 3);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_TRUE(a.empirical.table == b.empirical.table);
    EXPECT_NE(simulate_rounds(s, 200'000, 8, 1).counts, a.counts);
}

TEST(SimulateRounds, ErrorShrinksAsInverseSquareRoot) {
    // Median deviation over seeds should fall by about sqrt(100) = 10.
    const Strategy s = qubit_strategy(SignBranch::plus);
    auto median_dev = [&](std::uint64_t n) {
        std::vector<double> devs;
        for (std::uint64_t seed = 0; seed < 20; ++seed) devs.push_back(simulate_rounds(s, n, 1000 + seed).max_tv_deviation);
        std::nth_element(devs.begin(), devs.begin() + 10, devs.end());
        return devs[10];
    };
    const double ratio = median_dev(1000) / median_dev(100000);
    EXPECT_GT(ratio, 5.0);
    EXPECT_LT(ratio, 20.0);
}

TEST(SimulateRounds, ZeroRoundsThrows) {
    EXPECT_THROW(simulate_rounds(baseline_d0(), 0, 1), std::invalid_argument);
}

TEST(VerifyStrategy, CatalogReports) {
    const GameSpec spec = GameSpec::default_instance();
    const VerifyReport q = verify_strategy(spec, qubit_strategy(SignBranch::plus));
    EXPECT_TRUE(q.exact);
    EXPECT_LT(q.d, 1e-12);
    EXPECT_EQ(q.cost, 1.0);
    EXPECT_TRUE(q.theory_valid);
    EXPECT_NEAR(q.min_purity, 1.0, 1e-12);

    const VerifyReport b = verify_strategy(spec, baseline_d0());
    EXPECT_FALSE(b.exact);
    EXPECT_EQ(b.d, 0.25);
    EXPECT_EQ(b.cost, 0.0);

    const VerifyReport r = verify_strategy(spec, rebit_trio_strategy(RebitVariant::original));
    EXPECT_FALSE(r.exact);
    EXPECT_EQ(r.d, 1.0 / 12);
    EXPECT_TRUE(r.theory_valid);
}

TEST(VerifyStrategy, AlphabetMismatchThrows) {
    GameSpec spec;
    spec.inputs = {0, 1};
    spec.outputs = {0, 1};
    spec.target = RMatrix::Constant(2, 2, 0.5);
    EXPECT_THROW(verify_strategy(spec, qubit_strategy(SignBranch::plus)), std::invalid_argument);
}

TEST(NumericalRank, Examples) {
    EXPECT_EQ(numerical_rank(GameSpec::default_instance().target), 4);
    EXPECT_EQ(numerical_rank(uniform_rows(4, 4)), 1);
    EXPECT_EQ(numerical_rank(RMatrix::Zero(3, 3)), 0);
}

TEST(BestDecoderRow, SingleInputIsFree) {
    const GameSpec spec = GameSpec::default_instance();
    const auto [cost, row] = best_decoder_row(spec, {2});
    EXPECT_NEAR(cost, 0.0, 1e-15);
    EXPECT_LT((row - spec.target.row(2).transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BestDecoderRow, PairedInputs) {
    // Rows (0,1/3,1/3,1/3) and (1/3,0,1/3,1/3): best r costs 1/3 * w = 1/12 in total.
    const GameSpec spec = GameSpec::default_instance();
    const auto [cost, row] = best_decoder_row(spec, {0, 1});
    EXPECT_NEAR(cost, 1.0 / 12, 1e-15);
    EXPECT_NEAR(row.sum(), 1.0, 1e-15);
    EXPECT_GE(row.minCoeff(), 0.0);
}

TEST(BestDecoderRow, BruteForceAgreement) {
    // Grid search over the simplex for the group {0,1,2}.
    const GameSpec spec = GameSpec::default_instance();
    const auto [cost, row] = best_decoder_row(spec, {0, 1, 2});
    double best = 1e9;
    const int n = 24;
    for (int a = 0; a <= n; ++a)
        for (int b = 0; a + b <= n; ++b)
            for (int c = 0; a + b + c <= n; ++c) {
                RVector r(4);
                r << a, b, c, n - a - b - c;
                r /= n;
                double v = 0.0;
                for (int x : {0, 1, 2}) v += 0.25 * 0.5 * (spec.target.row(x).transpose() - r).cwiseAbs().sum();
                best = std::min(best, v);
            }
    EXPECT_LE(cost, best + 1e-12);
}

TEST(ClassicalBitInfeasibility, DefaultInstance) {
    const InfeasibilityReport r = classical_bit_exact_infeasibility(GameSpec::default_instance());
    EXPECT_EQ(r.target_rank, 4);
    EXPECT_FALSE(r.feasible);
    EXPECT_GT(r.best_deterministic_d, 0.0);
    EXPECT_NEAR(r.best_deterministic_d, 1.0 / 6, 1e-12);
    ASSERT_EQ(r.best_encoder.size(), 4u);
    EXPECT_EQ(r.best_decoder.rows(), 2);
}

TEST(ClassicalBitInfeasibility, IdenticalRowsAreFeasible) {
    GameSpec spec = GameSpec::default_instance();
    spec.target = RMatrix::Constant(4, 4, 0.25);
    const InfeasibilityReport r = classical_bit_exact_infeasibility(spec);
    EXPECT_EQ(r.target_rank, 1);
    EXPECT_TRUE(r.feasible);
    EXPECT_NEAR(r.best_deterministic_d, 0.0, 1e-15);
}
