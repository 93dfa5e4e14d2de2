#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qgame/embedding.hpp"
#include "qgame/reproduce.hpp"
#include "qgame/strategies.hpp"

using namespace qgame;

TEST(StatesFromGram, OverlapTableFactorsIntoQubits) {
    for (SignBranch b : {SignBranch::plus, SignBranch::minus}) {
        const GramMatrix g = overlap_table(b);
        const auto states = states_from_gram(g);
        ASSERT_EQ(states.size(), 4u);
        for (const auto& s : states) EXPECT_EQ(s.dim(), 2);
        EXPECT_LT((gram_matrix(states).entries - g.entries).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(StatesFromGram, IdentityGivesOrthonormalBasis) {
    const auto states = states_from_gram({CMatrix::Identity(3, 3)});
    ASSERT_EQ(states.size(), 3u);
    EXPECT_EQ(states[0].dim(), 3);
    EXPECT_LT((gram_matrix(states).entries - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(StatesFromGram, RejectsInvalidInput) {
    CMatrix not_psd(2, 2);
    not_psd << 1, 2, 2, 1;
    EXPECT_THROW(states_from_gram({not_psd}), std::invalid_argument);
    CMatrix not_herm(2, 2);
    not_herm << 1, 0.5, 0.2, 1;
    EXPECT_THROW(states_from_gram({not_herm}), std::invalid_argument);
    EXPECT_THROW(states_from_gram({CMatrix::Zero(2, 2)}), std::invalid_argument);
}

TEST(RealAlignedStates, RebitTrioIsRealInTwoDimensions) {
    const auto trio = rebit_trio_states();
    const std::vector<PureState> three(trio.begin(), trio.begin() + 3);
    const RealAlignment a = real_aligned_states(gram_matrix(three));
    ASSERT_EQ(a.states.size(), 3u);
    EXPECT_EQ(a.states[0].dim(), 2);
    EXPECT_LT(a.max_imag, 1e-9);
    // Same states up to per-state phases: moduli and the cycle product agree.
    const CMatrix g = gram_matrix(a.states).entries, h = gram_matrix(three).entries;
    EXPECT_LT((g.cwiseAbs() - h.cwiseAbs()).maxCoeff(), 1e-12);
    EXPECT_NEAR(std::abs(g(0, 1) * g(1, 2) * g(2, 0) - h(0, 1) * h(1, 2) * h(2, 0)), 0.0, 1e-12);
}

TEST(RealAlignedStates, ComplexTableStaysComplex) {
    EXPECT_GT(real_aligned_states(overlap_table(SignBranch::plus)).max_imag, 1e-3);
}

TEST(OverlapTable, KnownEntries) {
    const CMatrix g = overlap_table(SignBranch::plus).entries;
    EXPECT_NEAR(std::abs(g(0, 1) - std::polar(1.0 / std::sqrt(3.0), std::numbers::pi / 6)), 0.0, 1e-15);
    for (Eigen::Index a = 0; a < 4; ++a) {
        EXPECT_NEAR(std::abs(g(a, a) - 1.0), 0.0, 1e-15);
        for (Eigen::Index b = 0; b < 4; ++b) EXPECT_NEAR(std::abs(g(a, b) - std::conj(g(b, a))), 0.0, 1e-15);
    }
    EXPECT_LT((overlap_table(SignBranch::minus).entries - g.conjugate()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BlochVector, BasisStates) {
    const BlochVector zero = bloch_vector(PureState(CVector(CVector::Unit(2, 0))));
    EXPECT_DOUBLE_EQ(zero.z, 1.0);
    EXPECT_DOUBLE_EQ(zero.x, 0.0);
    const double k = 1.0 / std::sqrt(2.0);
    const BlochVector plus = bloch_vector(PureState(CVector((CVector(2) << k, k).finished())));
    EXPECT_NEAR(plus.x, 1.0, 1e-15);
    EXPECT_NEAR(plus.y, 0.0, 1e-15);
    EXPECT_NEAR(plus.z, 0.0, 1e-15);
    const BlochVector plus_i = bloch_vector(PureState(CVector((CVector(2) << k, Complex(0, k)).finished())));
    EXPECT_NEAR(plus_i.y, 1.0, 1e-15);
}

TEST(BlochVector, QubitStateOne) {
    const BlochVector v = bloch_vector(qubit_states(SignBranch::plus)[1]);
    EXPECT_NEAR(v.z, -1.0 / 3, 1e-15);
    EXPECT_NEAR(v.x * v.x + v.y * v.y, 8.0 / 9, 1e-15);
    EXPECT_NEAR(v.norm(), 1.0, 1e-15);
}

TEST(BlochVector, MixedStateAndWrongDimension) {
    const BlochVector v = bloch_vector(DensityMatrix(CMatrix(CMatrix::Identity(2, 2) * 0.5)));
    EXPECT_NEAR(v.norm(), 0.0, 1e-15);
    EXPECT_THROW(bloch_vector(PureState(CVector(CVector::Unit(3, 0)))), std::invalid_argument);
}

TEST(GreatCircle, QubitTriplesLockedDeterminants) {
    for (SignBranch b : {SignBranch::plus, SignBranch::minus}) {
        const GreatCircleReport r = great_circle_test(qubit_states(b));
        ASSERT_EQ(r.triples.size(), 4u);
        EXPECT_FALSE(r.all_four_coplanar);
        for (const auto& t : r.triples) {
            EXPECT_FALSE(t.coplanar);
            EXPECT_GT(t.abs_det, 1e-6);
            EXPECT_NEAR(t.abs_det, kQubitTripleAbsDet, 1e-12);
        }
    }
    EXPECT_NEAR(kQubitTripleAbsDet, 4.0 / (3.0 * std::sqrt(3.0)), 1e-15);
}

TEST(GreatCircle, RebitStatesAreCoplanar) {
    const GreatCircleReport r = great_circle_test(rebit_embedded_states());
    EXPECT_TRUE(r.all_four_coplanar);
    for (const auto& t : r.triples) EXPECT_TRUE(t.coplanar);
}

TEST(GreatCircle, RepeatedStateGivesZeroDeterminant) {
    auto q = qubit_states(SignBranch::plus);
    q[3] = q[0];
    const GreatCircleReport r = great_circle_test(q);
    for (const auto& t : r.triples) {
        const bool has0 = std::find(t.labels.begin(), t.labels.end(), 0u) != t.labels.end();
        const bool has3 = std::find(t.labels.begin(), t.labels.end(), 3u) != t.labels.end();
        if (has0 && has3) EXPECT_NEAR(t.abs_det, 0.0, 1e-15);
        else EXPECT_GT(t.abs_det, 1e-6);
    }
    EXPECT_THROW(great_circle_test(std::vector<PureState>(q.begin(), q.begin() + 3)), std::invalid_argument);
}

TEST(BlochCsv, HeaderAndRows) {
    std::ostringstream os;
    write_bloch_csv(os, qubit_states(SignBranch::plus));
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "label,x,y,z");
    std::getline(in, line);
    EXPECT_EQ(line, "0,0,0,1");
    int rows = 1;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 4);
}

TEST(SignBranch, StringRoundTrip) {
    EXPECT_EQ(branch_from_string("plus"), SignBranch::plus);
    EXPECT_EQ(branch_from_string("-"), SignBranch::minus);
    EXPECT_EQ(to_string(SignBranch::minus), "minus");
    EXPECT_THROW(branch_from_string("up"), std::invalid_argument);
}
