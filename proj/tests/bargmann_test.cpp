#include <gtest/gtest.h>

#include <cmath>

#include "qgame/bargmann.hpp"
#include "qgame/properties.hpp"
#include "qgame/strategies.hpp"

using namespace qgame;

namespace {

const double kMag = 1.0 / (3.0 * std::sqrt(3.0));

std::vector<DensityMatrix> qubit_densities(SignBranch b) { return to_density(qubit_states(b)); }

}  // namespace

TEST(InvariantIndex, StoresSmallestRotation) {
    EXPECT_EQ(InvariantIndex({2, 0, 1}).labels(), (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(InvariantIndex({1, 3, 0, 2}).labels(), (std::vector<std::size_t>{0, 2, 1, 3}));
    EXPECT_NE(InvariantIndex({0, 1, 2}), InvariantIndex({0, 2, 1}));
    EXPECT_TRUE(InvariantIndex({1, 0, 1}).has_repeats());
    EXPECT_FALSE(InvariantIndex({1, 0, 2}).has_repeats());
}

TEST(InvariantIndex, EmptyThrows) { EXPECT_THROW(InvariantIndex({}), std::invalid_argument); }

TEST(BargmannValue, QubitWitnessValue) {
    const auto rho = qubit_densities(SignBranch::plus);
    const Complex v = bargmann_value(rho, InvariantIndex({0, 1, 2})).value;
    EXPECT_NEAR(v.real(), 0.0, 1e-12);
    EXPECT_NEAR(v.imag(), -kMag, 1e-12);
    EXPECT_NEAR(v.imag(), -0.192450, 1e-6);
}

TEST(BargmannValue, MinusBranchIsConjugate) {
    const Complex p = bargmann_value(qubit_densities(SignBranch::plus), InvariantIndex({0, 1, 2})).value;
    const Complex m = bargmann_value(qubit_densities(SignBranch::minus), InvariantIndex({0, 1, 2})).value;
    EXPECT_NEAR(std::abs(m - std::conj(p)), 0.0, 1e-12);
}

TEST(BargmannValue, FirstOrderIsTrace) {
    const auto rho = qubit_densities(SignBranch::plus);
    for (std::size_t k = 0; k < 4; ++k)
        EXPECT_NEAR(std::abs(bargmann_value(rho, InvariantIndex({k})).value - 1.0), 0.0, 1e-14);
}

TEST(BargmannValue, RebitTrioIsMinusOneEighth) {
    const auto rho = to_density(rebit_trio_states());
    EXPECT_NEAR(std::abs(bargmann_value(rho, InvariantIndex({0, 1, 2})).value + 0.125), 0.0, 1e-15);
}

TEST(BargmannValue, PureAndMixedRoutesAgree) {
    const auto psi = qubit_states(SignBranch::plus);
    const auto rho = to_density(psi);
    for (const auto& idx : canonical_indices(4, 4, true)) {
        const Complex a = bargmann_value(psi, idx).value;
        const Complex b = bargmann_value(rho, idx).value;
        EXPECT_NEAR(std::abs(a - b), 0.0, 1e-12);
    }
}

TEST(BargmannValue, CyclicRotationsAgreeAndReversalConjugates) {
    const auto rho = qubit_densities(SignBranch::minus);
    const Complex v = bargmann_value(rho, InvariantIndex({1, 3, 2})).value;
    EXPECT_EQ(bargmann_value(rho, InvariantIndex({3, 2, 1})).value, v);
    EXPECT_EQ(bargmann_value(rho, InvariantIndex({2, 1, 3})).value, v);
    EXPECT_NEAR(std::abs(bargmann_value(rho, InvariantIndex({1, 2, 3})).value - std::conj(v)), 0.0, 1e-14);
}

TEST(BargmannValue, OutOfRangeLabelThrows) {
    const auto rho = qubit_densities(SignBranch::plus);
    EXPECT_THROW(bargmann_value(rho, InvariantIndex({0, 4})), std::out_of_range);
}

TEST(BargmannValue, DimensionMismatchThrows) {
    std::vector<DensityMatrix> mixed{DensityMatrix(PureState(CVector(CVector::Unit(2, 0)))),
                                     DensityMatrix(PureState(CVector(CVector::Unit(3, 0))))};
    EXPECT_THROW(bargmann_value(mixed, InvariantIndex({0, 1})), std::invalid_argument);
}

TEST(CanonicalIndices, Counts) {
    EXPECT_EQ(canonical_indices(4, 3, false).size(), 8u);
    EXPECT_EQ(canonical_indices(4, 1, false).size(), 4u);
    EXPECT_EQ(canonical_indices(4, 2, false).size(), 6u);
    // Necklaces of length 3 over 4 letters: (4^3 + 2*4) / 3.
    EXPECT_EQ(canonical_indices(4, 3, true).size(), 24u);
    EXPECT_TRUE(canonical_indices(2, 3, false).empty());
}

TEST(CanonicalIndices, SortedAndUnique) {
    const auto idx = canonical_indices(4, 4, true);
    for (std::size_t i = 1; i < idx.size(); ++i) EXPECT_LT(idx[i - 1], idx[i]);
}

TEST(EnumerateInvariants, EightThirdOrderWithSignPattern) {
    const std::vector<std::vector<std::size_t>> negative{{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
    for (SignBranch b : {SignBranch::plus, SignBranch::minus}) {
        const auto all = enumerate_invariants(qubit_densities(b), 3, false);
        ASSERT_EQ(all.size(), 8u);
        int neg = 0;
        for (const auto& inv : all) {
            const bool listed = std::any_of(negative.begin(), negative.end(),
                                            [&](const auto& l) { return InvariantIndex(l) == inv.index; });
            const double expected = (listed ? -1.0 : 1.0) * sign_of(b) * kMag;
            EXPECT_NEAR(inv.value.real(), 0.0, 1e-12);
            EXPECT_NEAR(inv.value.imag(), expected, 1e-12);
            neg += inv.value.imag() < 0;
        }
        EXPECT_EQ(neg, 4);
    }
}

TEST(EnumerateInvariants, FirstOrderAllOnes) {
    const auto all = enumerate_invariants(qubit_densities(SignBranch::plus), 1, false);
    ASSERT_EQ(all.size(), 4u);
    for (const auto& inv : all) EXPECT_NEAR(std::abs(inv.value - 1.0), 0.0, 1e-14);
}

TEST(ImaginarityWitness, QubitStatesWitnessAtFirstTriple) {
    for (SignBranch b : {SignBranch::plus, SignBranch::minus}) {
        const WitnessReport r = imaginarity_witness(qubit_densities(b), 3);
        ASSERT_TRUE(r.witnessed);
        ASSERT_TRUE(r.witness.has_value());
        EXPECT_EQ(r.witness->index.labels(), (std::vector<std::size_t>{0, 1, 2}));
        EXPECT_NEAR(r.witness->value.imag(), -sign_of(b) * kMag, 1e-12);
    }
}

TEST(ImaginarityWitness, RealEnsemblesNeverWitness) {
    EXPECT_FALSE(imaginarity_witness(to_density(rebit_trio_states()), 4).witnessed);
    std::vector<DensityMatrix> real;
    for (std::uint64_t s = 0; s < 4; ++s) real.push_back(random_real_density(3, 1 + s % 2, 100 + s));
    EXPECT_FALSE(imaginarity_witness(real, 4).witnessed);
}

TEST(ImaginarityWitness, RotatedRealEnsembleStaysUnwitnessed) {
    std::vector<DensityMatrix> real;
    for (std::uint64_t s = 0; s < 4; ++s) real.push_back(random_real_density(3, 2, 200 + s));
    const CMatrix u = random_unitary(3, 5);
    std::vector<DensityMatrix> rotated;
    for (const auto& r : real) rotated.push_back(rotate(r, u));
    const WitnessReport report = imaginarity_witness(rotated, 4);
    EXPECT_FALSE(report.witnessed);
    EXPECT_FALSE(report.witness.has_value());
    EXPECT_GT(report.invariants_checked, 0u);
    for (const auto& idx : canonical_indices(4, 4, true))
        EXPECT_NEAR(std::abs(bargmann_value(rotated, idx).value - bargmann_value(real, idx).value), 0.0, 1e-12);
}

TEST(ImaginarityWitness, ZeroOrderThrows) {
    EXPECT_THROW(imaginarity_witness(qubit_densities(SignBranch::plus), 0), std::invalid_argument);
}
