// One [PASS]/[FAIL] line per acceptance criterion, with measured values.

#include <gtest/gtest.h>

#include <algorithm>
#include <iostream>

#include "qgame/reproduce.hpp"

using namespace qgame;

namespace {

const ReproductionReport& report() {
    static const ReproductionReport r = reproduce_all(0);
    return r;
}

void check(int id) {
    const auto& items = report().criteria;
    const auto it = std::find_if(items.begin(), items.end(), [&](const CriterionResult& c) { return c.id == id; });
    ASSERT_NE(it, items.end()) << "criterion " << id << " missing";
    std::cout << (it->passed ? "[PASS] " : "[FAIL] ") << "AC-" << id << ' ' << it->name << " | "
              << it->measured.dump() << std::endl;
    EXPECT_TRUE(it->passed);
}

}  // namespace

TEST(Acceptance, AC01_BargmannWitnessValue) { check(1); }
TEST(Acceptance, AC02_ThirdOrderSignPattern) { check(2); }
TEST(Acceptance, AC03_QubitExactness) { check(3); }
TEST(Acceptance, AC04_OverlapTableGolden) { check(4); }
TEST(Acceptance, AC05_ClassicalBaseline) { check(5); }
TEST(Acceptance, AC06_RebitBound) { check(6); }
TEST(Acceptance, AC07_BitInfeasibility) { check(7); }
TEST(Acceptance, AC08_WitnessDiscrimination) { check(8); }
TEST(Acceptance, AC09_MonteCarloConsistency) { check(9); }
TEST(Acceptance, AC10_OptimizerAnchors) { check(10); }
TEST(Acceptance, AC11_GreatCircle) { check(11); }
TEST(Acceptance, AC12_PropertySuites) { check(12); }

TEST(Acceptance, FindingsRecorded) {
    const Json& f = report().findings;
    std::cout << "[INFO] findings " << f.dump() << std::endl;
    ASSERT_TRUE(f.contains("rebit_floor"));
    ASSERT_TRUE(f.contains("rebit_reference"));
    ASSERT_TRUE(f.contains("best_deterministic_bit_d"));
    EXPECT_EQ(report().criteria.size(), 12u);
}
