#include "ccbound/correlations.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace ccb {
namespace {

using std::numbers::pi;
using std::numbers::sqrt2;

double sdet_standard(double eta) {
  // <A0> = <B0> = 0 for the maximally entangled state.
  return eta * eta * 2 * sqrt2 + 2 * (1 - eta) * (1 - eta);
}

TEST(QubitCorrelation, TsirelsonTable) {
  Correlation c = correlation_from_qubit_strategy(maxent_chsh_strategy(3));
  ASSERT_EQ(c.scenario().tag(), "2322");
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double sign = ((a + b + x * y) % 2 == 0) ? 1.0 : -1.0;
          EXPECT_NEAR(c(x, y, a, b), 0.25 * (1 + sign / sqrt2), 1e-14);
        }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) EXPECT_NEAR(c(0, 2, a, b), a == b ? 0.5 : 0.0, 1e-14);
}

TEST(QubitCorrelation, ProductStateGivesDeterministicKey) {
  Correlation c = correlation_from_qubit_strategy({0.0, {0.0, 1.0}, {0.0, -0.7}});
  EXPECT_NEAR(c(0, 0, 0, 0), 1.0, 1e-14);
}

TEST(QubitCorrelation, RejectsEmptyAngleLists) {
  EXPECT_THROW(correlation_from_qubit_strategy({pi / 2, {}, {0.0}}), std::invalid_argument);
}

TEST(Visibility, Examples) {
  Correlation c = correlation_from_qubit_strategy(maxent_chsh_strategy(3));
  Correlation one = apply_visibility(c, 1.0);
  for (size_t i = 0; i < c.probs().size(); ++i) EXPECT_DOUBLE_EQ(one.probs()[i], c.probs()[i]);
  Correlation zero = apply_visibility(c, 0.0);
  for (double p : zero.probs()) EXPECT_DOUBLE_EQ(p, 0.25);
  EXPECT_NEAR(apply_visibility(c, 0.8)(0, 2, 0, 0), 0.45, 1e-15);
  EXPECT_THROW(apply_visibility(c, 1.5), std::domain_error);
}

TEST(Visibility, CompositionLaw) {
  Correlation c = correlation_from_qubit_strategy(maxent_chsh_strategy(3));
  Correlation twice = apply_visibility(apply_visibility(c, 0.9), 0.8);
  Correlation once = apply_visibility(c, 0.72);
  for (size_t i = 0; i < c.probs().size(); ++i)
    EXPECT_NEAR(twice.probs()[i], once.probs()[i], 1e-12);
}

TEST(DetectionEfficiency, Examples) {
  Correlation c = correlation_from_qubit_strategy(maxent_chsh_strategy(3));
  Correlation full = apply_detection_efficiency(c, 1.0);
  ASSERT_EQ(full.scenario().tag(), "2333");
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 3; ++y)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          EXPECT_DOUBLE_EQ(full(x, y, a, b), (a < 2 && b < 2) ? c(x, y, a, b) : 0.0);

  Correlation none = apply_detection_efficiency(c, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 3; ++y) EXPECT_DOUBLE_EQ(none(x, y, 2, 2), 1.0);

  Correlation lossy = apply_detection_efficiency(c, 0.9);
  EXPECT_NEAR(lossy(0, 2, 0, 0), 0.405, 1e-15);
  EXPECT_NEAR(lossy(0, 2, 0, 2), 0.045, 1e-15);
  EXPECT_NEAR(lossy(0, 2, 2, 2), 0.01, 1e-15);
  EXPECT_THROW(apply_detection_efficiency(c, -0.1), std::domain_error);
}

TEST(DetectionEfficiency, MarginalRowsAtTsirelsonPoint) {
  Correlation c = correlation_from_qubit_strategy(maxent_chsh_strategy(3));
  const double eta = 0.83;
  Correlation lossy = apply_detection_efficiency(c, eta);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 3; ++y)
      for (int k = 0; k < 2; ++k) {
        EXPECT_NEAR(lossy(x, y, k, 2), eta * (1 - eta) * c.alice_marginal(x, k), 1e-15);
        EXPECT_NEAR(lossy(x, y, 2, k), eta * (1 - eta) * c.bob_marginal(y, k), 1e-15);
      }
}

TEST(SDet, Examples) {
  QubitStrategy s = maxent_chsh_strategy(2);
  EXPECT_NEAR(s_det(s, 1.0), 2 * sqrt2, 1e-12);
  EXPECT_NEAR(s_det(s, 0.9), sdet_standard(0.9), 1e-12);
  EXPECT_NEAR(s_det(s, 0.9), 2.31103, 1e-5);
  EXPECT_NEAR(s_det({0.4, {0.0, 0.3}, {0.2, -0.1}}, 0.0), 2.0, 1e-14);
}

TEST(ChshOptimal, MaximallyEntangledLossless) {
  QubitStrategy s = chsh_optimal_strategy(pi / 2, 1.0, 3);
  EXPECT_NEAR(s.alice_angles[1], pi / 2, 1e-6);
  EXPECT_NEAR(std::cos(s.bob_angles[0]), 1 / sqrt2, 1e-6);
  EXPECT_NEAR(std::cos(s.bob_angles[1]), 1 / sqrt2, 1e-6);
  EXPECT_GT(std::sin(s.bob_angles[0]), 0.0);
  EXPECT_LT(std::sin(s.bob_angles[1]), 0.0);
  EXPECT_EQ(s.bob_angles[2], 0.0);
}

TEST(ChshOptimal, SmallThetaGivesSmallAliceAngle) {
  const double a1 = chsh_optimal_strategy(1e-2, 0.8).alice_angles[1];
  const double a2 = chsh_optimal_strategy(1e-4, 0.8).alice_angles[1];
  EXPECT_LT(a2, a1);
  EXPECT_LT(a2, 0.05);
}

TEST(ChshOptimal, DominatesGridAndRandomStrategies) {
  const double eta = 0.99;
  QubitStrategy best = chsh_optimal_strategy(pi / 2, eta, 2);
  EXPECT_GE(s_det(best, eta) + 1e-12, s_det(maxent_chsh_strategy(2), eta));
  for (int i = 0; i <= 400; ++i) {
    const double phi = pi / 2 * i / 400;
    auto [bp, bm] = bob_chsh_angles(pi / 2, eta, phi);
    EXPECT_GE(s_det(best, eta) + 1e-9, s_det({pi / 2, {0.0, phi}, {bp, bm}}, eta));
  }
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(-pi, pi), th(0.05, pi / 2), et(0.7, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double theta = th(rng), e = et(rng);
    QubitStrategy opt = chsh_optimal_strategy(theta, e, 2);
    QubitStrategy r{theta, {0.0, ang(rng)}, {ang(rng), ang(rng)}};
    EXPECT_GE(s_det(opt, e) + 1e-9, s_det(r, e)) << "theta " << theta << " eta " << e;
  }
}

TEST(CorrelationInvariants, GeneratedCorrelationsAreNoSignalling) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(-pi, pi), th(0.0, pi / 2), u(0.0, 1.0);
  for (int i = 0; i < 60; ++i) {
    QubitStrategy s{th(rng), {ang(rng), ang(rng)}, {ang(rng), ang(rng), ang(rng)}};
    Correlation c = apply_detection_efficiency(apply_visibility(correlation_from_qubit_strategy(s), u(rng)), u(rng));
    EXPECT_LE(no_signalling_violation(c), 1e-12);
  }
}

TEST(CorrelationInvariants, ConstructorRejectsSignalling) {
  Scenario s{1, 2, 2, 2};
  EXPECT_THROW(Correlation(s, {1, 0, 0, 0, 0, 0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(Correlation(s, {0.5, 0.5, 0, 0}), std::invalid_argument);
  EXPECT_THROW(Correlation(s, {1.2, -0.2, 0, 0, 1, 0, 0, 0}), std::invalid_argument);
}

TEST(ScenarioTag, ParsesAndValidates) {
  Scenario s = parse_scenario_tag("2333");
  EXPECT_EQ(s, (Scenario{2, 3, 3, 3}));
  EXPECT_EQ(s.vertex_count(), 243u);
  EXPECT_THROW(parse_scenario_tag("23a3"), std::invalid_argument);
  EXPECT_THROW(parse_scenario_tag("2331"), std::invalid_argument);
}

TEST(ProductCorrelation, FactorsAndStaysValid) {
  Correlation c1 = correlation_from_qubit_strategy({pi / 2, {0.0, pi / 2, pi / 4}, {pi / 4, -pi / 4}});
  Correlation c2 = correlation_from_qubit_strategy({0.9, {0.0}, {0.3, -0.4}});
  Correlation p = product_correlation(c1, c2);
  ASSERT_EQ(p.scenario().tag(), "3444");
  EXPECT_LE(no_signalling_violation(p), 1e-12);
  EXPECT_NEAR(p(2 * 1 + 0, 1 * 2 + 1, 1 * 2 + 0, 0 * 2 + 1), c1(2, 1, 1, 0) * c2(0, 1, 0, 1), 1e-15);
}

}  // namespace
}  // namespace ccb
