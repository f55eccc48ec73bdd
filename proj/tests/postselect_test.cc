#include "ccbound/postselect.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ccbound/ccattack.h"
#include "ccbound/correlations.h"
#include "ccbound/protocols.h"

namespace ccb {
namespace {

using std::numbers::pi;

double h2(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

CCDecomposition lossy_dec(const QubitStrategy& s, double eta) {
  Correlation ideal = correlation_from_qubit_strategy(s);
  return max_local_weight(apply_detection_efficiency(ideal, eta),
                          {apply_detection_efficiency(ideal, 1.0)});
}

double weight(int a, int b, double q) {
  int ones = (a == 1) + (b >= 1);
  return std::pow(q, ones);
}

// H(A|E) on the postselected (A, E) table built cell by cell: local rounds
// put (a, b) in Eve's hands, nonlocal rounds give her "?".
double pa_from_table(const CCDecomposition& d, double q) {
  double obs[2][3] = {}, nl[2][3] = {};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      obs[std::min(a, 1)][b] += d.observed(0, 2, a, b);
      nl[std::min(a, 1)][b] += d.nonlocal_weights[0] * d.anchors[0](0, 2, a, b);
    }
  // (A, E) with E in {(a,b) for a<2, b<3} and "?".
  std::vector<double> t(2 * 7, 0.0);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b) {
      t[a * 7 + a * 3 + b] += std::max(0.0, obs[a][b] - nl[a][b]) * weight(a, b, q);
      t[a * 7 + 6] += nl[a][b] * weight(a, b, q);
    }
  double total = 0.0;
  for (double v : t) total += v;
  for (double& v : t) v /= total;
  return conditional_entropy(JointDistribution({2, 7}, t), 0, {1});
}

TEST(PostselectedCorrelation, QOneIsDetBinningToOne) {
  JointDistribution key = maxent_protocol("2333", 0.9).dec.observed.key_table(0, 2);
  PostselectedTable ps = postselected_correlation(key, {1.0});
  EXPECT_NEAR(ps.p_vp, 1.0, 1e-15);
  JointDistribution binned = apply_map(key, PreprocessingStrategy::det_bin(3, 1).a_to_aprime, 0);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b) EXPECT_NEAR(ps.table.at({a, b}), binned.at({a, b}), 1e-15);
}

TEST(PostselectedCorrelation, QZeroKeepsOnlyZeroZero) {
  const double eta = 0.9;
  JointDistribution key = maxent_protocol("2333", eta).dec.observed.key_table(0, 2);
  PostselectedTable ps = postselected_correlation(key, {0.0});
  EXPECT_NEAR(ps.p_vp, eta * eta * 0.5, 1e-15);
  EXPECT_NEAR(ps.table.at({0, 0}), 1.0, 1e-15);
}

TEST(PostselectedCorrelation, SurvivalProbabilityExample) {
  const double eta = 0.9, q = 0.5;
  JointDistribution key = maxent_protocol("2333", eta).dec.observed.key_table(0, 2);
  PostselectedTable ps = postselected_correlation(key, {q});
  EXPECT_NEAR(ps.p_vp, 0.57625, 1e-12);
  JointDistribution ideal({2, 2}, {0.5, 0, 0, 0.5});
  EXPECT_NEAR(survival_probability(ideal, eta, q), 0.57625, 1e-12);
  EXPECT_THROW(postselected_correlation(key, {1.2}), std::domain_error);
}

TEST(PostselectedCorrelation, TelescopingOnRandomStrategies) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0), ang(-pi, pi);
  for (int i = 0; i < 40; ++i) {
    QubitStrategy s{u(rng) * pi / 2, {0.0, ang(rng)}, {ang(rng), ang(rng), 0.0}};
    const double eta = u(rng), q = u(rng);
    Correlation ideal = correlation_from_qubit_strategy(s);
    JointDistribution key = apply_detection_efficiency(ideal, eta).key_table(0, 2);
    double direct = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) direct += key.at({a, b}) * weight(std::min(a, 1), b, q);
    EXPECT_NEAR(survival_probability(ideal.key_table(0, 2), eta, q), direct, 1e-12);
    EXPECT_NEAR(postselected_correlation(key, {q}).p_vp, direct, 1e-12);
  }
}

TEST(PsEcTerm, Examples) {
  JointDistribution perfect({2, 3}, {0.5, 0, 0, 0, 0.5, 0});
  EXPECT_NEAR(ps_ec_term(perfect), 0.0, 1e-15);
  const double eta = 0.9, q = 0.5;
  JointDistribution key = maxent_protocol("2333", eta).dec.observed.key_table(0, 2);
  PostselectedTable ps = postselected_correlation(key, {q});
  // Columns b = 0, 1, noclick of the unnormalized table.
  const double c00 = eta * eta / 2, c10 = q * (1 - eta) * eta / 2;
  const double c01 = 0.0, c11 = q * q * (eta * eta / 2 + (1 - eta) * eta / 2);
  const double c02 = q * eta * (1 - eta) / 2, c12 = q * q * ((1 - eta) * eta / 2 + (1 - eta) * (1 - eta));
  const double P = ps.p_vp;
  const double termwise = (c00 + c10) / P * h2(c00 / (c00 + c10)) +
                          (c01 + c11) / P * h2(c01 / (c01 + c11)) +
                          (c02 + c12) / P * h2(c02 / (c02 + c12));
  EXPECT_NEAR(ps_ec_term(ps.table), termwise, 1e-12);
}

TEST(PsPaTerm, ExampleAndGenericTable) {
  const double eta = 0.9, q = 0.5;
  CCDecomposition d = maxent_protocol("2333", eta).dec;
  const double qnl = 1 - d.q_local;
  const double formula = qnl * (0.625 / 0.57625) * h2(0.5 / 0.625);
  EXPECT_NEAR(ps_pa_term(d, {q}, 0, 2), formula, 1e-9);
  EXPECT_NEAR(ps_pa_term(d, {q}, 0, 2), pa_from_table(d, q), 1e-10);
  EXPECT_NEAR(formula, 0.293972, 1e-6);
}

TEST(PsPaTerm, FormulaMatchesTableOnRandomPoints) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> th(0.05, pi / 2), et(0.7, 1.0), qq(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const double theta = th(rng), eta = et(rng), q = qq(rng);
    CCDecomposition d = lossy_dec(chsh_optimal_strategy(theta, eta, 3), eta);
    EXPECT_NEAR(ps_pa_term(d, {q}, 0, 2), pa_from_table(d, q), 1e-10)
        << "theta " << theta << " eta " << eta << " q " << q;
  }
}

TEST(PsPaTerm, LimitingCases) {
  CCDecomposition local = maxent_protocol("2333", 0.8).dec;
  ASSERT_NEAR(local.q_local, 1.0, 1e-9);
  EXPECT_NEAR(ps_pa_term(local, {0.4}, 0, 2), 0.0, 1e-9);
  CCDecomposition d = maxent_protocol("2333", 0.92).dec;
  EXPECT_NEAR(ps_pa_term(d, {1.0}, 0, 2), (1 - d.q_local) * h2(0.5), 1e-9);
}

TEST(PsRate, ReducesToDetBinningAtQOne) {
  for (double eta : {0.85, 0.9, 0.97}) {
    CCDecomposition d = maxent_protocol("2333", eta).dec;
    EXPECT_NEAR(ps_rate_upper_bound(d, {1.0}, 0, 2),
                one_way_bound(d, PreprocessingStrategy::det_bin(3, 1), 0, 2), 1e-10);
  }
  CCDecomposition p = lossy_dec(chsh_optimal_strategy(0.3, 0.8, 3), 0.8);
  EXPECT_NEAR(ps_rate_upper_bound(p, {1.0}, 0, 2),
              one_way_bound(p, PreprocessingStrategy::det_bin(3, 1), 0, 2), 1e-10);
}

TEST(PsRate, LimitingCases) {
  EXPECT_NEAR(ps_rate_upper_bound(maxent_protocol("2333", 1.0).dec, {1.0}, 0, 2), 1.0, 1e-9);
  CCDecomposition local = lossy_dec(chsh_optimal_strategy(1e-3, 0.66, 3), 0.66);
  for (double q : {0.01, 0.3, 1.0}) EXPECT_LE(ps_rate_upper_bound(local, {q}, 0, 2), 1e-12);
  EXPECT_THROW(ps_rate_upper_bound(maxent_protocol("2322", 0.9).dec, {0.5}, 0, 2),
               std::invalid_argument);
}

TEST(OptimizePs, LosslessOptimumIsOne) {
  PostselectOptimum o = optimize_ps(1.0, 0, 2);
  EXPECT_NEAR(o.bound, 1.0, 1e-9);
  EXPECT_NEAR(ps_bound_at(o.theta, o.phiA, 1.0, o.q, o.flipped), o.bound, 1e-12);
}

TEST(OptimizePs, NeverBelowReferencePoint) {
  const double eta = 0.9;
  PostselectOptimum o = optimize_ps(eta, 3, 2);
  CCDecomposition ref = lossy_dec(chsh_optimal_strategy(pi / 2, eta, 3), eta);
  EXPECT_GE(o.bound, ps_rate_upper_bound(ref, {1.0}, 0, 2) - 1e-12);
  EXPECT_THROW(optimize_ps(0.0, 0, 1), std::domain_error);
}

}  // namespace
}  // namespace ccb
