#include "ccbound/infotheory.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace ccb {
namespace {

double h2(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

std::vector<double> random_simplex(std::mt19937_64& rng, size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(n);
  double s = 0.0;
  for (double& x : v) s += x = e(rng);
  for (double& x : v) x /= s;
  return v;
}

JointDistribution random_joint(std::mt19937_64& rng, std::vector<int> shape) {
  size_t n = 1;
  for (int d : shape) n *= d;
  return JointDistribution(shape, random_simplex(rng, n));
}

StochasticMap random_map(std::mt19937_64& rng, int rows, int cols) {
  std::vector<double> m(size_t(rows) * cols);
  for (int c = 0; c < cols; ++c) {
    auto col = random_simplex(rng, rows);
    for (int r = 0; r < rows; ++r) m[r * cols + c] = col[r];
  }
  return StochasticMap(rows, cols, std::move(m));
}

// The det-binned lossy key table of the maximally entangled protocol:
// rows a' in {0, 1}, columns b in {0, 1, noclick}.
JointDistribution det_binned_table(double eta) {
  const double e = eta, f = 1 - eta;
  return JointDistribution({2, 3}, {e * e / 2 + f * e / 2, f * e / 2, e * f / 2 + f * f,
                                    0.0, e * e / 2, e * f / 2});
}

TEST(ShannonEntropy, Examples) {
  EXPECT_DOUBLE_EQ(shannon_entropy(std::vector<double>{0.5, 0.5}), 1.0);
  EXPECT_DOUBLE_EQ(shannon_entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}), 2.0);
  EXPECT_NEAR(shannon_entropy(std::vector<double>{0.9, 0.1}),
              -0.9 * std::log2(0.9) - 0.1 * std::log2(0.1), 1e-15);
  EXPECT_NEAR(shannon_entropy(std::vector<double>{0.9, 0.1}), 0.4689956, 1e-7);
  EXPECT_EQ(shannon_entropy(std::vector<double>{1.0, 0.0}), 0.0);
}

TEST(BinaryEntropy, Examples) {
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.45), 0.9927745, 1e-7);
  EXPECT_THROW(binary_entropy(1.1), std::domain_error);
  EXPECT_THROW(binary_entropy(-0.01), std::domain_error);
}

TEST(ConditionalEntropy, PerfectCorrelationAndProduct) {
  JointDistribution same({2, 2}, {0.5, 0, 0, 0.5});
  EXPECT_NEAR(conditional_entropy(same, 0, {1}), 0.0, 1e-15);
  JointDistribution prod({2, 2}, {0.25, 0.25, 0.25, 0.25});
  EXPECT_NEAR(conditional_entropy(prod, 0, {1}), 1.0, 1e-15);
  EXPECT_THROW(conditional_entropy(prod, 2, {1}), std::out_of_range);
}

TEST(ConditionalEntropy, DetBinnedLossyTableMatchesTermwise) {
  const double eta = 0.9;
  const double termwise = (eta / 2) * h2(eta) + (1 - eta) * h2(eta / 2);
  EXPECT_NEAR(conditional_entropy(det_binned_table(eta), 0, {1}), termwise, 1e-12);
  EXPECT_NEAR(termwise, 0.3103255, 1e-7);
}

TEST(ConditionalMutualInformation, Examples) {
  // F determines A and B.
  JointDistribution det({2, 2, 4}, {0.1, 0, 0, 0, 0, 0.2, 0, 0,
                                    0, 0, 0.3, 0, 0, 0, 0, 0.4});
  EXPECT_NEAR(conditional_mutual_information(det), 0.0, 1e-14);
  // A = B uniform bit, F independent.
  JointDistribution copy({2, 2, 2}, {0.25, 0.25, 0, 0, 0, 0, 0.25, 0.25});
  EXPECT_NEAR(conditional_mutual_information(copy), 1.0, 1e-14);
  EXPECT_THROW(conditional_mutual_information(JointDistribution({2, 2}, {.25, .25, .25, .25})),
               std::invalid_argument);
}

TEST(ApplyMap, IdentityAndConstant) {
  std::mt19937_64 rng(1);
  JointDistribution j = random_joint(rng, {3, 2});
  JointDistribution id = apply_map(j, StochasticMap::identity(3), 0);
  for (size_t i = 0; i < j.probs().size(); ++i) EXPECT_DOUBLE_EQ(id.probs()[i], j.probs()[i]);

  JointDistribution c = apply_map(j, StochasticMap(1, 3, {1, 1, 1}), 0);
  ASSERT_EQ(c.dim(0), 1);
  for (int b = 0; b < 2; ++b) EXPECT_NEAR(c.at({0, b}), j.marginal({1}).at({b}), 1e-15);
  EXPECT_THROW(apply_map(j, StochasticMap::identity(2), 0), std::invalid_argument);
}

TEST(ApplyMap, DetBinningSumsNoClickRowIntoZero) {
  const double e = 0.9, f = 0.1;
  // Lossy key table with Q_ab = delta_ab / 2, rows/cols {0, 1, noclick}.
  JointDistribution lossy({3, 3}, {e * e / 2, 0, e * f / 2, 0, e * e / 2, e * f / 2,
                                   f * e / 2, f * e / 2, f * f});
  StochasticMap sdet({{1, 0, 1}, {0, 1, 0}});
  JointDistribution binned = apply_map(lossy, sdet, 0);
  for (int b = 0; b < 3; ++b) {
    EXPECT_NEAR(binned.at({0, b}), lossy.at({0, b}) + lossy.at({2, b}), 1e-15);
    EXPECT_NEAR(binned.at({1, b}), lossy.at({1, b}), 1e-15);
  }
}

TEST(StochasticMap, RejectsNonStochasticColumns) {
  EXPECT_THROW(StochasticMap({{0.5, 0.5}, {0.6, 0.5}}), std::invalid_argument);
  EXPECT_THROW(StochasticMap({{1.2, 0}, {-0.2, 1}}), std::invalid_argument);
  StochasticMap flip({{0.7, 0.3}, {0.3, 0.7}});
  EXPECT_NEAR(flip.column_entropy(0), h2(0.3), 1e-15);
  EXPECT_FALSE(flip.is_deterministic());
  EXPECT_TRUE(StochasticMap::identity(3).is_deterministic());
}

TEST(InfotheoryProperties, DataProcessingOnRandomTriples) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(2, 4);
  for (int t = 0; t < 100; ++t) {
    JointDistribution j = random_joint(rng, {dim(rng), dim(rng), dim(rng)});
    const double before = conditional_mutual_information(j);
    const int axis = t % 2;
    StochasticMap m = random_map(rng, dim(rng), j.dim(axis));
    JointDistribution after = apply_map(j, m, axis);
    EXPECT_LE(conditional_mutual_information(after), before + 1e-10) << "trial " << t;
    double total = 0.0;
    for (double p : after.probs()) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(InfotheoryProperties, ChainRule) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    JointDistribution j = random_joint(rng, {3, 4});
    EXPECT_NEAR(j.entropy(), j.marginal({1}).entropy() + conditional_entropy(j, 0, {1}), 1e-10);
  }
}

TEST(AttachChannel, MessageOfDeterministicFunctionAddsNoEntropy) {
  std::mt19937_64 rng(3);
  JointDistribution j = random_joint(rng, {3, 2});
  StochasticMap m({{1, 1, 0}, {0, 0, 1}});
  JointDistribution jm = attach_channel(j, m, 0);
  ASSERT_EQ(jm.rank(), 3);
  EXPECT_NEAR(jm.entropy(), j.entropy(), 1e-12);
  EXPECT_LE(conditional_entropy(jm, 0, {1, 2}), conditional_entropy(j, 0, {1}) + 1e-12);
}

}  // namespace
}  // namespace ccb
