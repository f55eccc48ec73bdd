#include "ccbound/twoway.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ccbound/ccattack.h"
#include "ccbound/protocols.h"

namespace ccb {
namespace {

using std::numbers::sqrt2;

double h2(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

double qL_eta(double eta) { return (1 - eta) * (1 + (3 + 2 * sqrt2) * eta); }

double rtwoway_det(double eta) {
  const double f = 1 - eta;
  return eta * (2 * (1 + sqrt2) * eta - 2 * sqrt2 - 1) *
         (1 - h2(f / (1 - 2 * (1 + sqrt2) * f)));
}

double rtwoway_2322(double v) {
  const double j = (1 - v) * (sqrt2 - 1), k = 2 * (sqrt2 * v - 1);
  return (1 + sqrt2) / 2 *
         (j * std::log2(j) + k * std::log2(k) - (j + k) * std::log2(j + k) + j + k);
}

JointDistribution binned(double eta) {
  ProtocolPoint p = maxent_protocol("2333", eta);
  return binned_tripartite_lossy(p.dec, 0, 2, 0, 0);
}

TEST(BinnedTripartite, FirstCellAndUnknownMass) {
  const double eta = 0.9, q = qL_eta(eta);
  JointDistribution t = binned(eta);
  ASSERT_EQ(t.shape(), (std::vector<int>{2, 2, 5}));
  EXPECT_NEAR(t.at({0, 0, 0}), (eta * eta - 1 + q) * 0.5 + eta * (1 - eta) + (1 - eta) * (1 - eta),
              1e-9);
  EXPECT_NEAR(t.at({0, 0, 0}), 0.3172792, 1e-7);
  EXPECT_NEAR(t.marginal({2}).at({4}), 1 - q, 1e-9);
}

TEST(BinnedTripartite, LosslessReducesToAnchor) {
  JointDistribution t = binned(1.0);
  for (int e = 0; e < 4; ++e) EXPECT_NEAR(t.marginal({2}).at({e}), 0.0, 1e-9);
  EXPECT_NEAR(t.at({0, 0, 4}), 0.5, 1e-9);
  EXPECT_NEAR(t.at({1, 1, 4}), 0.5, 1e-9);
  ProtocolPoint p = maxent_protocol("2333", 0.9);
  EXPECT_THROW(binned_tripartite_lossy(p.dec, 0, 2, 2, 0), std::invalid_argument);
}

TEST(TwoWayBound, CanonicalMapClosedForm) {
  EXPECT_NEAR(two_way_bound(binned((2 + sqrt2) / 4), canonical_eve_map()), 0.0, 1e-10);
  EXPECT_NEAR(two_way_bound(binned(0.9), canonical_eve_map()), rtwoway_det(0.9), 1e-9);
  EXPECT_NEAR(rtwoway_det(0.9), 0.13568, 2e-5);  // stated as an approximation
  for (int i = 0; i < 30; ++i) {
    const double eta = 0.86 + 0.14 * i / 29.0;
    EXPECT_NEAR(two_way_bound(binned(eta), canonical_eve_map()), rtwoway_det(eta), 1e-9)
        << "eta " << eta;
  }
}

TEST(TwoWayBound, IdentityMapIsNonlocalShareOfMutualInformation) {
  const double eta = 0.93;
  JointDistribution t = binned(eta);
  // Eve's symbol fixes (A, B) in local rounds; the anchor has I(A:B) = 1.
  EXPECT_NEAR(two_way_bound(t, StochasticMap::identity(5)), 1 - qL_eta(eta), 1e-9);
  EXPECT_THROW(two_way_bound(t, StochasticMap::identity(4)), std::invalid_argument);
}

TEST(TwoWayBound, MixingMapEqualsMergingTheGroup) {
  JointDistribution t = binned(0.91);
  // Merge {1, 2, 4} into one symbol: a 3 x 5 map.
  StochasticMap merge({{1, 0, 0, 0, 0}, {0, 1, 1, 0, 1}, {0, 0, 0, 1, 0}});
  EXPECT_NEAR(two_way_bound(t, canonical_eve_map()), two_way_bound(t, merge), 1e-12);
  EXPECT_THROW(mixing_map(5, {1, 1}), std::invalid_argument);
}

TEST(TwoWayVisibility, ClosedFormsAndZeros) {
  EXPECT_NEAR(two_way_bound_visibility((7 + 4 * sqrt2) / 17, "2322").value, 0.0, 1e-12);
  EXPECT_NEAR(two_way_bound_visibility(3.0 / 7 * (2 * sqrt2 - 1), "2222").value, 0.0, 1e-12);
  for (double V : {0.8, 0.9, 0.99}) {
    EXPECT_NEAR(two_way_bound_visibility(V, "2322").value, rtwoway_2322(V), 1e-12);
    EXPECT_DOUBLE_EQ(two_way_bound_visibility(V, "2422").value,
                     two_way_bound_visibility(V, "2322").value);
  }
  TwoWayValue local = two_way_bound_visibility(0.7, "2322");
  EXPECT_TRUE(local.local);
  EXPECT_EQ(local.value, 0.0);
  EXPECT_THROW(two_way_bound_visibility(0.9, "2333"), std::invalid_argument);
}

TEST(TwoWayVisibility, GenericPipelineMatchesClosedForms) {
  for (const char* tag : {"2322", "2222", "2422"}) {
    for (double V : {0.8, 0.9}) {
      ProtocolPoint p = maxent_protocol(tag, V);
      JointDistribution tri = build_tripartite(p.dec, p.key_x, p.key_y);
      EXPECT_NEAR(two_way_bound(tri, canonical_eve_map()),
                  two_way_bound_visibility(V, tag).value, 1e-9)
          << tag << " V " << V;
    }
  }
  // Both key pairs of 2422 give the same bound.
  ProtocolPoint p = maxent_protocol("2422", 0.85, 1, 3);
  EXPECT_NEAR(two_way_bound(build_tripartite(p.dec, 1, 3), canonical_eve_map()),
              two_way_bound_visibility(0.85, "2322").value, 1e-9);
}

TEST(EveMapSearch, DominatesFixedMaps) {
  JointDistribution t = binned(0.86);
  EveMapResult r = minimize_over_eve_maps(t, 0, 16);
  EXPECT_LE(r.value, two_way_bound(t, StochasticMap::identity(5)) + 1e-12);
  EXPECT_LE(r.value, rtwoway_det(0.86) + 1e-12);
  EXPECT_NEAR(two_way_bound(t, r.map), r.value, 1e-12);
  EXPECT_THROW(minimize_over_eve_maps(t, 0, 0), std::invalid_argument);
}

TEST(EveMapSearch, FullyLocalTableGivesZero) {
  ProtocolPoint p = maxent_protocol("2333", 0.8);
  ASSERT_NEAR(p.dec.q_local, 1.0, 1e-9);
  EXPECT_NEAR(minimize_over_eve_maps(build_tripartite(p.dec, 0, 2), 1, 4).value, 0.0, 1e-12);
}

TEST(EveMapSearch, DeterministicForSeed) {
  JointDistribution t = binned(0.9);
  EveMapResult a = minimize_over_eve_maps(t, 5, 8), b = minimize_over_eve_maps(t, 5, 8);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.map.data(), b.map.data());
}

TEST(TwoWayBound, PermutedMapVanishesForAnticorrelatedKeys) {
  const double eta = (24 - 3 * sqrt2 + std::sqrt(6 * (32 * sqrt2 - 45))) / 24;
  ProtocolPoint p = maxent_protocol("2233", eta, 1, 1);
  JointDistribution t = binned_tripartite_lossy(p.dec, 1, 1, 0, 0);
  EXPECT_NEAR(two_way_bound(t, permuted_eve_map()), 0.0, 1e-9);
  EXPECT_NEAR(eta, 0.8747, 1e-4);
}

}  // namespace
}  // namespace ccb
