#ifndef CCBOUND_LOCALSET_H_
#define CCBOUND_LOCALSET_H_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "ccbound/correlations.h"

namespace ccb {

struct DeterministicVertex {
  std::vector<int> alice;  // x -> a
  std::vector<int> bob;    // y -> b
};

// Lexicographic order: alice assignment most significant, x = 0 first.
std::vector<DeterministicVertex> enumerate_vertices(const Scenario& s);
DeterministicVertex vertex_at(const Scenario& s, uint64_t index);
Correlation vertex_correlation(const Scenario& s, const DeterministicVertex& v);

class InfeasibleDecomposition : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CCDecomposition {
  double q_local = 0.0;
  std::map<uint64_t, double> vertex_weights;  // nonzero weights only
  std::vector<double> nonlocal_weights;       // one per anchor
  Correlation observed;
  std::vector<Correlation> anchors;
  bool feasible_at_tolerance = false;  // residual above 1e-9 but within 1e-8
  double residual = 0.0;

  // Sum_i w_i p_i^L + Sum_j v_j p_j^NL, entry-wise.
  std::vector<double> reconstruction() const;
  double reconstruction_error() const;
};

// Maximizes the weight on local deterministic vertices such that the
// observed correlation is a convex mixture of vertices and anchors.
// Throws InfeasibleDecomposition when no such mixture exists.
CCDecomposition max_local_weight(const Correlation& observed,
                                 const std::vector<Correlation>& anchors);

double local_weight_maxent_eta(double eta);
double local_weight_visibility(double V);
double local_weight_partial_theta0(double eta);

inline constexpr double kEtaLocMaxent = 0.82842712474619009760;  // 2(sqrt2-1)
inline constexpr double kVLoc = 0.70710678118654752440;          // 1/sqrt2

// <A_x0 B_y0> + <A_x0 B_y1> + <A_x1 B_y0> - <A_x1 B_y1>; binary outcomes.
double chsh_facet_value(const Correlation& c, int x0, int x1, int y0, int y1);

// -pA(1|0) - pB(1|0) + p(11|00) + p(11|01) + p(11|10) - p(11|11) for
// settings {0,1} x {0,1}; the local bound is 0. Works with any outcome count.
double ch_facet_value(const Correlation& c);

}  // namespace ccb

#endif  // CCBOUND_LOCALSET_H_
