#ifndef CCBOUND_TWOWAY_H_
#define CCBOUND_TWOWAY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ccbound/infotheory.h"
#include "ccbound/localset.h"

namespace ccb {

// Eve's post-processing p(F|E), column-stochastic.
using EveMap = StochasticMap;

// 2 x 2 x 5 table over (A', B', E~) after both parties bin the no-click
// outcome (the last of three) to binA / binB and Eve bins her pair the same
// way. E~ is ordered (0,0), (0,1), (1,0), (1,1), ?.
JointDistribution binned_tripartite_lossy(const CCDecomposition& dec,
                                          int key_x, int key_y, int binA,
                                          int binB);

// n x n map that keeps every symbol outside `group` and sends each symbol in
// `group` uniformly to the symbols of `group`. Merging the group into a
// single symbol gives the same I(A:B|F).
EveMap mixing_map(int n, const std::vector<int>& group);

// On the binned 5-symbol alphabet: mix {(0,1), (1,0), ?}.
EveMap canonical_eve_map();
// Mix {(0,0), (1,1), ?} instead, for anticorrelated key settings.
EveMap permuted_eve_map();

// I(A:B|F) with F = map(E) on a three-axis (A, B, E) table.
double two_way_bound(const JointDistribution& tri, const EveMap& map);

struct TwoWayValue {
  double value = 0.0;
  bool local = false;  // V at or below 1/sqrt2; value is then 0
};

// Closed forms for the visibility protocols 2322, 2222 and 2422 under the
// canonical map.
TwoWayValue two_way_bound_visibility(double V, const std::string& tag);

struct EveMapResult {
  EveMap map;
  double value = 0.0;
};

// Heuristic minimum of I(A:B|F) over column-stochastic maps with |F| = |E|.
// Projected gradient descent from the identity, from the mixing maps when E
// has five symbols, and from `restarts` random maps.
EveMapResult minimize_over_eve_maps(const JointDistribution& tri,
                                    uint64_t seed, int restarts = 64);

}  // namespace ccb

#endif  // CCBOUND_TWOWAY_H_
