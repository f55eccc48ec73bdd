#ifndef CCBOUND_POSTSELECT_H_
#define CCBOUND_POSTSELECT_H_

#include <cstdint>
#include <vector>

#include "ccbound/infotheory.h"
#include "ccbound/localset.h"

namespace ccb {

// Both parties keep outcome 1 with probability q; Alice bins no-click to 1
// beforehand, Bob postselects his no-click like a 1.
struct PostselectParams {
  double q = 1.0;
};

struct PostselectedTable {
  JointDistribution table;  // 2 x 3 over (A', B), renormalized
  double p_vp = 0.0;        // probability that the round survives
};

// Accepts the lossy 3 x 3 key table or the 2 x 3 table with Alice already
// binned. Throws std::domain_error when nothing survives.
PostselectedTable postselected_correlation(const JointDistribution& key_table,
                                           const PostselectParams& params);

// Survival probability written in terms of the ideal 2 x 2 key table.
double survival_probability(const JointDistribution& ideal_key_table,
                            double eta, double q);

double ps_ec_term(const JointDistribution& ps_table);

// H(A|E) after postselection under the CC attack on a lossy decomposition.
double ps_pa_term(const CCDecomposition& dec, const PostselectParams& params,
                  int key_x, int key_y);

// P(V_p) * (H(A|E) - H(A|B)) on the postselected data.
double ps_rate_upper_bound(const CCDecomposition& dec,
                           const PostselectParams& params, int key_x,
                           int key_y);

struct PostselectOptimum {
  double theta = 0.0;
  double phiA = 0.0;
  std::vector<double> alice_angles;
  std::vector<double> bob_angles;
  double q = 1.0;
  bool flipped = false;  // every measurement angle shifted by pi
  double bound = 0.0;
};

// Bound for the 2333 protocol at (theta, phiA) with Bob's CHSH angles tied
// to the closed-form optimum and key settings (0, 2). With `flipped`, every
// observable is negated, which relabels outcomes 0 <-> 1 before losses.
double ps_bound_at(double theta, double phiA, double eta, double q,
                   bool flipped);

// Random-restart Nelder-Mead over (theta, phiA) for both orientations, with
// q maximized for each candidate.
PostselectOptimum optimize_ps(double eta, uint64_t seed, int restarts = 128);

}  // namespace ccb

#endif  // CCBOUND_POSTSELECT_H_
