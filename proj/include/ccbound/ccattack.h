#ifndef CCBOUND_CCATTACK_H_
#define CCBOUND_CCATTACK_H_

#include <optional>
#include <string>

#include "ccbound/infotheory.h"
#include "ccbound/localset.h"

namespace ccb {

// Alice's processing of her key-setting outcome: A -> A' and optionally a
// public message A' -> M.
struct PreprocessingStrategy {
  std::string name;
  StochasticMap a_to_aprime;
  std::optional<StochasticMap> aprime_to_m;

  int input_size() const { return a_to_aprime.cols(); }

  // For n > 2 the last outcome is the no-click symbol. With n == 2 there is
  // nothing to bin and the binning strategies reduce to their bit maps.
  static PreprocessingStrategy none(int n);
  static PreprocessingStrategy det_bin(int n, int target = 0);
  static PreprocessingStrategy det_bin_np(int n, double p, int target = 0);
  static PreprocessingStrategy rand_bin(int n);
  static PreprocessingStrategy rand_bin_np(int n, double p);
  static PreprocessingStrategy announce_noclick(int n);
};

// Joint (A, B, E) at the key settings. Eve's symbol is e = a * nB + b in
// local rounds and the last symbol "?" in nonlocal rounds.
JointDistribution build_tripartite(const CCDecomposition& dec, int key_x,
                                   int key_y);

// H(A'|B, M) on the observed key table.
double ec_term(const JointDistribution& key_table,
               const PreprocessingStrategy& strat);

// H(A'|E, M) under the CC attack.
double pa_term(const CCDecomposition& dec, const PreprocessingStrategy& strat,
               int key_x, int key_y);

// H(A'|E, M) computed directly on an (A, B, E) table.
double pa_term(const JointDistribution& tripartite,
               const PreprocessingStrategy& strat);

double one_way_bound(const CCDecomposition& dec,
                     const PreprocessingStrategy& strat, int key_x, int key_y);

}  // namespace ccb

#endif  // CCBOUND_CCATTACK_H_
