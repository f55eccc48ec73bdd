#ifndef CCBOUND_THRESHOLDS_H_
#define CCBOUND_THRESHOLDS_H_

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccbound/ccattack.h"
#include "ccbound/infotheory.h"

namespace ccb {

class NoSignChange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using NoiseBound = std::function<double(double)>;

// Largest parameter in [lo, hi] at which bound <= 0, by bisection down to an
// interval of width `tol`. Throws NoSignChange unless bound(lo) <= 0 <
// bound(hi).
double critical_noise(const NoiseBound& bound, double lo, double hi,
                      double tol = 1e-6);

// For bounds that are nonnegative and touch zero at the critical point, such
// as I(A:B|F) under a fixed Eve map: the minimizer on [lo, hi], which must
// reach at most `zero_tol`. Throws NoSignChange otherwise.
double touching_zero(const NoiseBound& bound, double lo, double hi,
                     double tol = 1e-8, double zero_tol = 1e-12);

// r(param, p) for a strategy family with bit-flip probability p.
using FlipBound = std::function<double(double param, double p)>;

// lim r(param, 1/2 - d) / d^2 as d -> 0, by Richardson extrapolation over
// d in {1e-3, 5e-4} (cross-checked against {5e-4, 2.5e-4}).
double noisy_prep_limit_coefficient(const FlipBound& bound, double param);

// Root of the coefficient above in param.
double noisy_prep_limit_threshold(const FlipBound& bound, double lo, double hi,
                                  double tol = 1e-6);

// Key table and CC tripartite distribution at one noise parameter.
struct BoundContext {
  JointDistribution key_table;   // (A, B)
  JointDistribution tripartite;  // (A, B, E)
  double bound(const PreprocessingStrategy& s) const;
};
using ContextBuilder = std::function<BoundContext(double param)>;

ContextBuilder context_builder(
    std::function<CCDecomposition(double)> decompose, int key_x, int key_y);

struct PreprocessingDims {
  std::vector<int> aprime{2};  // |A'| values tried by random restarts
  int message = 0;             // |M|; 0 means no public message
};

struct OptimizedPreprocessing {
  PreprocessingStrategy strategy;  // best map found just above the threshold
  double threshold = 0.0;
  double bound_above = 0.0;        // its bound at threshold + 1e-4
};

struct OptimizeOptions {
  uint64_t seed = 0;
  int restarts = 256;
  double tol = 1e-6;
  // Random restarts look for a positive bound this far below the threshold
  // set by the seeds.
  double probe_gap = 2e-4;
};

// Heuristic maximum of the one-way bound over stochastic maps, followed by
// bisection for the largest parameter at which it is not positive. A bound
// counts as positive above 1e-12. Seeds: the named strategies, noisy
// variants, and the leading direction of the quadratic expansion of the
// bound around a constant binary map.
OptimizedPreprocessing optimize_preprocessing(const ContextBuilder& builder,
                                              const PreprocessingDims& dims,
                                              double lo, double hi,
                                              const OptimizeOptions& opt = {});

// Seed-only part of the above: best bound over the seed strategies at one
// context, and the strategy achieving it.
std::pair<PreprocessingStrategy, double> best_seeded_strategy(
    const BoundContext& ctx, const PreprocessingDims& dims);

inline constexpr double kPositiveBound = 1e-12;

struct SweepRow {
  double theta = 0.0;
  std::string strategy;  // "det" or "det-np"
  double eta_crit = 0.0;
  double phiA = 0.0;
  double bound_at_crit_plus_eps = 0.0;
};

// Critical detection efficiency of the partially entangled 2333 protocol
// for each theta and strategy ("det" or "det-np", the latter in the p -> 1/2
// limit).
std::vector<SweepRow> sweep(const std::vector<double>& theta_grid,
                            const std::vector<std::string>& strategies);

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace ccb

#endif  // CCBOUND_THRESHOLDS_H_
