#ifndef CCBOUND_REPRODUCE_H_
#define CCBOUND_REPRODUCE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ccbound/postselect.h"
#include "ccbound/thresholds.h"

namespace ccb {

// Bracket for the noise parameter of a maximally entangled protocol: from
// the locality threshold up to 1.
std::pair<double, double> noise_range(const std::string& tag);

// Critical noise of a named one-way strategy on a maximally entangled
// protocol with default key settings. Names: none, det, rand, announce,
// det-np, rand-np (the last two in the p -> 1/2 limit). On visibility tags
// "np" is accepted for det-np.
double named_threshold(const std::string& tag, const std::string& strategy);

// Two-way threshold under a fixed Eve map. Lossy tags bin no-click to 0 on
// both sides.
double two_way_threshold(const std::string& tag, int key_x, int key_y,
                         bool permuted_map);

// Heuristic threshold over all preprocessing maps. Lossy tags search
// |A'| in {2, 3} together with a binary message; visibility tags search
// binary A' without a message.
OptimizedPreprocessing any_threshold(const std::string& tag, uint64_t seed,
                                     int restarts = 256);

struct ReproCell {
  std::string row;     // scenario tag
  std::string column;
  double value = 0.0;  // percent
  double target = 0.0;
  double tol = 0.0;
  bool literature = false;  // quoted reference value, not computed
  bool pass() const;
};

// Critical-noise table cells followed by extra named thresholds for 2333 and 2233.
std::vector<ReproCell> table1(uint64_t seed);
std::string table1_csv(const std::vector<ReproCell>& cells);

// Log-spaced theta grid from 1e-3 to pi/2 (n >= 2 points).
std::vector<double> fig2_theta_grid(int n);

struct Fig3Row {
  double eta = 0.0;
  PostselectOptimum opt;
};
std::vector<Fig3Row> fig3(const std::vector<double>& eta_grid, uint64_t seed,
                          int restarts = 128);
std::string fig3_csv(const std::vector<Fig3Row>& rows);

}  // namespace ccb

#endif  // CCBOUND_REPRODUCE_H_
