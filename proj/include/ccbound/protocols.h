#ifndef CCBOUND_PROTOCOLS_H_
#define CCBOUND_PROTOCOLS_H_

#include <string>

#include "ccbound/correlations.h"
#include "ccbound/localset.h"

namespace ccb {

// A decomposed noisy correlation together with its key settings.
struct ProtocolPoint {
  CCDecomposition dec;
  QubitStrategy strategy;
  int key_x = 0;
  int key_y = 0;
};

// Maximally entangled CHSH protocols. Lossy tags 2333 and 2233 take a
// detection efficiency; visibility tags 2322, 2222 and 2422 take V. The
// noiseless correlation (padded with an empty no-click outcome when lossy)
// is the nonlocal anchor. Negative key settings select the defaults:
// (0, 2) when Bob has a dedicated key setting, (0, 0) otherwise.
ProtocolPoint maxent_protocol(const std::string& tag, double noise,
                              int key_x = -1, int key_y = -1);

// Partially entangled 2333 protocol with CHSH-optimal measurements for the
// given detection efficiency, keys (0, 2).
ProtocolPoint partial_protocol(double theta, double eta);

// Visibility and loss combined: V is applied first, then eta.
ProtocolPoint lossy_noisy_protocol(const QubitStrategy& strategy, double V,
                                   double eta, int key_x, int key_y);

bool is_lossy_tag(const std::string& tag);
bool is_visibility_tag(const std::string& tag);

}  // namespace ccb

#endif  // CCBOUND_PROTOCOLS_H_
