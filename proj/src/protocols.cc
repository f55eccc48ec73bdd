#include "ccbound/protocols.h"

#include <stdexcept>

namespace ccb {

bool is_lossy_tag(const std::string& tag) {
  return tag == "2333" || tag == "2233";
}

bool is_visibility_tag(const std::string& tag) {
  return tag == "2322" || tag == "2222" || tag == "2422";
}

ProtocolPoint lossy_noisy_protocol(const QubitStrategy& strategy, double V,
                                   double eta, int key_x, int key_y) {
  Correlation ideal = correlation_from_qubit_strategy(strategy);
  ProtocolPoint pt;
  pt.strategy = strategy;
  pt.key_x = key_x;
  pt.key_y = key_y;
  pt.dec = max_local_weight(
      apply_detection_efficiency(apply_visibility(ideal, V), eta),
      {apply_detection_efficiency(ideal, 1.0)});
  return pt;
}

ProtocolPoint maxent_protocol(const std::string& tag, double noise, int key_x,
                              int key_y) {
  Scenario s = parse_scenario_tag(tag);
  const bool lossy = is_lossy_tag(tag);
  if (!lossy && !is_visibility_tag(tag))
    throw std::invalid_argument("no maximally entangled protocol for " + tag);
  if (!(noise >= 0.0 && noise <= 1.0))
    throw std::domain_error("noise parameter outside [0,1]");
  ProtocolPoint pt;
  pt.strategy = maxent_chsh_strategy(s.mB);
  pt.key_x = key_x >= 0 ? key_x : 0;
  pt.key_y = key_y >= 0 ? key_y : (s.mB > 2 ? 2 : 0);
  Correlation ideal = correlation_from_qubit_strategy(pt.strategy);
  if (lossy) {
    pt.dec = max_local_weight(apply_detection_efficiency(ideal, noise),
                              {apply_detection_efficiency(ideal, 1.0)});
  } else {
    pt.dec = max_local_weight(apply_visibility(ideal, noise), {ideal});
  }
  return pt;
}

ProtocolPoint partial_protocol(double theta, double eta) {
  ProtocolPoint pt;
  pt.strategy = chsh_optimal_strategy(theta, eta, 3);
  pt.key_x = 0;
  pt.key_y = 2;
  Correlation ideal = correlation_from_qubit_strategy(pt.strategy);
  pt.dec = max_local_weight(apply_detection_efficiency(ideal, eta),
                            {apply_detection_efficiency(ideal, 1.0)});
  return pt;
}

}  // namespace ccb
