#ifndef CCBOUND_CORRELATIONS_H_
#define CCBOUND_CORRELATIONS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ccbound/infotheory.h"

namespace ccb {

inline constexpr uint64_t kMaxVertices = 10'000'000;

struct Scenario {
  int mA = 2;
  int mB = 2;
  int nA = 2;
  int nB = 2;

  // Throws if any field is non-positive or outcome counts are below 2.
  void validate() const;
  uint64_t vertex_count() const;  // nA^mA * nB^mB, throws above kMaxVertices
  size_t size() const { return size_t(mA) * mB * nA * nB; }
  std::string tag() const;  // e.g. "2333"
  bool operator==(const Scenario&) const = default;
};

Scenario parse_scenario_tag(const std::string& tag);

// p(a,b|x,y), flat row-major in (x, y, a, b).
class Correlation {
 public:
  Correlation() = default;
  // Validates entries, normalization and no-signalling.
  Correlation(Scenario scenario, std::vector<double> probs);

  const Scenario& scenario() const { return scenario_; }
  const std::vector<double>& probs() const { return probs_; }
  double operator()(int x, int y, int a, int b) const {
    return probs_[index(x, y, a, b)];
  }
  size_t index(int x, int y, int a, int b) const {
    return ((size_t(x) * scenario_.mB + y) * scenario_.nA + a) * scenario_.nB +
           b;
  }

  double alice_marginal(int x, int a) const;  // evaluated at y = 0
  double bob_marginal(int y, int b) const;    // evaluated at x = 0

  // p(a,b|x,y) at fixed settings, as a 2-axis joint distribution.
  JointDistribution key_table(int x, int y) const;

 private:
  Scenario scenario_;
  std::vector<double> probs_;
};

// Maximum violation of normalization / no-signalling, for diagnostics.
double no_signalling_violation(const Correlation& c);

struct QubitStrategy {
  double theta = 0.0;
  std::vector<double> alice_angles;
  std::vector<double> bob_angles;
};

Correlation correlation_from_qubit_strategy(const QubitStrategy& s);
Correlation apply_visibility(const Correlation& c, double V);
// Adds a no-click outcome as the last index for each party.
Correlation apply_detection_efficiency(const Correlation& c, double eta);

// Settings and outcomes of the two correlations are paired up:
// x = x1 * mA2 + x2, a = a1 * nA2 + a2, and likewise for Bob.
Correlation product_correlation(const Correlation& c1, const Correlation& c2);

double s_det(const QubitStrategy& s, double eta);

// Bob's CHSH angles {phi_B+, phi_B-} from the closed-form optimum for given
// (theta, eta, phi_A), with A_0 = sigma_z.
std::pair<double, double> bob_chsh_angles(double theta, double eta,
                                          double phiA);

// Maximizes s_det over phi_A in [0, pi/2]. Bob receives
// {phi_B+, phi_B-} followed by sigma_z when bob_settings == 3.
QubitStrategy chsh_optimal_strategy(double theta, double eta,
                                    int bob_settings = 3);

// Maximally entangled CHSH strategy: Alice {sigma_z, sigma_x}, Bob
// {(z+x)/sqrt2, (z-x)/sqrt2} followed by sigma_z (bob_settings >= 3) and
// sigma_x (bob_settings == 4).
QubitStrategy maxent_chsh_strategy(int bob_settings);

}  // namespace ccb

#endif  // CCBOUND_CORRELATIONS_H_
