#include "ccbound/correlations.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ccbound/optimize.h"

namespace ccb {

namespace {

constexpr double kEntryTol = 1e-12;
constexpr double kSumTol = 1e-9;

uint64_t ipow(uint64_t base, int exp) {
  uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > kMaxVertices) return kMaxVertices + 1;
    r *= base;
  }
  return r;
}

struct Expectations {
  double a, b, ab;
};

// <A>, <B>, <AB> on cos(t/2)|00> + sin(t/2)|11> for z-x plane observables.
Expectations qubit_expectations(double theta, double pa, double pb) {
  return {std::cos(theta) * std::cos(pa), std::cos(theta) * std::cos(pb),
          std::cos(pa) * std::cos(pb) +
              std::sin(theta) * std::sin(pa) * std::sin(pb)};
}

}  // namespace

void Scenario::validate() const {
  if (mA < 1 || mB < 1)
    throw std::invalid_argument("scenario needs at least one setting");
  if (nA < 2 || nB < 2)
    throw std::invalid_argument("scenario needs at least two outcomes");
}

uint64_t Scenario::vertex_count() const {
  validate();
  uint64_t a = ipow(nA, mA), b = ipow(nB, mB);
  if (a > kMaxVertices || b > kMaxVertices || a * b > kMaxVertices)
    throw std::length_error("vertex count of scenario " + tag() +
                            " exceeds the 1e7 guard");
  return a * b;
}

std::string Scenario::tag() const {
  return std::to_string(mA) + std::to_string(mB) + std::to_string(nA) +
         std::to_string(nB);
}

Scenario parse_scenario_tag(const std::string& tag) {
  if (tag.size() != 4 ||
      !std::all_of(tag.begin(), tag.end(), [](char c) { return c >= '1' && c <= '9'; }))
    throw std::invalid_argument("scenario tag must be four digits, got '" +
                                tag + "'");
  Scenario s{tag[0] - '0', tag[1] - '0', tag[2] - '0', tag[3] - '0'};
  s.validate();
  return s;
}

Correlation::Correlation(Scenario scenario, std::vector<double> probs)
    : scenario_(scenario), probs_(std::move(probs)) {
  scenario_.validate();
  if (probs_.size() != scenario_.size())
    throw std::invalid_argument("correlation has " +
                                std::to_string(probs_.size()) +
                                " entries, scenario " + scenario_.tag() +
                                " needs " + std::to_string(scenario_.size()));
  for (double& p : probs_) {
    if (!(p >= -kEntryTol && p <= 1.0 + kEntryTol))
      throw std::invalid_argument("correlation entry outside [0,1]: " +
                                  std::to_string(p));
    p = std::clamp(p, 0.0, 1.0);
  }
  double v = no_signalling_violation(*this);
  if (v > kSumTol)
    throw std::invalid_argument(
        "correlation violates normalization or no-signalling by " +
        std::to_string(v));
}

double Correlation::alice_marginal(int x, int a) const {
  double s = 0.0;
  for (int b = 0; b < scenario_.nB; ++b) s += (*this)(x, 0, a, b);
  return s;
}

double Correlation::bob_marginal(int y, int b) const {
  double s = 0.0;
  for (int a = 0; a < scenario_.nA; ++a) s += (*this)(0, y, a, b);
  return s;
}

JointDistribution Correlation::key_table(int x, int y) const {
  if (x < 0 || x >= scenario_.mA || y < 0 || y >= scenario_.mB)
    throw std::out_of_range("setting index out of range");
  std::vector<double> t(size_t(scenario_.nA) * scenario_.nB);
  for (int a = 0; a < scenario_.nA; ++a)
    for (int b = 0; b < scenario_.nB; ++b)
      t[a * scenario_.nB + b] = (*this)(x, y, a, b);
  return JointDistribution({scenario_.nA, scenario_.nB}, t);
}

double no_signalling_violation(const Correlation& c) {
  const Scenario& s = c.scenario();
  double worst = 0.0;
  for (int x = 0; x < s.mA; ++x)
    for (int y = 0; y < s.mB; ++y) {
      double sum = 0.0;
      for (int a = 0; a < s.nA; ++a)
        for (int b = 0; b < s.nB; ++b) sum += c(x, y, a, b);
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  for (int x = 0; x < s.mA; ++x)
    for (int a = 0; a < s.nA; ++a) {
      double ref = c.alice_marginal(x, a);
      for (int y = 1; y < s.mB; ++y) {
        double m = 0.0;
        for (int b = 0; b < s.nB; ++b) m += c(x, y, a, b);
        worst = std::max(worst, std::abs(m - ref));
      }
    }
  for (int y = 0; y < s.mB; ++y)
    for (int b = 0; b < s.nB; ++b) {
      double ref = c.bob_marginal(y, b);
      for (int x = 1; x < s.mA; ++x) {
        double m = 0.0;
        for (int a = 0; a < s.nA; ++a) m += c(x, y, a, b);
        worst = std::max(worst, std::abs(m - ref));
      }
    }
  return worst;
}

Correlation correlation_from_qubit_strategy(const QubitStrategy& st) {
  if (st.alice_angles.empty() || st.bob_angles.empty())
    throw std::invalid_argument("qubit strategy needs at least one angle each");
  Scenario s{static_cast<int>(st.alice_angles.size()),
             static_cast<int>(st.bob_angles.size()), 2, 2};
  std::vector<double> p(s.size());
  size_t i = 0;
  for (double pa : st.alice_angles)
    for (double pb : st.bob_angles) {
      Expectations e = qubit_expectations(st.theta, pa, pb);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double sa = a ? -1.0 : 1.0, sb = b ? -1.0 : 1.0;
          p[i++] = 0.25 * (1.0 + sa * e.a + sb * e.b + sa * sb * e.ab);
        }
    }
  return Correlation(s, std::move(p));
}

Correlation apply_visibility(const Correlation& c, double V) {
  if (!(V >= 0.0 && V <= 1.0))
    throw std::domain_error("visibility outside [0,1]");
  const Scenario& s = c.scenario();
  double u = (1.0 - V) / (s.nA * s.nB);
  std::vector<double> p(c.probs());
  for (double& v : p) v = V * v + u;
  return Correlation(s, std::move(p));
}

Correlation apply_detection_efficiency(const Correlation& c, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::domain_error("detection efficiency outside [0,1]");
  const Scenario& s = c.scenario();
  Scenario o{s.mA, s.mB, s.nA + 1, s.nB + 1};
  const double e = eta, f = 1.0 - eta;
  std::vector<double> p(o.size(), 0.0);
  auto at = [&](int x, int y, int a, int b) -> double& {
    return p[((size_t(x) * o.mB + y) * o.nA + a) * o.nB + b];
  };
  for (int x = 0; x < s.mA; ++x)
    for (int y = 0; y < s.mB; ++y) {
      for (int a = 0; a < s.nA; ++a)
        for (int b = 0; b < s.nB; ++b) at(x, y, a, b) = e * e * c(x, y, a, b);
      for (int a = 0; a < s.nA; ++a) at(x, y, a, s.nB) = e * f * c.alice_marginal(x, a);
      for (int b = 0; b < s.nB; ++b) at(x, y, s.nA, b) = f * e * c.bob_marginal(y, b);
      at(x, y, s.nA, s.nB) = f * f;
    }
  return Correlation(o, std::move(p));
}

Correlation product_correlation(const Correlation& c1, const Correlation& c2) {
  const Scenario &s1 = c1.scenario(), &s2 = c2.scenario();
  Scenario o{s1.mA * s2.mA, s1.mB * s2.mB, s1.nA * s2.nA, s1.nB * s2.nB};
  o.vertex_count();
  std::vector<double> p(o.size());
  for (int x1 = 0; x1 < s1.mA; ++x1)
    for (int x2 = 0; x2 < s2.mA; ++x2)
      for (int y1 = 0; y1 < s1.mB; ++y1)
        for (int y2 = 0; y2 < s2.mB; ++y2)
          for (int a1 = 0; a1 < s1.nA; ++a1)
            for (int a2 = 0; a2 < s2.nA; ++a2)
              for (int b1 = 0; b1 < s1.nB; ++b1)
                for (int b2 = 0; b2 < s2.nB; ++b2) {
                  int x = x1 * s2.mA + x2, y = y1 * s2.mB + y2;
                  int a = a1 * s2.nA + a2, b = b1 * s2.nB + b2;
                  p[((size_t(x) * o.mB + y) * o.nA + a) * o.nB + b] =
                      c1(x1, y1, a1, b1) * c2(x2, y2, a2, b2);
                }
  return Correlation(o, std::move(p));
}

double s_det(const QubitStrategy& st, double eta) {
  if (st.alice_angles.size() < 2 || st.bob_angles.size() < 2)
    throw std::invalid_argument("s_det needs two settings per party");
  const double th = st.theta;
  auto corr = [&](int x, int y) {
    return qubit_expectations(th, st.alice_angles[x], st.bob_angles[y]).ab;
  };
  const Expectations e00 = qubit_expectations(th, st.alice_angles[0], st.bob_angles[0]);
  const double f = 1.0 - eta;
  return eta * eta * (corr(0, 0) + corr(1, 0) + corr(0, 1) - corr(1, 1)) +
         2.0 * eta * f * (e00.a + e00.b) + 2.0 * f * f;
}

std::pair<double, double> bob_chsh_angles(double theta, double eta,
                                          double phiA) {
  constexpr double alpha = 1.0;
  const double f = 1.0 - eta;
  const double P = alpha * eta + alpha * f * std::cos(theta);
  const double Q = eta * std::cos(phiA) + f * std::cos(theta);
  const double R = eta * std::sin(phiA) * std::sin(theta);
  auto z = [&](double u) {
    double n = std::hypot(u, R);
    return n > 0.0 ? u / n : 1.0;
  };
  const double zp = z(P + Q), zm = z(P - Q);
  return {std::atan2(std::sqrt(std::max(0.0, 1.0 - zp * zp)), zp),
          std::atan2(-std::sqrt(std::max(0.0, 1.0 - zm * zm)), zm)};
}

QubitStrategy chsh_optimal_strategy(double theta, double eta,
                                    int bob_settings) {
  if (!(theta > 0.0 && theta <= std::numbers::pi / 2 + 1e-12))
    throw std::domain_error("theta outside (0, pi/2]");
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::domain_error("eta outside (0, 1]");
  if (bob_settings < 2 || bob_settings > 3)
    throw std::invalid_argument("bob_settings must be 2 or 3");
  auto build = [&](double phiA) {
    auto [bp, bm] = bob_chsh_angles(theta, eta, phiA);
    QubitStrategy s{theta, {0.0, phiA}, {bp, bm}};
    if (bob_settings == 3) s.bob_angles.push_back(0.0);
    return s;
  };
  double phi = maximize_scalar([&](double p) { return s_det(build(p), eta); },
                               0.0, std::numbers::pi / 2, 1e-10);
  return build(phi);
}

QubitStrategy maxent_chsh_strategy(int bob_settings) {
  using std::numbers::pi;
  if (bob_settings < 2 || bob_settings > 4)
    throw std::invalid_argument("bob_settings must be 2, 3 or 4");
  QubitStrategy s{pi / 2, {0.0, pi / 2}, {pi / 4, -pi / 4}};
  if (bob_settings >= 3) s.bob_angles.push_back(0.0);
  if (bob_settings == 4) s.bob_angles.push_back(pi / 2);
  return s;
}

}  // namespace ccb
