#include "ccbound/postselect.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "ccbound/correlations.h"
#include "ccbound/optimize.h"

namespace ccb {

namespace {

// Negative local-round mass beyond this means the decomposition does not
// match the observed table.
constexpr double kNegativeTol = 1e-10;

// Alice's binned 2 x 3 table q_{a b} from a lossy 3 x 3 key table.
std::vector<double> alice_binned(const JointDistribution& t) {
  if (t.rank() == 2 && t.dim(0) == 2 && t.dim(1) == 3) return t.probs();
  if (t.rank() != 2 || t.dim(0) != 3 || t.dim(1) != 3)
    throw std::invalid_argument("postselection expects a 3x3 or 2x3 key table");
  std::vector<double> q(6, 0.0);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) q[(a == 0 ? 0 : 3) + b] += t.at({a, b});
  return q;
}

// Weight of cell (a, b) in the postselected table: q^(number of 1s), with
// Bob's no-click counted as a 1.
double ps_weight(int a, int b, double q) {
  int ones = (a == 1) + (b >= 1);
  return ones == 0 ? 1.0 : ones == 1 ? q : q * q;
}

struct NonlocalPart {
  double q_nl = 0.0;
  double Q[2][2] = {{0, 0}, {0, 0}};  // averaged anchor key table
};

NonlocalPart nonlocal_part(const CCDecomposition& dec, int kx, int ky) {
  NonlocalPart nl;
  for (size_t j = 0; j < dec.anchors.size(); ++j) {
    const double v = dec.nonlocal_weights[j];
    nl.q_nl += v;
    const Correlation& an = dec.anchors[j];
    double clicks = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        nl.Q[a][b] += v * an(kx, ky, a, b);
        clicks += an(kx, ky, a, b);
      }
    if (std::abs(clicks - 1.0) > 1e-9)
      throw std::invalid_argument(
          "postselection needs anchors without no-click events");
  }
  if (nl.q_nl > 0.0)
    for (auto& row : nl.Q)
      for (double& x : row) x /= nl.q_nl;
  return nl;
}

void check_lossy(const CCDecomposition& dec, int kx, int ky) {
  const Scenario& s = dec.observed.scenario();
  if (s.nA != 3 || s.nB != 3)
    throw std::invalid_argument("postselection needs a lossy 3-outcome scenario");
  if (kx < 0 || kx >= s.mA || ky < 0 || ky >= s.mB)
    throw std::out_of_range("key setting outside scenario " + s.tag());
}

QubitStrategy tied_strategy(double theta, double phiA, double eta,
                            bool flipped) {
  auto [bp, bm] = bob_chsh_angles(theta, eta, phiA);
  const double shift = flipped ? std::numbers::pi : 0.0;
  return {theta, {shift, phiA + shift}, {bp + shift, bm + shift, shift}};
}

CCDecomposition decompose_2333(const QubitStrategy& s, double eta) {
  Correlation ideal = correlation_from_qubit_strategy(s);
  return max_local_weight(apply_detection_efficiency(ideal, eta),
                          {apply_detection_efficiency(ideal, 1.0)});
}

// Best q for a fixed decomposition; q = 10^s with s in [-8, 0].
std::pair<double, double> best_q(const CCDecomposition& dec) {
  auto f = [&](double s) {
    try {
      return ps_rate_upper_bound(dec, {std::pow(10.0, s)}, 0, 2);
    } catch (const std::domain_error&) {
      return -HUGE_VAL;
    }
  };
  double s = maximize_scalar(f, -8.0, 0.0, 1e-7, 64);
  return {std::pow(10.0, s), f(s)};
}

}  // namespace

PostselectedTable postselected_correlation(const JointDistribution& key_table,
                                           const PostselectParams& params) {
  const double q = params.q;
  if (!(q >= 0.0 && q <= 1.0))
    throw std::domain_error("acceptance probability outside [0,1]");
  std::vector<double> t = alice_binned(key_table);
  double total = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b) total += t[a * 3 + b] *= ps_weight(a, b, q);
  if (!(total > 0.0))
    throw std::domain_error("postselection discards every round");
  for (double& v : t) v /= total;
  return {JointDistribution({2, 3}, std::move(t),
                            {{"0", "1"}, {"0", "1", "noclick"}}),
          total};
}

double survival_probability(const JointDistribution& Q, double eta, double q) {
  if (Q.rank() != 2 || Q.dim(0) != 2 || Q.dim(1) != 2)
    throw std::invalid_argument("expected a 2x2 ideal key table");
  const double e = eta, f = 1.0 - eta;
  const double Q00 = Q.at({0, 0}), Q01 = Q.at({0, 1}), Q10 = Q.at({1, 0}),
               Q11 = Q.at({1, 1});
  const double A0 = Q00 + Q01, A1 = Q10 + Q11, B0 = Q00 + Q10, B1 = Q01 + Q11;
  return e * e * Q00 + q * (e * e * (Q01 + Q10) + f * e * (A0 + B0)) +
         q * q * (e * e * Q11 + e * f * (A1 + B1) + f * f);
}

double ps_ec_term(const JointDistribution& ps_table) {
  return conditional_entropy(ps_table, 0, {1});
}

double ps_pa_term(const CCDecomposition& dec, const PostselectParams& params,
                  int key_x, int key_y) {
  check_lossy(dec, key_x, key_y);
  const double q = params.q;
  NonlocalPart nl = nonlocal_part(dec, key_x, key_y);
  if (nl.q_nl <= 0.0) return 0.0;

  // Observed table with both parties binning no-click to 1.
  double obs[2][2] = {{0, 0}, {0, 0}};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      obs[std::min(a, 1)][std::min(b, 1)] += dec.observed(key_x, key_y, a, b);

  // Local rounds carry whatever the nonlocal part does not explain.
  double p_local = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double L = obs[a][b] - nl.q_nl * nl.Q[a][b];
      if (L < -kNegativeTol)
        throw std::runtime_error("local-round table has negative entry " +
                                 std::to_string(L));
      p_local += std::max(L, 0.0) * ps_weight(a, b, q);
    }
  const double p_nl = nl.Q[0][0] + q * (nl.Q[0][1] + nl.Q[1][0]) +
                      q * q * nl.Q[1][1];
  const double p_vp = nl.q_nl * p_nl + p_local;
  if (!(p_vp > 0.0)) throw std::domain_error("postselection discards every round");
  if (p_nl <= 0.0) return 0.0;
  return nl.q_nl * p_nl / p_vp *
         binary_entropy(std::clamp((nl.Q[0][0] + q * nl.Q[0][1]) / p_nl, 0.0, 1.0));
}

double ps_rate_upper_bound(const CCDecomposition& dec,
                           const PostselectParams& params, int key_x,
                           int key_y) {
  check_lossy(dec, key_x, key_y);
  PostselectedTable ps =
      postselected_correlation(dec.observed.key_table(key_x, key_y), params);
  return ps.p_vp * (ps_pa_term(dec, params, key_x, key_y) - ps_ec_term(ps.table));
}

double ps_bound_at(double theta, double phiA, double eta, double q,
                   bool flipped) {
  CCDecomposition dec =
      decompose_2333(tied_strategy(theta, phiA, eta, flipped), eta);
  return ps_rate_upper_bound(dec, {q}, 0, 2);
}

PostselectOptimum optimize_ps(double eta, uint64_t seed, int restarts) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::domain_error("detection efficiency outside (0,1]");
  constexpr double kHalfPi = std::numbers::pi / 2;
  constexpr double kMinLogTheta = -4.0;

  PostselectOptimum best;
  best.bound = -INFINITY;
  auto consider = [&](double theta, double phiA, bool flipped, double q,
                      double value) {
    if (value > best.bound) {
      QubitStrategy s = tied_strategy(theta, phiA, eta, flipped);
      best = {theta, phiA, s.alice_angles, s.bob_angles, q, flipped, value};
    }
  };

  // Reference point: CHSH-optimal maximally entangled measurements, q = 1.
  {
    QubitStrategy s = chsh_optimal_strategy(kHalfPi, eta, 3);
    double v = ps_rate_upper_bound(decompose_2333(s, eta), {1.0}, 0, 2);
    consider(kHalfPi, s.alice_angles[1], false, 1.0, v);
  }

  // x = (log10 theta, phiA); q is maximized inside.
  auto clamp_x = [&](const std::vector<double>& x) {
    return std::pair{std::pow(10.0, std::clamp(x[0], kMinLogTheta, std::log10(kHalfPi))),
                     std::clamp(x[1], 1e-6, kHalfPi)};
  };
  auto run = [&](std::vector<double> x0, bool flipped) {
    auto f = [&](const std::vector<double>& x) {
      auto [theta, phiA] = clamp_x(x);
      try {
        auto [q, v] = best_q(decompose_2333(tied_strategy(theta, phiA, eta, flipped), eta));
        consider(theta, phiA, flipped, q, v);
        return -v;
      } catch (const InfeasibleDecomposition&) {
        return HUGE_VAL;
      }
    };
    NelderMeadOptions opt;
    opt.initial_step = 0.25;
    opt.xtol = 1e-6;
    opt.ftol = 1e-15;
    opt.max_evaluations = 120;
    nelder_mead(f, std::move(x0), opt);
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_theta(kMinLogTheta, std::log10(kHalfPi));
  std::uniform_real_distribution<double> phi(0.0, kHalfPi);
  for (int r = 0; r < restarts; ++r) {
    double lt = log_theta(rng), p = phi(rng);
    run({lt, p}, r % 2 == 1);
  }
  return best;
}

}  // namespace ccb
