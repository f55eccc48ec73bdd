#include "ccbound/ccattack.h"

#include <stdexcept>
#include <string>

namespace ccb {

namespace {

void require_size(int n) {
  if (n < 2) throw std::invalid_argument("preprocessing needs n >= 2");
}

// 2 x n map sending outcome a < 2 to itself and every other outcome to
// `target`.
StochasticMap bin_to(int n, int target) {
  if (target != 0 && target != 1)
    throw std::invalid_argument("binning target must be 0 or 1");
  std::vector<double> m(2 * n, 0.0);
  for (int a = 0; a < n; ++a) m[(a < 2 ? a : target) * n + a] = 1.0;
  return StochasticMap(2, n, std::move(m));
}

StochasticMap flip(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("flip probability outside [0,1]");
  return StochasticMap({{1.0 - p, p}, {p, 1.0 - p}});
}

std::string label(int i) { return std::to_string(i); }

}  // namespace

PreprocessingStrategy PreprocessingStrategy::none(int n) {
  require_size(n);
  return {"none", StochasticMap::identity(n), std::nullopt};
}

PreprocessingStrategy PreprocessingStrategy::det_bin(int n, int target) {
  require_size(n);
  return {"det", bin_to(n, target), std::nullopt};
}

PreprocessingStrategy PreprocessingStrategy::det_bin_np(int n, double p,
                                                        int target) {
  require_size(n);
  return {"det-np", flip(p).compose(bin_to(n, target)), std::nullopt};
}

PreprocessingStrategy PreprocessingStrategy::rand_bin(int n) {
  require_size(n);
  std::vector<double> m(2 * n, 0.0);
  for (int a = 0; a < n; ++a) {
    if (a < 2) {
      m[a * n + a] = 1.0;
    } else {
      m[a] = m[n + a] = 0.5;
    }
  }
  return {"rand", StochasticMap(2, n, std::move(m)), std::nullopt};
}

PreprocessingStrategy PreprocessingStrategy::rand_bin_np(int n, double p) {
  PreprocessingStrategy s = rand_bin(n);
  s.name = "rand-np";
  s.a_to_aprime = flip(p).compose(s.a_to_aprime);
  return s;
}

PreprocessingStrategy PreprocessingStrategy::announce_noclick(int n) {
  require_size(n);
  if (n < 3)
    throw std::invalid_argument("announce strategy needs a no-click outcome");
  // M = 0 for a click, 1 for no click.
  std::vector<double> m(2 * n, 0.0);
  for (int a = 0; a < n; ++a) m[(a == n - 1 ? 1 : 0) * n + a] = 1.0;
  return {"announce", StochasticMap::identity(n),
          StochasticMap(2, n, std::move(m))};
}

JointDistribution build_tripartite(const CCDecomposition& dec, int key_x,
                                   int key_y) {
  const Correlation& obs = dec.observed;
  const Scenario& s = obs.scenario();
  if (key_x < 0 || key_x >= s.mA || key_y < 0 || key_y >= s.mB)
    throw std::out_of_range("key setting (" + std::to_string(key_x) + ", " +
                            std::to_string(key_y) + ") outside scenario " +
                            s.tag());
  const int ne = s.nA * s.nB + 1;
  const int unknown = ne - 1;
  std::vector<double> p(size_t(s.nA) * s.nB * ne, 0.0);
  auto cell = [&](int a, int b, int e) -> double& {
    return p[(size_t(a) * s.nB + b) * ne + e];
  };
  for (const auto& [idx, w] : dec.vertex_weights) {
    DeterministicVertex v = vertex_at(s, idx);
    int a = v.alice[key_x], b = v.bob[key_y];
    cell(a, b, a * s.nB + b) += w;
  }
  for (size_t j = 0; j < dec.anchors.size(); ++j)
    for (int a = 0; a < s.nA; ++a)
      for (int b = 0; b < s.nB; ++b)
        cell(a, b, unknown) += dec.nonlocal_weights[j] * dec.anchors[j](key_x, key_y, a, b);

  // The LP enforces normalization only to its feasibility tolerance.
  double total = 0.0;
  for (double v : p) total += v;
  for (double& v : p) v /= total;

  std::vector<std::string> la, lb, le;
  for (int a = 0; a < s.nA; ++a) la.push_back(label(a));
  for (int b = 0; b < s.nB; ++b) lb.push_back(label(b));
  for (int a = 0; a < s.nA; ++a)
    for (int b = 0; b < s.nB; ++b)
      le.push_back("(" + label(a) + "," + label(b) + ")");
  le.push_back("?");
  return JointDistribution({s.nA, s.nB, ne}, std::move(p), {la, lb, le});
}

double ec_term(const JointDistribution& key_table,
               const PreprocessingStrategy& strat) {
  if (key_table.rank() != 2)
    throw std::invalid_argument("ec_term expects an (A, B) table");
  if (key_table.dim(0) != strat.input_size())
    throw std::invalid_argument("strategy '" + strat.name + "' takes " +
                                std::to_string(strat.input_size()) +
                                " outcomes, key table has " +
                                std::to_string(key_table.dim(0)));
  JointDistribution j = apply_map(key_table, strat.a_to_aprime, 0);
  if (!strat.aprime_to_m) return conditional_entropy(j, 0, {1});
  j = attach_channel(j, *strat.aprime_to_m, 0);  // (A', B, M)
  return conditional_entropy(j, 0, {1, 2});
}

double pa_term(const CCDecomposition& dec, const PreprocessingStrategy& strat,
               int key_x, int key_y) {
  const Scenario& s = dec.observed.scenario();
  if (s.nA != strat.input_size())
    throw std::invalid_argument("strategy '" + strat.name + "' takes " +
                                std::to_string(strat.input_size()) +
                                " outcomes, scenario " + s.tag() + " has " +
                                std::to_string(s.nA));
  JointDistribution tri = build_tripartite(dec, key_x, key_y);
  if (strat.aprime_to_m) return pa_term(tri, strat);

  // Local rounds: Eve knows a, so only the column entropy of the map is left.
  // Nonlocal rounds: entropy of the mapped anchor marginal.
  const StochasticMap& S = strat.a_to_aprime;
  const int unknown = s.nA * s.nB;
  double local = 0.0;
  for (int a = 0; a < s.nA; ++a)
    for (int b = 0; b < s.nB; ++b)
      local += tri.at({a, b, a * s.nB + b}) * S.column_entropy(a);
  double q_nl = 0.0;
  std::vector<double> marginal(s.nA, 0.0);
  for (int a = 0; a < s.nA; ++a)
    for (int b = 0; b < s.nB; ++b) {
      double v = tri.at({a, b, unknown});
      marginal[a] += v;
      q_nl += v;
    }
  if (q_nl <= 0.0) return local;
  std::vector<double> mapped(S.rows(), 0.0);
  for (int r = 0; r < S.rows(); ++r)
    for (int a = 0; a < s.nA; ++a) mapped[r] += S(r, a) * marginal[a] / q_nl;
  return local + q_nl * shannon_entropy(mapped);
}

double pa_term(const JointDistribution& tripartite,
               const PreprocessingStrategy& strat) {
  if (tripartite.rank() != 3 || tripartite.dim(0) != strat.input_size())
    throw std::invalid_argument("strategy '" + strat.name +
                                "' does not match the tripartite table");
  JointDistribution j = apply_map(tripartite, strat.a_to_aprime, 0);
  if (!strat.aprime_to_m) return conditional_entropy(j, 0, {2});
  j = attach_channel(j, *strat.aprime_to_m, 0);  // (A', B, E, M)
  return conditional_entropy(j, 0, {2, 3});
}

double one_way_bound(const CCDecomposition& dec,
                     const PreprocessingStrategy& strat, int key_x,
                     int key_y) {
  return pa_term(dec, strat, key_x, key_y) -
         ec_term(dec.observed.key_table(key_x, key_y), strat);
}

}  // namespace ccb
