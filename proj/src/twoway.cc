#include "ccbound/twoway.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "ccbound/ccattack.h"

namespace ccb {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

double xlog2x(double x) { return x > kLogFloor ? x * std::log2(x) : 0.0; }

// Dense view of an (A, B, E) table for the map search.
struct Table {
  int na, nb, ne;
  std::vector<double> p;  // (a, b, e) row-major
  double operator()(int a, int b, int e) const {
    return p[(size_t(a) * nb + b) * ne + e];
  }
};

// p(a,b,f) for F = W(E); W is ne x ne row-major (f, e).
std::vector<double> push(const Table& t, const std::vector<double>& W) {
  std::vector<double> q(size_t(t.na) * t.nb * t.ne, 0.0);
  for (int a = 0; a < t.na; ++a)
    for (int b = 0; b < t.nb; ++b)
      for (int e = 0; e < t.ne; ++e) {
        double v = t(a, b, e);
        if (v == 0.0) continue;
        for (int f = 0; f < t.ne; ++f)
          q[(size_t(a) * t.nb + b) * t.ne + f] += W[f * t.ne + e] * v;
      }
  return q;
}

struct Marginals {
  std::vector<double> af, bf, f;
};

Marginals marginals(const Table& t, const std::vector<double>& q) {
  Marginals m{std::vector<double>(size_t(t.na) * t.ne, 0.0),
              std::vector<double>(size_t(t.nb) * t.ne, 0.0),
              std::vector<double>(t.ne, 0.0)};
  for (int a = 0; a < t.na; ++a)
    for (int b = 0; b < t.nb; ++b)
      for (int f = 0; f < t.ne; ++f) {
        double v = q[(size_t(a) * t.nb + b) * t.ne + f];
        m.af[a * t.ne + f] += v;
        m.bf[b * t.ne + f] += v;
        m.f[f] += v;
      }
  return m;
}

double cmi(const Table& t, const std::vector<double>& W) {
  auto q = push(t, W);
  auto m = marginals(t, q);
  double s = 0.0;
  for (double v : q) s += xlog2x(v);
  for (double v : m.f) s += xlog2x(v);
  for (double v : m.af) s -= xlog2x(v);
  for (double v : m.bf) s -= xlog2x(v);
  return std::max(0.0, s);
}

// dI/dW(f|e) = sum_ab p(a,b,e) log2[p(abf) p(f) / (p(af) p(bf))].
std::vector<double> gradient(const Table& t, const std::vector<double>& W) {
  auto q = push(t, W);
  auto m = marginals(t, q);
  std::vector<double> g(size_t(t.ne) * t.ne, 0.0);
  for (int a = 0; a < t.na; ++a)
    for (int b = 0; b < t.nb; ++b)
      for (int f = 0; f < t.ne; ++f) {
        double v = q[(size_t(a) * t.nb + b) * t.ne + f];
        if (v <= kLogFloor) continue;
        double l = std::log2(v * m.f[f] / (m.af[a * t.ne + f] * m.bf[b * t.ne + f]));
        for (int e = 0; e < t.ne; ++e) g[f * t.ne + e] += t(a, b, e) * l;
      }
  return g;
}

// Euclidean projection of each column onto the probability simplex.
void project_columns(std::vector<double>& W, int n) {
  std::vector<double> u(n);
  for (int e = 0; e < n; ++e) {
    for (int f = 0; f < n; ++f) u[f] = W[f * n + e];
    std::sort(u.begin(), u.end(), std::greater<>());
    double cum = 0.0, shift = 0.0;
    for (int j = 0; j < n; ++j) {
      cum += u[j];
      double s = (cum - 1.0) / (j + 1);
      if (u[j] - s > 0.0) shift = s;
    }
    for (int f = 0; f < n; ++f) W[f * n + e] = std::max(0.0, W[f * n + e] - shift);
  }
}

// Projected gradient descent with a backtracking step; stops once an
// accepted step improves by less than 1e-10.
double descend(const Table& t, std::vector<double>& W) {
  constexpr double kMinGain = 1e-10;
  double val = cmi(t, W);
  double step = 1.0;
  std::vector<double> trial(W.size());
  for (int it = 0; it < 5000 && val > 0.0; ++it) {
    auto g = gradient(t, W);
    double gain = 0.0;
    for (; step > 1e-14; step *= 0.5) {
      for (size_t k = 0; k < W.size(); ++k) trial[k] = W[k] - step * g[k];
      project_columns(trial, t.ne);
      double tv = cmi(t, trial);
      if (tv < val) {
        gain = val - tv;
        W.swap(trial);
        val = tv;
        break;
      }
    }
    if (gain < kMinGain) break;
    step *= 2.0;
  }
  return val;
}

Table as_table(const JointDistribution& tri) {
  if (tri.rank() != 3)
    throw std::invalid_argument("expected an (A, B, E) table");
  return {tri.dim(0), tri.dim(1), tri.dim(2), tri.probs()};
}

int bin(int outcome, int target) { return outcome < 2 ? outcome : target; }

}  // namespace

JointDistribution binned_tripartite_lossy(const CCDecomposition& dec,
                                          int key_x, int key_y, int binA,
                                          int binB) {
  const Scenario& s = dec.observed.scenario();
  if (s.nA != 3 || s.nB != 3)
    throw std::invalid_argument("binned table needs three outcomes per party");
  if ((binA != 0 && binA != 1) || (binB != 0 && binB != 1))
    throw std::invalid_argument("binning targets must be 0 or 1");
  JointDistribution tri = build_tripartite(dec, key_x, key_y);
  std::vector<double> p(2 * 2 * 5, 0.0);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int e = 0; e < 10; ++e) {
        double v = tri.at({a, b, e});
        if (v == 0.0) continue;
        int et = e == 9 ? 4 : bin(e / 3, binA) * 2 + bin(e % 3, binB);
        p[(bin(a, binA) * 2 + bin(b, binB)) * 5 + et] += v;
      }
  return JointDistribution({2, 2, 5}, std::move(p),
                           {{"0", "1"}, {"0", "1"},
                            {"(0,0)", "(0,1)", "(1,0)", "(1,1)", "?"}});
}

EveMap mixing_map(int n, const std::vector<int>& group) {
  std::vector<bool> in(n, false);
  for (int g : group) {
    if (g < 0 || g >= n || in[g])
      throw std::invalid_argument("mixing group must list distinct symbols");
    in[g] = true;
  }
  std::vector<double> m(size_t(n) * n, 0.0);
  for (int e = 0; e < n; ++e) {
    if (!in[e]) {
      m[e * n + e] = 1.0;
      continue;
    }
    for (int f : group) m[f * n + e] = 1.0 / group.size();
  }
  return StochasticMap(n, n, std::move(m));
}

EveMap canonical_eve_map() { return mixing_map(5, {1, 2, 4}); }
EveMap permuted_eve_map() { return mixing_map(5, {0, 3, 4}); }

double two_way_bound(const JointDistribution& tri, const EveMap& map) {
  if (tri.rank() != 3 || map.cols() != tri.dim(2))
    throw std::invalid_argument("Eve map does not match the E axis");
  return conditional_mutual_information(apply_map(tri, map, 2));
}

TwoWayValue two_way_bound_visibility(double V, const std::string& tag) {
  if (!(V >= 0.0 && V <= 1.0))
    throw std::domain_error("visibility outside [0,1]");
  double j, k;
  if (tag == "2322" || tag == "2422") {
    j = (1.0 - V) * (kSqrt2 - 1.0);
    k = 2.0 * (kSqrt2 * V - 1.0);
  } else if (tag == "2222") {
    j = (1.0 - V / kSqrt2) * (kSqrt2 - 1.0);
    k = (1.0 + 1.0 / kSqrt2) * (kSqrt2 * V - 1.0);
  } else {
    throw std::invalid_argument("no two-way visibility closed form for " + tag);
  }
  if (kSqrt2 * V <= 1.0) return {0.0, true};
  double r = (1.0 + kSqrt2) / 2.0 *
             (xlog2x(j) + xlog2x(k) - xlog2x(j + k) + j + k);
  return {r, false};
}

EveMapResult minimize_over_eve_maps(const JointDistribution& tri,
                                    uint64_t seed, int restarts) {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  const Table t = as_table(tri);
  const int n = t.ne;
  std::vector<std::vector<double>> starts;
  starts.push_back(StochasticMap::identity(n).data());
  if (n == 5) {
    starts.push_back(canonical_eve_map().data());
    starts.push_back(permuted_eve_map().data());
  }
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> W(size_t(n) * n);
    for (int e = 0; e < n; ++e) {
      double s = 0.0;
      for (int f = 0; f < n; ++f) s += W[f * n + e] = expo(rng);
      for (int f = 0; f < n; ++f) W[f * n + e] /= s;
    }
    starts.push_back(std::move(W));
  }

  EveMapResult best{StochasticMap::identity(n), cmi(t, starts[0])};
  for (auto& W : starts) {
    double start = cmi(t, W);
    if (start < best.value) best = {StochasticMap(n, n, W), start};
    double v = descend(t, W);
    if (v < best.value) {
      // Projection leaves columns stochastic up to rounding; renormalize.
      for (int e = 0; e < n; ++e) {
        double s = 0.0;
        for (int f = 0; f < n; ++f) s += W[f * n + e];
        for (int f = 0; f < n; ++f) W[f * n + e] /= s;
      }
      best = {StochasticMap(n, n, W), v};
    }
  }
  best.value = two_way_bound(tri, best.map);
  return best;
}

}  // namespace ccb
