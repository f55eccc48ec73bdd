#include "ccbound/localset.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccbound/lp.h"

namespace ccb {

namespace {

// Fills `digits` with the base-n representation of `value`, most
// significant digit first.
void decode(uint64_t value, int n, std::vector<int>& digits) {
  for (int k = static_cast<int>(digits.size()) - 1; k >= 0; --k) {
    digits[k] = static_cast<int>(value % n);
    value /= n;
  }
}

uint64_t ipow(uint64_t b, int e) {
  uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

DeterministicVertex vertex_at(const Scenario& s, uint64_t index) {
  const uint64_t total = s.vertex_count();
  if (index >= total) throw std::out_of_range("vertex index out of range");
  const uint64_t nbob = ipow(s.nB, s.mB);
  DeterministicVertex v{std::vector<int>(s.mA), std::vector<int>(s.mB)};
  decode(index / nbob, s.nA, v.alice);
  decode(index % nbob, s.nB, v.bob);
  return v;
}

std::vector<DeterministicVertex> enumerate_vertices(const Scenario& s) {
  const uint64_t total = s.vertex_count();
  std::vector<DeterministicVertex> out;
  out.reserve(total);
  for (uint64_t i = 0; i < total; ++i) out.push_back(vertex_at(s, i));
  return out;
}

Correlation vertex_correlation(const Scenario& s, const DeterministicVertex& v) {
  std::vector<double> p(s.size(), 0.0);
  for (int x = 0; x < s.mA; ++x)
    for (int y = 0; y < s.mB; ++y)
      p[((size_t(x) * s.mB + y) * s.nA + v.alice[x]) * s.nB + v.bob[y]] = 1.0;
  return Correlation(s, std::move(p));
}

std::vector<double> CCDecomposition::reconstruction() const {
  const Scenario& s = observed.scenario();
  std::vector<double> r(s.size(), 0.0);
  for (const auto& [idx, w] : vertex_weights) {
    DeterministicVertex v = vertex_at(s, idx);
    for (int x = 0; x < s.mA; ++x)
      for (int y = 0; y < s.mB; ++y)
        r[observed.index(x, y, v.alice[x], v.bob[y])] += w;
  }
  for (size_t j = 0; j < anchors.size(); ++j)
    for (size_t k = 0; k < r.size(); ++k)
      r[k] += nonlocal_weights[j] * anchors[j].probs()[k];
  return r;
}

double CCDecomposition::reconstruction_error() const {
  auto r = reconstruction();
  double e = 0.0;
  for (size_t k = 0; k < r.size(); ++k)
    e = std::max(e, std::abs(r[k] - observed.probs()[k]));
  return e;
}

CCDecomposition max_local_weight(const Correlation& observed,
                                 const std::vector<Correlation>& anchors) {
  if (anchors.empty())
    throw std::invalid_argument("max_local_weight needs at least one anchor");
  const Scenario& s = observed.scenario();
  for (const auto& a : anchors)
    if (!(a.scenario() == s))
      throw std::invalid_argument("anchor scenario " + a.scenario().tag() +
                                  " does not match observed " + s.tag());
  const uint64_t nv = s.vertex_count();
  const int rows = static_cast<int>(s.size()) + 1;
  const int cols = static_cast<int>(nv + anchors.size());

  lp::Problem pr;
  pr.rows = rows;
  pr.cols = cols;
  pr.A.assign(static_cast<size_t>(rows) * cols, 0.0);
  pr.b.assign(rows, 0.0);
  pr.c.assign(cols, 0.0);
  const uint64_t nbob = ipow(s.nB, s.mB);
  std::vector<int> alice(s.mA), bob(s.mB);
  for (uint64_t v = 0; v < nv; ++v) {
    decode(v / nbob, s.nA, alice);
    decode(v % nbob, s.nB, bob);
    for (int x = 0; x < s.mA; ++x)
      for (int y = 0; y < s.mB; ++y)
        pr.A[observed.index(x, y, alice[x], bob[y]) * cols + v] = 1.0;
    pr.A[static_cast<size_t>(rows - 1) * cols + v] = 1.0;
    pr.c[v] = 1.0;
  }
  for (size_t j = 0; j < anchors.size(); ++j) {
    const auto& ap = anchors[j].probs();
    for (size_t k = 0; k < ap.size(); ++k) pr.A[k * cols + nv + j] = ap[k];
    pr.A[static_cast<size_t>(rows - 1) * cols + nv + j] = 1.0;
  }
  std::copy(observed.probs().begin(), observed.probs().end(), pr.b.begin());
  pr.b[rows - 1] = 1.0;

  lp::Result res = lp::solve(pr);
  if (res.status != lp::Status::kOptimal)
    throw InfeasibleDecomposition(
        std::string("local-weight LP failed: ") + lp::to_string(res.status) +
        " (residual " + std::to_string(res.residual) + ")");

  CCDecomposition dec;
  dec.observed = observed;
  dec.anchors = anchors;
  dec.feasible_at_tolerance = res.feasible_at_tolerance;
  dec.residual = res.residual;
  for (uint64_t v = 0; v < nv; ++v)
    if (res.x[v] > 0.0) {
      dec.vertex_weights[v] = res.x[v];
      dec.q_local += res.x[v];
    }
  for (size_t j = 0; j < anchors.size(); ++j)
    dec.nonlocal_weights.push_back(res.x[nv + j]);
  return dec;
}

double local_weight_maxent_eta(double eta) {
  return std::min(1.0, (1.0 - eta) * (1.0 + (3.0 + 2.0 * std::sqrt(2.0)) * eta));
}

double local_weight_visibility(double V) {
  return std::min(1.0, (1.0 - V) / (1.0 - 1.0 / std::sqrt(2.0)));
}

double local_weight_partial_theta0(double eta) {
  return std::min(1.0, 1.0 - eta * (3.0 * eta - 2.0));
}

double chsh_facet_value(const Correlation& c, int x0, int x1, int y0, int y1) {
  const Scenario& s = c.scenario();
  if (s.nA != 2 || s.nB != 2)
    throw std::invalid_argument("chsh_facet_value needs binary outcomes");
  for (int x : {x0, x1})
    if (x < 0 || x >= s.mA) throw std::out_of_range("Alice setting index");
  for (int y : {y0, y1})
    if (y < 0 || y >= s.mB) throw std::out_of_range("Bob setting index");
  auto E = [&](int x, int y) {
    return c(x, y, 0, 0) - c(x, y, 0, 1) - c(x, y, 1, 0) + c(x, y, 1, 1);
  };
  return E(x0, y0) + E(x0, y1) + E(x1, y0) - E(x1, y1);
}

double ch_facet_value(const Correlation& c) {
  const Scenario& s = c.scenario();
  if (s.mA < 2 || s.mB < 2)
    throw std::invalid_argument("ch_facet_value needs two settings per party");
  return -c.alice_marginal(0, 1) - c.bob_marginal(0, 1) + c(0, 0, 1, 1) +
         c(0, 1, 1, 1) + c(1, 0, 1, 1) - c(1, 1, 1, 1);
}

}  // namespace ccb
