#include "ccbound/optimize.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ccb {

double maximize_scalar(const std::function<double(double)>& f, double lo,
                       double hi, double tol, int grid) {
  if (!(hi > lo)) throw std::invalid_argument("maximize_scalar: empty bracket");
  int best = 0;
  double best_v = -INFINITY;
  const double h = (hi - lo) / grid;
  for (int i = 0; i <= grid; ++i) {
    double v = f(lo + i * h);
    if (v > best_v) best_v = v, best = i;
  }
  double a = lo + std::max(0, best - 1) * h;
  double b = lo + std::min(grid, best + 1) * h;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d, d = c, fd = fc;
      c = b - g * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + g * (b - a), fd = f(d);
    }
  }
  double x = 0.5 * (a + b);
  // The bracket endpoints are grid points; keep the better of the two.
  double fx = f(x), fg = f(lo + best * h);
  return fx >= fg ? x : lo + best * h;
}

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, const NelderMeadOptions& opt) {
  const int n = static_cast<int>(x0.size());
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    double v = f(x);
    return std::isnan(v) ? INFINITY : v;
  };
  for (int i = 0; i < n; ++i) pts[i + 1][i] += opt.initial_step;
  for (int i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  std::vector<int> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  while (evals < opt.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return vals[a] < vals[b]; });
    const int lo = order[0], hi = order[n], nh = order[n - 1];
    double spread = 0.0;
    for (int i = 0; i <= n; ++i)
      for (int k = 0; k < n; ++k)
        spread = std::max(spread, std::abs(pts[i][k] - pts[lo][k]));
    if (std::abs(vals[hi] - vals[lo]) <= opt.ftol && spread <= opt.xtol) break;
    if (spread <= opt.xtol * 1e-3) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (int i = 0; i <= n; ++i)
      if (i != hi)
        for (int k = 0; k < n; ++k) centroid[k] += pts[i][k] / n;
    for (int k = 0; k < n; ++k) xr[k] = 2 * centroid[k] - pts[hi][k];
    double fr = eval(xr);
    if (fr < vals[lo]) {
      for (int k = 0; k < n; ++k) xe[k] = 3 * centroid[k] - 2 * pts[hi][k];
      double fe = eval(xe);
      if (fe < fr) pts[hi] = xe, vals[hi] = fe;
      else pts[hi] = xr, vals[hi] = fr;
    } else if (fr < vals[nh]) {
      pts[hi] = xr, vals[hi] = fr;
    } else {
      bool outside = fr < vals[hi];
      for (int k = 0; k < n; ++k)
        xc[k] = outside ? centroid[k] + 0.5 * (xr[k] - centroid[k])
                        : centroid[k] + 0.5 * (pts[hi][k] - centroid[k]);
      double fc = eval(xc);
      if (fc < std::min(fr, vals[hi])) {
        pts[hi] = xc, vals[hi] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == lo) continue;
          for (int k = 0; k < n; ++k)
            pts[i][k] = pts[lo][k] + 0.5 * (pts[i][k] - pts[lo][k]);
          vals[i] = eval(pts[i]);
        }
      }
    }
  }
  int best = static_cast<int>(std::min_element(vals.begin(), vals.end()) -
                              vals.begin());
  return {pts[best], vals[best], evals};
}

double bisect_sign_change(const std::function<double(double)>& f, double lo,
                          double hi, double tol) {
  double flo = f(lo), fhi = f(hi);
  if (!(flo <= 0.0 && fhi > 0.0))
    throw std::runtime_error("no sign change on [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]: f(lo)=" +
                             std::to_string(flo) +
                             ", f(hi)=" + std::to_string(fhi));
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) <= 0.0) lo = mid;
    else hi = mid;
  }
  return lo;
}

std::vector<double> softmax(const double* logits, int n) {
  double m = *std::max_element(logits, logits + n);
  std::vector<double> p(n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += p[i] = std::exp(logits[i] - m);
  for (double& v : p) v /= s;
  return p;
}

}  // namespace ccb
