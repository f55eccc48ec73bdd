#ifndef CCBOUND_OPTIMIZE_H_
#define CCBOUND_OPTIMIZE_H_

#include <functional>
#include <vector>

namespace ccb {

// Coarse grid scan followed by golden-section refinement around the best
// grid point. Returns the argmax on [lo, hi].
double maximize_scalar(const std::function<double(double)>& f, double lo,
                       double hi, double tol, int grid = 64);

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

struct NelderMeadOptions {
  double initial_step = 0.5;
  double ftol = 1e-13;
  double xtol = 1e-10;
  int max_evaluations = 4000;
};

// Minimizes f starting from x0.
NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, const NelderMeadOptions& opt = {});

// Largest x in [lo, hi] with f(x) <= 0, assuming f(lo) <= 0 < f(hi) and a
// single sign change. Throws std::runtime_error when there is no sign change.
double bisect_sign_change(const std::function<double(double)>& f, double lo,
                          double hi, double tol);

// Maps unconstrained logits to a probability vector.
std::vector<double> softmax(const double* logits, int n);

}  // namespace ccb

#endif  // CCBOUND_OPTIMIZE_H_
