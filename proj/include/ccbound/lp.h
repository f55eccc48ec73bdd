#ifndef CCBOUND_LP_H_
#define CCBOUND_LP_H_

#include <vector>

namespace ccb::lp {

// maximize c.x subject to A x = b, x >= 0. A is row-major m x n.
struct Problem {
  int rows = 0;
  int cols = 0;
  std::vector<double> A;
  std::vector<double> b;
  std::vector<double> c;
};

struct Options {
  double feasibility_tol = 1e-9;
  double warning_tol = 1e-8;  // residuals up to this are accepted with a flag
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-11;
  double rank_tol = 1e-10;
  int max_iterations = 200000;
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct Result {
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  double residual = 0.0;  // max |A x - b| over all original rows
  bool feasible_at_tolerance = false;
  int iterations = 0;
  int rank = 0;
};

Result solve(const Problem& problem, const Options& options = {});

const char* to_string(Status s);

}  // namespace ccb::lp

#endif  // CCBOUND_LP_H_
