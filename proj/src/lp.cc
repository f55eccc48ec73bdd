#include "ccbound/lp.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccb::lp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Switch from Dantzig pricing to Bland's rule after this many consecutive
// degenerate pivots, which rules out cycling.
constexpr int kDegenerateStreak = 50;

class Tableau {
 public:
  Tableau(const MatrixXd& A, const VectorXd& b, const Options& opt)
      : m_(static_cast<int>(A.rows())),
        n_(static_cast<int>(A.cols())),
        width_(n_ + m_ + 1),
        opt_(opt),
        t_(static_cast<size_t>(m_ + 1) * width_, 0.0),
        basis_(m_),
        allowed_(n_ + m_, true) {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) at(i, j) = A(i, j);
      at(i, n_ + i) = 1.0;
      at(i, rhs()) = b(i);
      basis_[i] = n_ + i;
    }
  }

  int rows() const { return m_; }
  int rhs() const { return n_ + m_; }
  double& at(int i, int j) { return t_[static_cast<size_t>(i) * width_ + j]; }
  double at(int i, int j) const {
    return t_[static_cast<size_t>(i) * width_ + j];
  }
  const std::vector<int>& basis() const { return basis_; }
  int iterations() const { return iterations_; }

  // Loads objective c (length n_ + m_) as reduced costs for the current basis.
  void set_objective(const std::vector<double>& c) {
    for (int j = 0; j <= rhs(); ++j) at(m_, j) = j < rhs() ? c[j] : 0.0;
    for (int i = 0; i < m_; ++i) {
      double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= rhs(); ++j) at(m_, j) -= cb * at(i, j);
    }
  }

  // Value of the current objective.
  double objective() const { return -at(m_, rhs()); }

  void forbid_artificials() {
    for (int j = n_; j < n_ + m_; ++j) allowed_[j] = false;
  }

  Status run() {
    int degenerate = 0;
    while (iterations_ < opt_.max_iterations) {
      int s = choose_entering(degenerate >= kDegenerateStreak);
      if (s < 0) return Status::kOptimal;
      int r = choose_leaving(s);
      if (r < 0) return Status::kUnbounded;
      degenerate = at(r, rhs()) <= opt_.pivot_tol ? degenerate + 1 : 0;
      pivot(r, s);
      ++iterations_;
    }
    return Status::kIterationLimit;
  }

  // Pivots artificial variables out of the basis where possible; rows where
  // no structural pivot exists are redundant and are left as they are.
  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int best = -1;
      double best_abs = opt_.pivot_tol;
      for (int j = 0; j < n_; ++j) {
        double v = std::abs(at(i, j));
        if (v > best_abs) best_abs = v, best = j;
      }
      if (best >= 0) pivot(i, best);
    }
  }

 private:
  int choose_entering(bool bland) const {
    int best = -1;
    double best_d = opt_.optimality_tol;
    for (int j = 0; j < n_ + m_; ++j) {
      if (!allowed_[j]) continue;
      double d = at(m_, j);
      if (d > best_d) {
        if (bland) return j;
        best_d = d, best = j;
      }
    }
    return best;
  }

  // Two-pass (Harris) ratio test: among rows whose ratio is within the
  // feasibility slack of the minimum, take the largest pivot element, then
  // the lowest basic index.
  int choose_leaving(int s) const {
    double bound = INFINITY;
    for (int i = 0; i < m_; ++i) {
      double a = at(i, s);
      if (a <= opt_.pivot_tol) continue;
      bound = std::min(bound, (std::max(at(i, rhs()), 0.0) + kHarrisSlack) / a);
    }
    if (bound == INFINITY) return -1;
    int r = -1;
    double best_a = 0.0;
    for (int i = 0; i < m_; ++i) {
      double a = at(i, s);
      if (a <= opt_.pivot_tol) continue;
      if (std::max(at(i, rhs()), 0.0) / a > bound) continue;
      if (a > best_a * (1 + 1e-12) ||
          (a >= best_a * (1 - 1e-12) && basis_[i] < basis_[r])) {
        best_a = std::max(best_a, a);
        r = i;
      }
    }
    return r;
  }

  static constexpr double kHarrisSlack = 1e-12;

  void pivot(int r, int s) {
    const double p = at(r, s);
    for (int j = 0; j <= rhs(); ++j) at(r, j) /= p;
    at(r, s) = 1.0;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double f = at(i, s);
      if (f == 0.0) continue;
      double* row = &t_[static_cast<size_t>(i) * width_];
      const double* prow = &t_[static_cast<size_t>(r) * width_];
      for (int j = 0; j <= rhs(); ++j) row[j] -= f * prow[j];
      row[s] = 0.0;
      if (i < m_ && row[rhs()] < 0.0 && row[rhs()] > -opt_.pivot_tol)
        row[rhs()] = 0.0;
    }
    basis_[r] = s;
  }

  int m_, n_, width_;
  Options opt_;
  std::vector<double> t_;
  std::vector<int> basis_;
  std::vector<bool> allowed_;
  int iterations_ = 0;
};

double max_residual(const MatrixXd& A, const VectorXd& b, const VectorXd& x) {
  return A.rows() ? (A * x - b).cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kIterationLimit: return "iteration limit";
  }
  return "unknown";
}

Result solve(const Problem& pr, const Options& opt) {
  if (pr.rows < 0 || pr.cols < 1 ||
      pr.A.size() != static_cast<size_t>(pr.rows) * pr.cols ||
      pr.b.size() != static_cast<size_t>(pr.rows) ||
      pr.c.size() != static_cast<size_t>(pr.cols))
    throw std::invalid_argument("lp::solve: inconsistent problem dimensions");

  MatrixXd A(pr.rows, pr.cols);
  VectorXd b(pr.rows);
  for (int i = 0; i < pr.rows; ++i) {
    double sign = pr.b[i] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < pr.cols; ++j) A(i, j) = sign * pr.A[i * pr.cols + j];
    b(i) = sign * pr.b[i];
  }

  // Keep a maximal set of linearly independent rows.
  Eigen::ColPivHouseholderQR<MatrixXd> qr(A.transpose());
  qr.setThreshold(opt.rank_tol);
  const int rank = static_cast<int>(qr.rank());
  std::vector<int> keep(rank);
  for (int k = 0; k < rank; ++k) keep[k] = qr.colsPermutation().indices()(k);
  std::sort(keep.begin(), keep.end());
  MatrixXd Ak(rank, pr.cols);
  VectorXd bk(rank);
  for (int k = 0; k < rank; ++k) {
    Ak.row(k) = A.row(keep[k]);
    bk(k) = b(keep[k]);
  }

  Result res;
  res.rank = rank;
  Tableau tab(Ak, bk, opt);
  std::vector<double> phase1(pr.cols + rank, 0.0);
  for (int i = 0; i < rank; ++i) phase1[pr.cols + i] = -1.0;
  tab.set_objective(phase1);
  Status st = tab.run();
  if (st == Status::kIterationLimit) {
    res.status = st;
    return res;
  }
  const double artificial_mass = -tab.objective();
  if (artificial_mass > opt.warning_tol) {
    res.status = Status::kInfeasible;
    res.residual = artificial_mass;
    res.iterations = tab.iterations();
    return res;
  }
  tab.drive_out_artificials();
  tab.forbid_artificials();
  std::vector<double> phase2(pr.cols + rank, 0.0);
  std::copy(pr.c.begin(), pr.c.end(), phase2.begin());
  tab.set_objective(phase2);
  st = tab.run();
  res.iterations = tab.iterations();
  if (st != Status::kOptimal) {
    res.status = st;
    return res;
  }

  VectorXd x = VectorXd::Zero(pr.cols);
  std::vector<int> basic;
  for (int i = 0; i < rank; ++i) {
    int j = tab.basis()[i];
    if (j < pr.cols) {
      x(j) = std::max(0.0, tab.at(i, tab.rhs()));
      basic.push_back(j);
    }
  }

  // Re-solve the final basis directly to shed accumulated pivoting error.
  if (!basic.empty()) {
    MatrixXd B(rank, basic.size());
    for (size_t k = 0; k < basic.size(); ++k) B.col(k) = Ak.col(basic[k]);
    VectorXd xb = B.colPivHouseholderQr().solve(bk);
    VectorXd refined = VectorXd::Zero(pr.cols);
    for (size_t k = 0; k < basic.size(); ++k)
      refined(basic[k]) = std::max(0.0, xb(k));
    if (xb.minCoeff() > -opt.feasibility_tol &&
        max_residual(A, b, refined) <= max_residual(A, b, x))
      x = refined;
  }

  res.residual = max_residual(A, b, x);
  if (res.residual > opt.warning_tol) {
    res.status = Status::kInfeasible;
    return res;
  }
  res.feasible_at_tolerance = res.residual > opt.feasibility_tol;
  res.status = Status::kOptimal;
  res.x.assign(x.data(), x.data() + x.size());
  res.objective = 0.0;
  for (int j = 0; j < pr.cols; ++j) res.objective += pr.c[j] * res.x[j];
  return res;
}

}  // namespace ccb::lp
