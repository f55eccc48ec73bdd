#include "ccbound/infotheory.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ccb {

namespace {

constexpr double kNegativeClamp = 1e-12;
constexpr double kNormTol = 1e-9;
constexpr double kColumnTol = 1e-12;

double plogp(double p) { return p > kLogFloor ? -p * std::log2(p) : 0.0; }

std::vector<size_t> strides_of(const std::vector<int>& shape) {
  std::vector<size_t> s(shape.size(), 1);
  for (int i = static_cast<int>(shape.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * shape[i + 1];
  return s;
}

void check_axis(const JointDistribution& j, int axis) {
  if (axis < 0 || axis >= j.rank())
    throw std::out_of_range("axis " + std::to_string(axis) +
                            " out of range for rank " +
                            std::to_string(j.rank()));
}

}  // namespace

double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) h += plogp(v);
  return h;
}

double binary_entropy(double x) {
  if (x < -kNegativeClamp || x > 1.0 + kNegativeClamp)
    throw std::domain_error("binary_entropy: argument outside [0,1]");
  x = std::clamp(x, 0.0, 1.0);
  return plogp(x) + plogp(1.0 - x);
}

StochasticMap::StochasticMap(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("stochastic map needs positive dimensions");
  if (data_.size() != static_cast<size_t>(rows) * cols)
    throw std::invalid_argument("stochastic map entry count mismatch");
  for (int c = 0; c < cols_; ++c) {
    double sum = 0.0;
    for (int r = 0; r < rows_; ++r) {
      double& v = data_[r * cols_ + c];
      if (v < -kColumnTol || v > 1.0 + kColumnTol)
        throw std::invalid_argument("stochastic map entry outside [0,1]");
      v = std::clamp(v, 0.0, 1.0);
      sum += v;
    }
    if (std::abs(sum - 1.0) > kColumnTol)
      throw std::invalid_argument("stochastic map column " +
                                  std::to_string(c) + " sums to " +
                                  std::to_string(sum));
  }
}

StochasticMap::StochasticMap(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("empty stochastic map");
  std::vector<double> flat;
  for (const auto& r : rows) {
    if (r.size() != rows.front().size())
      throw std::invalid_argument("ragged stochastic map");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  *this = StochasticMap(static_cast<int>(rows.size()),
                        static_cast<int>(rows.front().size()), flat);
}

StochasticMap StochasticMap::identity(int n) {
  std::vector<double> d(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) d[i * n + i] = 1.0;
  return StochasticMap(n, n, d);
}

std::vector<std::vector<double>> StochasticMap::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (int r = 0; r < rows_; ++r)
    out[r].assign(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
  return out;
}

double StochasticMap::column_entropy(int c) const {
  double h = 0.0;
  for (int r = 0; r < rows_; ++r) h += plogp((*this)(r, c));
  return h;
}

bool StochasticMap::is_deterministic() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return v == 0.0 || v == 1.0; });
}

StochasticMap StochasticMap::compose(const StochasticMap& first) const {
  if (first.rows() != cols_)
    throw std::invalid_argument("compose: dimension mismatch");
  std::vector<double> d(static_cast<size_t>(rows_) * first.cols(), 0.0);
  for (int r = 0; r < rows_; ++r)
    for (int k = 0; k < cols_; ++k)
      for (int c = 0; c < first.cols(); ++c)
        d[r * first.cols() + c] += (*this)(r, k) * first(k, c);
  return StochasticMap(rows_, first.cols(), d);
}

JointDistribution::JointDistribution(
    std::vector<int> shape, std::vector<double> probs,
    std::vector<std::vector<std::string>> labels)
    : shape_(std::move(shape)),
      probs_(std::move(probs)),
      labels_(std::move(labels)) {
  size_t n = 1;
  for (int d : shape_) {
    if (d < 1) throw std::invalid_argument("axis size must be positive");
    n *= d;
  }
  if (shape_.empty() || probs_.size() != n)
    throw std::invalid_argument("joint distribution size mismatch");
  double sum = 0.0;
  for (double& p : probs_) {
    if (p < -kNegativeClamp)
      throw std::invalid_argument("negative probability " + std::to_string(p));
    p = std::max(p, 0.0);
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormTol)
    throw std::invalid_argument("joint distribution sums to " +
                                std::to_string(sum));
  if (labels_.empty()) {
    for (int d : shape_) {
      std::vector<std::string> l(d);
      for (int i = 0; i < d; ++i) l[i] = std::to_string(i);
      labels_.push_back(std::move(l));
    }
  } else if (labels_.size() != shape_.size()) {
    throw std::invalid_argument("label axis count mismatch");
  } else {
    for (size_t a = 0; a < shape_.size(); ++a)
      if (static_cast<int>(labels_[a].size()) != shape_[a])
        throw std::invalid_argument("label count mismatch on axis " +
                                    std::to_string(a));
  }
}

size_t JointDistribution::flat_index(const std::vector<int>& index) const {
  if (index.size() != shape_.size())
    throw std::invalid_argument("index rank mismatch");
  size_t flat = 0;
  for (size_t a = 0; a < shape_.size(); ++a) {
    if (index[a] < 0 || index[a] >= shape_[a])
      throw std::out_of_range("index out of range");
    flat = flat * shape_[a] + index[a];
  }
  return flat;
}

double JointDistribution::at(const std::vector<int>& index) const {
  return probs_[flat_index(index)];
}

JointDistribution JointDistribution::marginal(
    const std::vector<int>& axes) const {
  std::vector<int> shape;
  std::vector<std::vector<std::string>> labels;
  for (int a : axes) {
    check_axis(*this, a);
    shape.push_back(shape_[a]);
    labels.push_back(labels_[a]);
  }
  if (shape.empty()) return JointDistribution({1}, {1.0});
  const auto in_strides = strides_of(shape_);
  const auto out_strides = strides_of(shape);
  std::vector<double> out(std::accumulate(shape.begin(), shape.end(), size_t{1},
                                          std::multiplies<>()),
                          0.0);
  for (size_t i = 0; i < probs_.size(); ++i) {
    size_t o = 0;
    for (size_t k = 0; k < axes.size(); ++k)
      o += ((i / in_strides[axes[k]]) % shape_[axes[k]]) * out_strides[k];
    out[o] += probs_[i];
  }
  return JointDistribution(shape, out, labels);
}

double JointDistribution::entropy() const { return shannon_entropy(probs_); }

double conditional_entropy(const JointDistribution& joint,
                           const std::vector<int>& target,
                           const std::vector<int>& given) {
  std::vector<int> all = given;
  all.insert(all.end(), target.begin(), target.end());
  return joint.marginal(all).entropy() - joint.marginal(given).entropy();
}

double conditional_entropy(const JointDistribution& joint, int target,
                           const std::vector<int>& given) {
  return conditional_entropy(joint, std::vector<int>{target}, given);
}

double mutual_information(const JointDistribution& joint, int x, int y) {
  return conditional_mutual_information(joint, x, y, {});
}

double conditional_mutual_information(const JointDistribution& joint) {
  if (joint.rank() != 3)
    throw std::invalid_argument(
        "conditional_mutual_information expects axes (A,B,F)");
  return conditional_mutual_information(joint, 0, 1, {2});
}

double conditional_mutual_information(const JointDistribution& joint, int x,
                                      int y, const std::vector<int>& given) {
  auto with = [&](std::initializer_list<int> extra) {
    std::vector<int> axes = given;
    axes.insert(axes.end(), extra);
    return joint.marginal(axes).entropy();
  };
  double hz = given.empty() ? 0.0 : joint.marginal(given).entropy();
  return with({x}) + with({y}) - with({x, y}) - hz;
}

JointDistribution apply_map(const JointDistribution& joint,
                            const StochasticMap& map, int axis) {
  check_axis(joint, axis);
  if (map.cols() != joint.dim(axis))
    throw std::invalid_argument("apply_map: map has " +
                                std::to_string(map.cols()) +
                                " columns but axis has " +
                                std::to_string(joint.dim(axis)) + " symbols");
  std::vector<int> shape = joint.shape();
  shape[axis] = map.rows();
  const auto in_strides = strides_of(joint.shape());
  const auto out_strides = strides_of(shape);
  size_t n_out = std::accumulate(shape.begin(), shape.end(), size_t{1},
                                 std::multiplies<>());
  std::vector<double> out(n_out, 0.0);
  const auto& p = joint.probs();
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    int c = static_cast<int>((i / in_strides[axis]) % joint.dim(axis));
    size_t base = i - c * in_strides[axis];
    // Convert base (with axis coordinate removed) to output coordinates.
    size_t o = 0;
    for (int a = 0; a < joint.rank(); ++a) {
      if (a == axis) continue;
      o += ((base / in_strides[a]) % joint.dim(a)) * out_strides[a];
    }
    for (int r = 0; r < map.rows(); ++r)
      out[o + r * out_strides[axis]] += map(r, c) * p[i];
  }
  std::vector<std::vector<std::string>> labels;
  for (int a = 0; a < joint.rank(); ++a) {
    if (a == axis) {
      std::vector<std::string> l(map.rows());
      for (int r = 0; r < map.rows(); ++r) l[r] = std::to_string(r);
      labels.push_back(std::move(l));
    } else {
      labels.push_back(joint.labels(a));
    }
  }
  return JointDistribution(shape, out, labels);
}

JointDistribution attach_channel(const JointDistribution& joint,
                                 const StochasticMap& map, int axis) {
  check_axis(joint, axis);
  if (map.cols() != joint.dim(axis))
    throw std::invalid_argument("attach_channel: dimension mismatch");
  std::vector<int> shape = joint.shape();
  shape.push_back(map.rows());
  const auto in_strides = strides_of(joint.shape());
  const auto& p = joint.probs();
  std::vector<double> out(p.size() * map.rows(), 0.0);
  for (size_t i = 0; i < p.size(); ++i) {
    int c = static_cast<int>((i / in_strides[axis]) % joint.dim(axis));
    for (int r = 0; r < map.rows(); ++r)
      out[i * map.rows() + r] = map(r, c) * p[i];
  }
  std::vector<std::vector<std::string>> labels;
  for (int a = 0; a < joint.rank(); ++a) labels.push_back(joint.labels(a));
  std::vector<std::string> l(map.rows());
  for (int r = 0; r < map.rows(); ++r) l[r] = std::to_string(r);
  labels.push_back(std::move(l));
  return JointDistribution(shape, out, labels);
}

}  // namespace ccb
