#ifndef CCBOUND_INFOTHEORY_H_
#define CCBOUND_INFOTHEORY_H_

#include <span>
#include <string>
#include <vector>

namespace ccb {

// Probabilities below this are treated as exact zeros inside logarithms.
inline constexpr double kLogFloor = 1e-15;

double shannon_entropy(std::span<const double> p);
double binary_entropy(double x);

// Column-stochastic matrix: rows are output symbols, columns input symbols.
class StochasticMap {
 public:
  StochasticMap() = default;
  StochasticMap(int rows, int cols, std::vector<double> entries);
  StochasticMap(const std::vector<std::vector<double>>& rows);

  static StochasticMap identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double operator()(int r, int c) const { return data_[r * cols_ + c]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<std::vector<double>> to_rows() const;

  // Entropy of the output distribution for input symbol c.
  double column_entropy(int c) const;
  bool is_deterministic() const;

  // this ∘ first: applies `first`, then this map.
  StochasticMap compose(const StochasticMap& first) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Finite joint distribution stored as a row-major tensor.
class JointDistribution {
 public:
  JointDistribution() = default;
  JointDistribution(std::vector<int> shape, std::vector<double> probs,
                    std::vector<std::vector<std::string>> labels = {});

  int rank() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  int dim(int axis) const { return shape_.at(axis); }
  const std::vector<double>& probs() const { return probs_; }
  const std::vector<std::string>& labels(int axis) const {
    return labels_.at(axis);
  }

  double at(const std::vector<int>& index) const;
  size_t flat_index(const std::vector<int>& index) const;

  // Marginal over the listed axes, in the listed order.
  JointDistribution marginal(const std::vector<int>& axes) const;
  double entropy() const;

 private:
  std::vector<int> shape_;
  std::vector<double> probs_;
  std::vector<std::vector<std::string>> labels_;
};

double conditional_entropy(const JointDistribution& joint,
                           const std::vector<int>& target,
                           const std::vector<int>& given);
double conditional_entropy(const JointDistribution& joint, int target,
                           const std::vector<int>& given);

double mutual_information(const JointDistribution& joint, int x, int y);

// I(A:B|F) for a three-axis distribution ordered (A, B, F).
double conditional_mutual_information(const JointDistribution& joint);
double conditional_mutual_information(const JointDistribution& joint, int x,
                                      int y, const std::vector<int>& given);

// Replaces axis `axis` by the output of `map` applied to it.
JointDistribution apply_map(const JointDistribution& joint,
                            const StochasticMap& map, int axis);

// Appends a new last axis M drawn from map(m | value on `axis`).
JointDistribution attach_channel(const JointDistribution& joint,
                                 const StochasticMap& map, int axis);

}  // namespace ccb

#endif  // CCBOUND_INFOTHEORY_H_
