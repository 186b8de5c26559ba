#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace relcap {

// Dense row-major tensor of 64-bit reals. Everything in the model is one of
// these: region features, parameter matrices, attention weights, scalars.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::vector<std::size_t> s, std::vector<double> d);

  static Tensor zeros(std::vector<std::size_t> shape);
  static Tensor scalar(double v);
  static Tensor vec(std::vector<double> v);
  static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> v);
  static Tensor identity(std::size_t n);

  std::size_t numel() const;
  bool is_scalar() const { return numel() == 1; }
  bool is_vector() const { return shape.size() == 1; }
  bool is_matrix() const { return shape.size() == 2; }

  std::size_t rows() const;
  std::size_t cols() const;

  double& at(std::size_t i) { return data[i]; }
  double at(std::size_t i) const { return data[i]; }
  double& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

  bool all_finite() const;
  bool same_shape(const Tensor& other) const { return shape == other.shape; }
};

std::string shape_str(const std::vector<std::size_t>& shape);

std::size_t shape_numel(const std::vector<std::size_t>& shape);

// Sum of `terms` with the addends sorted by value first. The result depends
// only on the multiset of addends, not their order, so reductions over graph
// neighbors or image regions stay bit-identical under vertex permutation.
double sorted_sum(std::vector<double>& terms);

}  // namespace relcap
