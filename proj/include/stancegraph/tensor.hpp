#pragma once

#include <cstdint>
#include <vector>

#include "stancegraph/errors.hpp"

namespace stancegraph {

// Dense row-major tensor of 64-bit reals. Rank 1 or 2 is all the model needs.
struct Tensor {
  std::vector<int64_t> shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::vector<int64_t> s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {}

  static Tensor zeros(std::vector<int64_t> shape);
  static Tensor vector(std::vector<double> values);
  static Tensor matrix(int64_t rows, int64_t cols, std::vector<double> values);
  static Tensor identity(int64_t n);

  int64_t numel() const;
  int64_t rows() const { return shape.empty() ? 0 : shape[0]; }
  int64_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }

  double& at(int64_t r, int64_t c) { return data[static_cast<size_t>(r * cols() + c)]; }
  double at(int64_t r, int64_t c) const { return data[static_cast<size_t>(r * cols() + c)]; }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }
};

// Standard matrix product; inner dimensions must agree.
Tensor matmul(const Tensor& a, const Tensor& b);

// Elementwise max(0, x).
Tensor relu(const Tensor& x);

// Elementwise logistic, computed stably (branch on sign, pre-exponential
// clamp at +/-30).
Tensor sigmoid(const Tensor& x);
double sigmoid(double x);

// Softmax of a rank-1 tensor with max-subtraction stabilization.
Tensor softmax(const Tensor& x);

// Binary cross entropy with p clamped to [eps, 1-eps], eps = 1e-7.
double bce_loss(double p, int y);
// Mean over a batch.
double bce_loss(const std::vector<double>& p, const std::vector<int>& y);

constexpr double kBceEps = 1e-7;

}  // namespace stancegraph
