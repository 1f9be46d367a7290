#include "stancegraph/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stancegraph {

Tensor Tensor::zeros(std::vector<int64_t> shape) {
  int64_t n = 1;
  for (int64_t d : shape) n *= d;
  return Tensor(std::move(shape), std::vector<double>(static_cast<size_t>(n), 0.0));
}

Tensor Tensor::vector(std::vector<double> values) {
  int64_t n = static_cast<int64_t>(values.size());
  return Tensor({n}, std::move(values));
}

Tensor Tensor::matrix(int64_t rows, int64_t cols, std::vector<double> values) {
  if (static_cast<int64_t>(values.size()) != rows * cols) {
    throw Error(Errc::ShapeMismatch, "matrix data length != rows*cols");
  }
  return Tensor({rows, cols}, std::move(values));
}

Tensor Tensor::identity(int64_t n) {
  Tensor t = zeros({n, n});
  for (int64_t i = 0; i < n; ++i) t.at(i, i) = 1.0;
  return t;
}

int64_t Tensor::numel() const {
  int64_t n = 1;
  for (int64_t d : shape) n *= d;
  return n;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.shape.size() != 2 || b.shape.size() != 2 || a.cols() != b.rows()) {
    throw Error(Errc::ShapeMismatch, "matmul [" + std::to_string(a.rows()) + "x" +
                                         std::to_string(a.cols()) + "] x [" +
                                         std::to_string(b.rows()) + "x" +
                                         std::to_string(b.cols()) + "]");
  }
  int64_t m = a.rows(), k = a.cols(), n = b.cols();
  Tensor out = Tensor::zeros({m, n});
  for (int64_t i = 0; i < m; ++i) {
    for (int64_t p = 0; p < k; ++p) {
      double aip = a.at(i, p);
      if (aip == 0.0) continue;
      const double* brow = &b.data[static_cast<size_t>(p * n)];
      double* orow = &out.data[static_cast<size_t>(i * n)];
      for (int64_t j = 0; j < n; ++j) orow[j] += aip * brow[j];
    }
  }
  return out;
}

Tensor relu(const Tensor& x) {
  Tensor out = x;
  for (double& v : out.data) v = v > 0.0 ? v : 0.0;
  return out;
}

double sigmoid(double x) {
  if (x >= 0.0) {
    double z = std::exp(-std::min(x, 30.0));
    return 1.0 / (1.0 + z);
  }
  double z = std::exp(std::max(x, -30.0));
  return z / (1.0 + z);
}

Tensor sigmoid(const Tensor& x) {
  Tensor out = x;
  for (double& v : out.data) v = sigmoid(v);
  return out;
}

Tensor softmax(const Tensor& x) {
  if (x.shape.size() != 1 || x.numel() < 1) {
    throw Error(Errc::ShapeMismatch, "softmax expects a non-empty rank-1 tensor");
  }
  Tensor out = x;
  double mx = *std::max_element(out.data.begin(), out.data.end());
  double sum = 0.0;
  for (double& v : out.data) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : out.data) v /= sum;
  return out;
}

double bce_loss(double p, int y) {
  p = std::clamp(p, kBceEps, 1.0 - kBceEps);
  return -(y == 1 ? std::log(p) : std::log(1.0 - p));
}

double bce_loss(const std::vector<double>& p, const std::vector<int>& y) {
  if (p.size() != y.size() || p.empty()) {
    throw Error(Errc::ShapeMismatch, "bce_loss batch lengths differ or empty");
  }
  double total = 0.0;
  for (size_t i = 0; i < p.size(); ++i) total += bce_loss(p[i], y[i]);
  return total / static_cast<double>(p.size());
}

}  // namespace stancegraph
