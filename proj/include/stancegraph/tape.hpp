#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "stancegraph/params.hpp"
#include "stancegraph/tensor.hpp"

namespace stancegraph {

// Compressed sparse adjacency: nbrs[offsets[v] .. offsets[v+1]) are the
// neighbor rows of node v. Neighbor lists are sorted and deduplicated so the
// aggregation order never depends on edge storage order.
struct Csr {
  std::vector<int64_t> offsets;  // size n+1
  std::vector<int32_t> nbrs;

  int64_t node_count() const { return static_cast<int64_t>(offsets.size()) - 1; }
  int64_t degree(int64_t v) const { return offsets[v + 1] - offsets[v]; }
  bool empty() const { return nbrs.empty(); }

  static Csr from_lists(const std::vector<std::vector<int32_t>>& adj);
};

// Tape for reverse-mode differentiation. Ops append value nodes in forward
// order, which is already a topological order, so backward() is a single
// reverse sweep. Parameter leaves accumulate into their ParamStore gradient.
class Tape {
 public:
  struct Node {
    Tensor value;
    Tensor grad;
    std::function<void(Tape&)> back;  // empty for leaves
    ParamStore* store = nullptr;      // set for parameter leaves
    std::string param_name;
  };

  int constant(Tensor value);
  int param(ParamStore& store, const std::string& name);

  int matmul(int a, int b);
  int add(int a, int b);                 // same shape
  int add_row_vector(int m, int v);      // broadcast rank-1 v over rows of m
  int relu(int x);
  int sigmoid(int x);
  int softmax_vector(int x);
  // Rank-1 gather: out[j] = v[indices[j]].
  int gather(int v, const std::vector<int64_t>& indices);
  // out[v] = mean of rows of h over adj neighbors; zero row when none.
  int neighbor_mean(int h, const Csr* adj);
  // out = h * w[index]; w is a rank-1 node.
  int scale_by_entry(int h, int w, int64_t index);
  // Rows [h[u_i] (+) h[p_i]] for each (u, p) index pair.
  int concat_pairs(int h, const std::vector<std::pair<int32_t, int32_t>>& pairs);
  // Mean binary cross entropy of a [n x 1] probability column against labels.
  int bce_mean(int p, const std::vector<int>& labels);

  const Tensor& value(int id) const { return nodes_[static_cast<size_t>(id)].value; }
  Tensor& grad(int id) { return nodes_[static_cast<size_t>(id)].grad; }

  // Reverse sweep from a scalar node; flushes parameter gradients into their
  // stores (accumulating).
  void backward(int loss);

  size_t size() const { return nodes_.size(); }

 private:
  int push(Tensor value, std::function<void(Tape&)> back = {});
  Node& node(int id) { return nodes_[static_cast<size_t>(id)]; }

  std::vector<Node> nodes_;
};

}  // namespace stancegraph
