#pragma once

#include <string>
#include <vector>

#include "stancegraph/graph.hpp"
#include "stancegraph/tensor.hpp"

namespace stancegraph {

// Deterministic fixed-width node features.
//   user: [bag-of-words(description) hashed into bow_buckets,
//          log1p(post_count), log1p(account_age_days), verified]
//   post: [bag-of-words(text) hashed into bow_buckets,
//          is_misinfo, created_ts * 1e-9, 0 pad]
// Both widths are bow_buckets + 3.
class FeatureEncoder {
 public:
  explicit FeatureEncoder(int bow_buckets = 256) : bow_buckets_(bow_buckets) {}

  int width() const { return bow_buckets_ + 3; }
  int bow_buckets() const { return bow_buckets_; }

  std::vector<double> encode(const NodeRecord& record) const;

  // One row per node in NodeId order.
  Tensor encode_all(const HeteroGraph& g) const;

 private:
  int bow_buckets_;
};

}  // namespace stancegraph
