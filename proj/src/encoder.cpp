#include "stancegraph/encoder.hpp"

#include <cctype>
#include <cmath>

#include "stancegraph/rng.hpp"

namespace stancegraph {

namespace {

void hash_bow(const std::string& text, int buckets, std::vector<double>& out) {
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    uint64_t h = fnv1a64(token);
    out[static_cast<size_t>(h % static_cast<uint64_t>(buckets))] += 1.0;
    token.clear();
  };
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else {
      flush();
    }
  }
  flush();
}

}  // namespace

std::vector<double> FeatureEncoder::encode(const NodeRecord& record) const {
  std::vector<double> out(static_cast<size_t>(width()), 0.0);
  if (record.kind == NodeKind::User) {
    const auto& a = std::get<UserAttrs>(record.attrs);
    hash_bow(a.description, bow_buckets_, out);
    out[static_cast<size_t>(bow_buckets_)] = std::log1p(static_cast<double>(a.post_count));
    out[static_cast<size_t>(bow_buckets_) + 1] =
        std::log1p(static_cast<double>(a.account_age_days));
    out[static_cast<size_t>(bow_buckets_) + 2] = a.verified ? 1.0 : 0.0;
  } else {
    const auto& a = std::get<PostAttrs>(record.attrs);
    hash_bow(a.text, bow_buckets_, out);
    out[static_cast<size_t>(bow_buckets_)] = a.is_misinfo ? 1.0 : 0.0;
    out[static_cast<size_t>(bow_buckets_) + 1] = static_cast<double>(a.created_ts) * 1e-9;
    // last slot is zero padding
  }
  return out;
}

Tensor FeatureEncoder::encode_all(const HeteroGraph& g) const {
  Tensor out = Tensor::zeros({static_cast<int64_t>(g.node_count()), width()});
  int64_t row = 0;
  for (const auto& [id, rec] : g.nodes()) {
    std::vector<double> v = encode(rec);
    for (int64_t c = 0; c < out.cols(); ++c) out.at(row, c) = v[static_cast<size_t>(c)];
    ++row;
  }
  return out;
}

}  // namespace stancegraph
