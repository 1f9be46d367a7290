#include "stancegraph/params.hpp"

#include <cmath>

#include <json.hpp>

namespace stancegraph {

using nlohmann::json;

void ParamStore::add_glorot(const std::string& name, int64_t rows, int64_t cols, SplitMix64& rng) {
  double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Tensor t = Tensor::zeros({rows, cols});
  for (double& v : t.data) v = rng.next_range(-bound, bound);
  add(name, std::move(t));
}

void ParamStore::add_zeros(const std::string& name, std::vector<int64_t> shape) {
  add(name, Tensor::zeros(std::move(shape)));
}

void ParamStore::add(const std::string& name, Tensor value) {
  Entry e;
  e.grad = Tensor::zeros(value.shape);
  e.m1 = Tensor::zeros(value.shape);
  e.m2 = Tensor::zeros(value.shape);
  e.value = std::move(value);
  entries_[name] = std::move(e);
}

Tensor& ParamStore::value(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error(Errc::ShapeMismatch, "unknown parameter '" + name + "'");
  return it->second.value;
}

const Tensor& ParamStore::value(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error(Errc::ShapeMismatch, "unknown parameter '" + name + "'");
  return it->second.value;
}

Tensor& ParamStore::grad(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error(Errc::ShapeMismatch, "unknown parameter '" + name + "'");
  return it->second.grad;
}

void ParamStore::zero_grads() {
  for (auto& [name, e] : entries_) {
    std::fill(e.grad.data.begin(), e.grad.data.end(), 0.0);
  }
}

void ParamStore::adam_step(const AdamConfig& cfg) {
  ++step_;
  double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step_));
  double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step_));
  for (auto& [name, e] : entries_) {
    for (size_t i = 0; i < e.value.data.size(); ++i) {
      double g = e.grad.data[i];
      e.m1.data[i] = cfg.beta1 * e.m1.data[i] + (1.0 - cfg.beta1) * g;
      e.m2.data[i] = cfg.beta2 * e.m2.data[i] + (1.0 - cfg.beta2) * g * g;
      double m_hat = e.m1.data[i] / c1;
      double v_hat = e.m2.data[i] / c2;
      e.value.data[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
  }
  zero_grads();
}

std::string ParamStore::to_checkpoint_json(const std::string& config_hash) const {
  json params = json::object();
  for (const auto& [name, e] : entries_) {
    params[name] = {{"shape", e.value.shape}, {"data", e.value.data}};
  }
  json doc = {{"version", 1}, {"params", params}, {"step", step_}, {"config_hash", config_hash}};
  return doc.dump();
}

ParamStore ParamStore::from_checkpoint_json(const std::string& text, std::string* config_hash_out) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("checkpoint: ") + e.what());
  }
  if (doc.value("version", 0) != 1) throw Error(Errc::ParseError, "unsupported checkpoint version");
  ParamStore store;
  for (auto it = doc["params"].begin(); it != doc["params"].end(); ++it) {
    Tensor t(it.value()["shape"].get<std::vector<int64_t>>(),
             it.value()["data"].get<std::vector<double>>());
    if (t.numel() != static_cast<int64_t>(t.data.size())) {
      throw Error(Errc::ParseError, "checkpoint tensor '" + it.key() + "' shape/data mismatch");
    }
    store.add(it.key(), std::move(t));
  }
  store.step_ = doc.value("step", int64_t{0});
  if (config_hash_out) *config_hash_out = doc.value("config_hash", std::string());
  return store;
}

std::map<std::string, Tensor> ParamStore::snapshot_values() const {
  std::map<std::string, Tensor> out;
  for (const auto& [name, e] : entries_) out[name] = e.value;
  return out;
}

void ParamStore::restore_values(const std::map<std::string, Tensor>& values) {
  for (const auto& [name, t] : values) value(name) = t;
}

}  // namespace stancegraph
