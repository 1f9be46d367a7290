#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "stancegraph/rng.hpp"
#include "stancegraph/tensor.hpp"

namespace stancegraph {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Named parameters with paired gradients and Adam moment state.
class ParamStore {
 public:
  struct Entry {
    Tensor value;
    Tensor grad;
    Tensor m1;  // first moment
    Tensor m2;  // second moment
  };

  // Registers a parameter initialized with Glorot uniform bounds
  // +/- sqrt(6/(fan_in+fan_out)) drawn from rng. Biases and logits are
  // registered with add_zeros.
  void add_glorot(const std::string& name, int64_t rows, int64_t cols, SplitMix64& rng);
  void add_zeros(const std::string& name, std::vector<int64_t> shape);
  void add(const std::string& name, Tensor value);

  bool has(const std::string& name) const { return entries_.count(name) > 0; }
  Tensor& value(const std::string& name);
  const Tensor& value(const std::string& name) const;
  Tensor& grad(const std::string& name);

  const std::map<std::string, Entry>& entries() const { return entries_; }
  std::map<std::string, Entry>& entries() { return entries_; }

  void zero_grads();

  // Bias-corrected Adam update over every parameter; increments the shared
  // step counter and zeroes gradients afterwards.
  void adam_step(const AdamConfig& cfg);

  int64_t step() const { return step_; }

  // Checkpoint document:
  // {"version":1, "params":{name:{"shape":[..],"data":[..]}}, "step":int,
  //  "config_hash":str}
  std::string to_checkpoint_json(const std::string& config_hash) const;
  static ParamStore from_checkpoint_json(const std::string& text, std::string* config_hash_out);

  // Deep copies of parameter values only (used to keep the best epoch).
  std::map<std::string, Tensor> snapshot_values() const;
  void restore_values(const std::map<std::string, Tensor>& values);

 private:
  std::map<std::string, Entry> entries_;
  int64_t step_ = 0;
};

}  // namespace stancegraph
