#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stancegraph/encoder.hpp"
#include "stancegraph/params.hpp"
#include "stancegraph/paths.hpp"
#include "stancegraph/tape.hpp"

namespace stancegraph {

struct ModelConfig {
  int bow_buckets = 256;
  int embed_dim = 64;
  int layers = 2;
  int mlp_hidden = 64;
  // Path views the model encodes and attends over, in fixed enum order.
  std::vector<PathKind> enabled_paths = {PathKind::Main, PathKind::FSP, PathKind::FOP,
                                         PathKind::ESP, PathKind::EOP};
  // Split interaction relations into per-stance sub-relations.
  bool stance_typed_relations = false;
};

bool path_enabled(const ModelConfig& cfg, PathKind k);

// Message-passing relations in fixed order; one weight matrix per entry and
// layer, plus a dedicated relation for derived path edges (traversed in both
// directions).
std::vector<std::string> relation_names(const ModelConfig& cfg);

// Hash of the architecture/feature fields; a checkpoint can only be evaluated
// against a graph encoded under the same configuration.
uint64_t config_hash(const ModelConfig& cfg);
std::string config_hash_hex(const ModelConfig& cfg);

struct StanceGnnModel {
  ModelConfig cfg;
  ParamStore store;
};

// Glorot-initialized weights from a seeded generator; biases and attention
// logits start at zero so all enabled paths weigh equally.
StanceGnnModel init_model(const ModelConfig& cfg, uint64_t seed);

// Row assignment for embedding matrices: nodes in NodeId order.
struct NodeIndex {
  std::vector<NodeId> ids;
  std::map<NodeId, int32_t> row_of;

  int32_t row(const NodeId& id) const;
  static NodeIndex from_graph(const HeteroGraph& g);
};

// Per-path adjacency, one Csr per relation, built once per snapshot and
// reused across every forward pass.
struct GraphViews {
  NodeIndex index;
  Tensor features;
  std::vector<std::string> relations;
  std::map<PathKind, std::vector<Csr>> adjacency;
};

GraphViews build_views(const PathGraphs& paths, const ModelConfig& cfg);

// --- tape builders (training path) ---------------------------------------
// grads == nullptr runs inference only; otherwise parameter leaves accumulate
// into *grads on backward.

int encode_view_on_tape(Tape& tape, const StanceGnnModel& model, ParamStore* grads,
                        const GraphViews& views, PathKind kind);

int aggregate_on_tape(Tape& tape, const StanceGnnModel& model, ParamStore* grads,
                      const std::map<PathKind, int>& encoded);

int probabilities_on_tape(Tape& tape, const StanceGnnModel& model, ParamStore* grads,
                          int aggregated,
                          const std::vector<std::pair<int32_t, int32_t>>& pairs);

// Full composition; returns the [n x 1] probability node.
int forward_on_tape(Tape& tape, const StanceGnnModel& model, ParamStore* grads,
                    const GraphViews& views,
                    const std::vector<std::pair<int32_t, int32_t>>& pairs);

// --- eager operations ------------------------------------------------------

// Single relational mean-aggregation layer:
//   out[v] = relu(w_self . h[v] + sum_r w_r . mean_{u in N_r(v)} h[u] + bias)
// adjacency and rel_weights are parallel; empty relations contribute zero.
Tensor message_pass_layer(const Tensor& h, const std::vector<const Csr*>& adjacency,
                          const std::vector<const Tensor*>& rel_weights, const Tensor& w_self,
                          const Tensor& bias);

struct PathEmbeddings {
  NodeIndex index;
  std::map<PathKind, Tensor> by_path;
};

// Runs the configured layers over each enabled path view.
PathEmbeddings encode_paths(const PathGraphs& paths, const StanceGnnModel& model);

// Attention-weighted combination of one node's per-path embeddings; softmax
// runs over the enabled logits only.
std::vector<double> attention_aggregate(const PathEmbeddings& embeddings,
                                        const StanceGnnModel& model, const NodeId& node);

// sigmoid(MLP([user_emb (+) post_emb])).
double predict_link(const std::vector<double>& user_emb, const std::vector<double>& post_emb,
                    const StanceGnnModel& model);

// encode -> aggregate -> predict for each pair.
std::vector<double> forward_batch(const PathGraphs& paths, const StanceGnnModel& model,
                                  const std::vector<std::pair<NodeId, NodeId>>& pairs);

// Softmax of the current logits in fixed path order (Main, FSP, FOP, ESP,
// EOP); disabled paths report 0.
std::array<double, 5> attention_weights(const StanceGnnModel& model);

}  // namespace stancegraph
