#include "stancegraph/model.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

namespace stancegraph {

namespace {

// One derived relation per path kind, so support- and opposition-driven
// exposures occupy distinct parameter subspaces.
std::string derived_relation_name(PathKind k) {
  return std::string("derived:") + to_string(k);
}

std::string layer_prefix(int layer) { return "layer" + std::to_string(layer); }

int64_t layer_in_width(const ModelConfig& cfg, int layer) {
  return layer == 0 ? FeatureEncoder(cfg.bow_buckets).width() : cfg.embed_dim;
}

std::vector<PathKind> canonical_paths(const ModelConfig& cfg) {
  std::vector<PathKind> out;
  for (int i = 0; i < kPathKindCount; ++i) {
    PathKind k = static_cast<PathKind>(i);
    if (path_enabled(cfg, k)) out.push_back(k);
  }
  return out;
}

// Relation base name for an organic edge.
std::string relation_base(const Edge& e, bool stance_typed) {
  std::string name = to_string(e.kind);
  if (stance_typed && is_interaction(e.kind)) {
    name += ":";
    name += to_string(e.stance.value_or(Stance::Neutral));
  }
  return name;
}

}  // namespace

bool path_enabled(const ModelConfig& cfg, PathKind k) {
  return std::find(cfg.enabled_paths.begin(), cfg.enabled_paths.end(), k) !=
         cfg.enabled_paths.end();
}

std::vector<std::string> relation_names(const ModelConfig& cfg) {
  std::vector<std::string> out;
  for (int i = 0; i < kEdgeKindCount; ++i) {
    EdgeKind k = static_cast<EdgeKind>(i);
    std::vector<std::string> bases;
    if (cfg.stance_typed_relations && is_interaction(k)) {
      for (Stance s : {Stance::Support, Stance::Oppose, Stance::Neutral}) {
        bases.push_back(std::string(to_string(k)) + ":" + to_string(s));
      }
    } else {
      bases.push_back(to_string(k));
    }
    for (const std::string& base : bases) {
      out.push_back(base + ":fwd");
      out.push_back(base + ":rev");
    }
  }
  for (PathKind k : {PathKind::FSP, PathKind::FOP, PathKind::ESP, PathKind::EOP}) {
    out.push_back(derived_relation_name(k));
  }
  return out;
}

uint64_t config_hash(const ModelConfig& cfg) {
  nlohmann::json j;
  j["bow_buckets"] = cfg.bow_buckets;
  j["embed_dim"] = cfg.embed_dim;
  j["layers"] = cfg.layers;
  j["mlp_hidden"] = cfg.mlp_hidden;
  std::vector<std::string> paths;
  for (PathKind k : canonical_paths(cfg)) paths.push_back(to_string(k));
  j["enabled_paths"] = paths;
  j["stance_typed_relations"] = cfg.stance_typed_relations;
  return fnv1a64(j.dump());
}

std::string config_hash_hex(const ModelConfig& cfg) {
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  return buf;
}

StanceGnnModel init_model(const ModelConfig& cfg, uint64_t seed) {
  if (cfg.embed_dim < 1 || cfg.layers < 1 || cfg.mlp_hidden < 1 || cfg.bow_buckets < 1) {
    throw Error(Errc::ConfigInvalid, "model dimensions must be positive");
  }
  if (cfg.enabled_paths.empty()) {
    throw Error(Errc::ConfigInvalid, "at least one path must be enabled");
  }
  StanceGnnModel model;
  model.cfg = cfg;
  SplitMix64 rng(mix64(seed ^ 0x6d6f64656c000000ULL));
  const std::vector<std::string> rels = relation_names(cfg);
  for (int l = 0; l < cfg.layers; ++l) {
    int64_t d_in = layer_in_width(cfg, l);
    int64_t d_out = cfg.embed_dim;
    model.store.add_glorot(layer_prefix(l) + ".self", d_in, d_out, rng);
    for (const std::string& rel : rels) {
      model.store.add_glorot(layer_prefix(l) + ".rel." + rel, d_in, d_out, rng);
    }
    model.store.add_zeros(layer_prefix(l) + ".bias", {d_out});
  }
  model.store.add_glorot("mlp.w1", 2 * cfg.embed_dim, cfg.mlp_hidden, rng);
  model.store.add_zeros("mlp.b1", {cfg.mlp_hidden});
  model.store.add_glorot("mlp.w2", cfg.mlp_hidden, 1, rng);
  model.store.add_zeros("mlp.b2", {1});
  model.store.add_zeros("attention.logits", {kPathKindCount});
  return model;
}

int32_t NodeIndex::row(const NodeId& id) const {
  auto it = row_of.find(id);
  if (it == row_of.end()) throw Error(Errc::UnknownNode, "'" + id + "'");
  return it->second;
}

NodeIndex NodeIndex::from_graph(const HeteroGraph& g) {
  NodeIndex index;
  index.ids.reserve(g.node_count());
  for (const auto& [id, rec] : g.nodes()) {
    index.row_of.emplace(id, static_cast<int32_t>(index.ids.size()));
    index.ids.push_back(id);
  }
  return index;
}

GraphViews build_views(const PathGraphs& paths, const ModelConfig& cfg) {
  const HeteroGraph& g = *paths.snapshot;
  GraphViews views;
  views.index = NodeIndex::from_graph(g);
  views.features = FeatureEncoder(cfg.bow_buckets).encode_all(g);
  views.relations = relation_names(cfg);

  std::map<std::string, size_t> rel_pos;
  for (size_t i = 0; i < views.relations.size(); ++i) rel_pos[views.relations[i]] = i;
  size_t n = g.node_count();

  // Organic adjacency is identical in every view.
  std::vector<std::vector<std::vector<int32_t>>> organic(views.relations.size());
  for (auto& lists : organic) lists.assign(n, {});
  for (const Edge& e : g.edges()) {
    std::string base = relation_base(e, cfg.stance_typed_relations);
    int32_t src = views.index.row(e.src);
    int32_t dst = views.index.row(e.dst);
    organic[rel_pos.at(base + ":fwd")][static_cast<size_t>(dst)].push_back(src);
    organic[rel_pos.at(base + ":rev")][static_cast<size_t>(src)].push_back(dst);
  }

  for (PathKind k : canonical_paths(cfg)) {
    std::vector<std::vector<std::vector<int32_t>>> lists = organic;
    if (k != PathKind::Main) {
      auto& derived = lists[rel_pos.at(derived_relation_name(k))];
      for (const DerivedEdge& e : paths.derived_for(k)) {
        int32_t u = views.index.row(e.user);
        int32_t p = views.index.row(e.post);
        derived[static_cast<size_t>(u)].push_back(p);
        derived[static_cast<size_t>(p)].push_back(u);
      }
    }
    std::vector<Csr> adj;
    adj.reserve(lists.size());
    for (const auto& per_rel : lists) adj.push_back(Csr::from_lists(per_rel));
    views.adjacency.emplace(k, std::move(adj));
  }
  return views;
}

namespace {

int leaf(Tape& tape, const StanceGnnModel& model, ParamStore* grads, const std::string& name) {
  if (grads) return tape.param(*grads, name);
  return tape.constant(model.store.value(name));
}

}  // namespace

int encode_view_on_tape(Tape& tape, const StanceGnnModel& model, ParamStore* grads,
                        const GraphViews& views, PathKind kind) {
  const std::vector<Csr>& adjacency = views.adjacency.at(kind);
  int h = tape.constant(views.features);
  for (int l = 0; l < model.cfg.layers; ++l) {
    int z = tape.matmul(h, leaf(tape, model, grads, layer_prefix(l) + ".self"));
    for (size_t r = 0; r < views.relations.size(); ++r) {
      if (adjacency[r].empty()) continue;
      int m = tape.neighbor_mean(h, &adjacency[r]);
      int contribution =
          tape.matmul(m, leaf(tape, model, grads, layer_prefix(l) + ".rel." + views.relations[r]));
      z = tape.add(z, contribution);
    }
    z = tape.add_row_vector(z, leaf(tape, model, grads, layer_prefix(l) + ".bias"));
    h = tape.relu(z);
  }
  return h;
}

int aggregate_on_tape(Tape& tape, const StanceGnnModel& model, ParamStore* grads,
                      const std::map<PathKind, int>& encoded) {
  std::vector<int64_t> enabled_idx;
  std::vector<int> enabled_nodes;
  for (int i = 0; i < kPathKindCount; ++i) {
    PathKind k = static_cast<PathKind>(i);
    auto it = encoded.find(k);
    if (it == encoded.end()) continue;
    enabled_idx.push_back(i);
    enabled_nodes.push_back(it->second);
  }
  if (enabled_nodes.empty()) throw Error(Errc::ConfigInvalid, "no encoded paths to aggregate");
  int logits = leaf(tape, model, grads, "attention.logits");
  int weights = tape.softmax_vector(tape.gather(logits, enabled_idx));
  int combined = -1;
  for (size_t j = 0; j < enabled_nodes.size(); ++j) {
    int term = tape.scale_by_entry(enabled_nodes[j], weights, static_cast<int64_t>(j));
    combined = (combined < 0) ? term : tape.add(combined, term);
  }
  return combined;
}

int probabilities_on_tape(Tape& tape, const StanceGnnModel& model, ParamStore* grads,
                          int aggregated,
                          const std::vector<std::pair<int32_t, int32_t>>& pairs) {
  int x = tape.concat_pairs(aggregated, pairs);
  int a1 = tape.relu(tape.add_row_vector(tape.matmul(x, leaf(tape, model, grads, "mlp.w1")),
                                         leaf(tape, model, grads, "mlp.b1")));
  int z = tape.add_row_vector(tape.matmul(a1, leaf(tape, model, grads, "mlp.w2")),
                              leaf(tape, model, grads, "mlp.b2"));
  return tape.sigmoid(z);
}

int forward_on_tape(Tape& tape, const StanceGnnModel& model, ParamStore* grads,
                    const GraphViews& views,
                    const std::vector<std::pair<int32_t, int32_t>>& pairs) {
  std::map<PathKind, int> encoded;
  for (const auto& [kind, adj] : views.adjacency) {
    encoded[kind] = encode_view_on_tape(tape, model, grads, views, kind);
  }
  int aggregated = aggregate_on_tape(tape, model, grads, encoded);
  return probabilities_on_tape(tape, model, grads, aggregated, pairs);
}

Tensor message_pass_layer(const Tensor& h, const std::vector<const Csr*>& adjacency,
                          const std::vector<const Tensor*>& rel_weights, const Tensor& w_self,
                          const Tensor& bias) {
  if (adjacency.size() != rel_weights.size()) {
    throw Error(Errc::ShapeMismatch, "adjacency/weight count mismatch");
  }
  if (h.cols() != w_self.rows()) {
    throw Error(Errc::ShapeMismatch, "message_pass_layer input width mismatch");
  }
  Tensor z = matmul(h, w_self);
  for (size_t r = 0; r < adjacency.size(); ++r) {
    const Csr& adj = *adjacency[r];
    if (adj.empty()) continue;
    Tensor m = Tensor::zeros(h.shape);
    for (int64_t v = 0; v < adj.node_count(); ++v) {
      int64_t deg = adj.degree(v);
      if (deg == 0) continue;
      double inv = 1.0 / static_cast<double>(deg);
      for (int64_t e = adj.offsets[v]; e < adj.offsets[v + 1]; ++e) {
        int64_t u = adj.nbrs[static_cast<size_t>(e)];
        for (int64_t c = 0; c < h.cols(); ++c) m.at(v, c) += h.at(u, c) * inv;
      }
    }
    Tensor contribution = matmul(m, *rel_weights[r]);
    for (size_t i = 0; i < z.data.size(); ++i) z.data[i] += contribution.data[i];
  }
  for (int64_t v = 0; v < z.rows(); ++v) {
    for (int64_t c = 0; c < z.cols(); ++c) z.at(v, c) += bias.data[static_cast<size_t>(c)];
  }
  return relu(z);
}

PathEmbeddings encode_paths(const PathGraphs& paths, const StanceGnnModel& model) {
  GraphViews views = build_views(paths, model.cfg);
  PathEmbeddings out;
  out.index = views.index;
  for (const auto& [kind, adjacency] : views.adjacency) {
    Tensor h = views.features;
    for (int l = 0; l < model.cfg.layers; ++l) {
      std::vector<const Csr*> adj;
      std::vector<const Tensor*> weights;
      for (size_t r = 0; r < views.relations.size(); ++r) {
        adj.push_back(&adjacency[r]);
        weights.push_back(&model.store.value(layer_prefix(l) + ".rel." + views.relations[r]));
      }
      h = message_pass_layer(h, adj, weights, model.store.value(layer_prefix(l) + ".self"),
                             model.store.value(layer_prefix(l) + ".bias"));
    }
    out.by_path.emplace(kind, std::move(h));
  }
  return out;
}

std::array<double, 5> attention_weights(const StanceGnnModel& model) {
  const Tensor& logits = model.store.value("attention.logits");
  std::vector<double> enabled;
  std::vector<int> positions;
  for (int i = 0; i < kPathKindCount; ++i) {
    if (path_enabled(model.cfg, static_cast<PathKind>(i))) {
      enabled.push_back(logits.data[static_cast<size_t>(i)]);
      positions.push_back(i);
    }
  }
  Tensor w = softmax(Tensor::vector(enabled));
  std::array<double, 5> out{0.0, 0.0, 0.0, 0.0, 0.0};
  for (size_t j = 0; j < positions.size(); ++j) {
    out[static_cast<size_t>(positions[j])] = w.data[j];
  }
  return out;
}

std::vector<double> attention_aggregate(const PathEmbeddings& embeddings,
                                        const StanceGnnModel& model, const NodeId& node) {
  int32_t row = embeddings.index.row(node);
  std::array<double, 5> w = attention_weights(model);
  std::vector<double> out(static_cast<size_t>(model.cfg.embed_dim), 0.0);
  for (const auto& [kind, h] : embeddings.by_path) {
    double wk = w[static_cast<size_t>(kind)];
    for (int64_t c = 0; c < h.cols(); ++c) {
      out[static_cast<size_t>(c)] += wk * h.at(row, c);
    }
  }
  return out;
}

double predict_link(const std::vector<double>& user_emb, const std::vector<double>& post_emb,
                    const StanceGnnModel& model) {
  const Tensor& w1 = model.store.value("mlp.w1");
  if (static_cast<int64_t>(user_emb.size() + post_emb.size()) != w1.rows()) {
    throw Error(Errc::ShapeMismatch, "predict_link embedding width mismatch");
  }
  std::vector<double> x = user_emb;
  x.insert(x.end(), post_emb.begin(), post_emb.end());
  Tensor xin = Tensor::matrix(1, w1.rows(), std::move(x));
  Tensor a1 = matmul(xin, w1);
  const Tensor& b1 = model.store.value("mlp.b1");
  for (size_t i = 0; i < a1.data.size(); ++i) a1.data[i] += b1.data[i];
  a1 = relu(a1);
  Tensor z = matmul(a1, model.store.value("mlp.w2"));
  z.data[0] += model.store.value("mlp.b2").data[0];
  return sigmoid(z.data[0]);
}

std::vector<double> forward_batch(const PathGraphs& paths, const StanceGnnModel& model,
                                  const std::vector<std::pair<NodeId, NodeId>>& pairs) {
  if (pairs.empty()) return {};
  PathEmbeddings embeddings = encode_paths(paths, model);
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& [user, post] : pairs) {
    std::vector<double> hu = attention_aggregate(embeddings, model, user);
    std::vector<double> hp = attention_aggregate(embeddings, model, post);
    out.push_back(predict_link(hu, hp, model));
  }
  return out;
}

}  // namespace stancegraph
