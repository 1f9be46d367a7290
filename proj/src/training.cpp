#include "stancegraph/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <json.hpp>

#include "stancegraph/rng.hpp"
#include "stancegraph/tape.hpp"

namespace stancegraph {

const char* to_string(Window w) {
  switch (w) {
    case Window::Train: return "train";
    case Window::Val: return "val";
    case Window::Test: return "test";
  }
  return "?";
}

int64_t SplitSpec::window_start(Window w) const {
  switch (w) {
    case Window::Train: return std::numeric_limits<int64_t>::min();
    case Window::Val: return t_train_end;
    case Window::Test: return t_val_end;
  }
  return 0;
}

int64_t SplitSpec::window_end(Window w) const {
  switch (w) {
    case Window::Train: return t_train_end;
    case Window::Val: return t_val_end;
    case Window::Test: return t_test_end;
  }
  return 0;
}

SplitSpec temporal_split(const HeteroGraph& g) {
  std::vector<int64_t> ts;
  for (const Edge& e : g.edges()) {
    if (is_interaction(e.kind)) ts.push_back(*e.ts);
  }
  if (ts.size() < 10) {
    throw Error(Errc::TooFewEdges, "temporal split needs at least 10 interaction edges, have " +
                                       std::to_string(ts.size()));
  }
  std::sort(ts.begin(), ts.end());
  size_t n = ts.size();
  auto boundary = [&](double frac) {
    size_t idx = static_cast<size_t>(std::ceil(frac * static_cast<double>(n)));
    return ts[idx - 1];
  };
  SplitSpec spec;
  spec.t_train_end = boundary(0.8);
  spec.t_val_end = boundary(0.9);
  spec.t_test_end = ts.back();
  if (spec.t_train_end >= spec.t_val_end || spec.t_val_end >= spec.t_test_end) {
    throw Error(Errc::DegenerateTimestamps,
                "split boundaries collapse; timestamps too concentrated");
  }
  return spec;
}

void TrainConfig::validate() const {
  if (epochs < 1) throw Error(Errc::ConfigInvalid, "epochs must be >= 1");
  if (neg_ratio < 1) throw Error(Errc::ConfigInvalid, "neg_ratio must be >= 1");
  if (batch_size < 1) throw Error(Errc::ConfigInvalid, "batch_size must be >= 1");
  if (patience < 1) throw Error(Errc::ConfigInvalid, "patience must be >= 1");
  if (lr <= 0.0) throw Error(Errc::ConfigInvalid, "lr must be positive");
  if (holdout_frac < 0.0 || holdout_frac >= 1.0) {
    throw Error(Errc::ConfigInvalid, "holdout_frac must be in [0, 1)");
  }
}

namespace {

// First time each (user, misinfo post) pair is linked by a propagation edge.
std::map<std::pair<NodeId, NodeId>, int64_t> first_propagation(const HeteroGraph& g,
                                                               bool count_mentions) {
  std::map<std::pair<NodeId, NodeId>, int64_t> first;
  auto note = [&](const NodeId& user, const NodeId& post, int64_t ts) {
    auto [it, inserted] = first.emplace(std::make_pair(user, post), ts);
    if (!inserted && ts < it->second) it->second = ts;
  };
  // Mentions are stored user->user; with count_mentions a mention of an
  // author counts toward every misinfo post that author wrote.
  std::map<NodeId, std::vector<NodeId>> authored;
  if (count_mentions) {
    for (const Edge& e : g.edges()) {
      if (e.kind == EdgeKind::Posts) authored[e.src].push_back(e.dst);
    }
  }
  for (const Edge& e : g.edges()) {
    if (is_interaction(e.kind)) {
      if (std::get<PostAttrs>(g.node(e.dst).attrs).is_misinfo) note(e.src, e.dst, *e.ts);
    } else if (count_mentions && e.kind == EdgeKind::Mentions && e.ts.has_value()) {
      auto it = authored.find(e.dst);
      if (it == authored.end()) continue;
      for (const NodeId& post : it->second) {
        if (std::get<PostAttrs>(g.node(post).attrs).is_misinfo) note(e.src, post, *e.ts);
      }
    }
  }
  return first;
}

}  // namespace

std::vector<Example> build_examples(const HeteroGraph& g, const SplitSpec& spec, Window window,
                                    int neg_ratio, uint64_t seed, bool count_mentions) {
  int64_t start = spec.window_start(window);
  int64_t end = spec.window_end(window);
  auto first = first_propagation(g, count_mentions);

  std::vector<Example> out;
  for (const auto& [pair, ts] : first) {
    if (ts > start && ts <= end) out.push_back({pair.first, pair.second, 1, window});
  }
  if (out.empty()) return out;

  // Candidate negatives: (user, misinfo post) pairs with no propagation edge
  // at any time <= window end.
  std::vector<std::pair<NodeId, NodeId>> candidates;
  for (const auto& [uid, urec] : g.nodes()) {
    if (urec.kind != NodeKind::User) continue;
    for (const auto& [pid, prec] : g.nodes()) {
      if (prec.kind != NodeKind::Post) continue;
      if (!std::get<PostAttrs>(prec.attrs).is_misinfo) continue;
      auto it = first.find({uid, pid});
      if (it != first.end() && it->second <= end) continue;
      candidates.emplace_back(uid, pid);
    }
  }
  size_t needed = out.size() * static_cast<size_t>(neg_ratio);
  if (candidates.size() < needed) {
    throw Error(Errc::NotEnoughNegatives, "need " + std::to_string(needed) + ", only " +
                                              std::to_string(candidates.size()) + " available");
  }
  SplitMix64 rng(mix64(seed ^ (0x6e656761ULL + static_cast<uint64_t>(window))));
  // Partial Fisher-Yates: the first `needed` entries are a uniform sample
  // without replacement.
  for (size_t i = 0; i < needed; ++i) {
    size_t j = i + static_cast<size_t>(rng.next_below(candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
    out.push_back({candidates[i].first, candidates[i].second, 0, window});
  }
  SplitMix64 shuffle_rng(mix64(seed ^ (0x73687566ULL + static_cast<uint64_t>(window))));
  shuffle_rng.shuffle(out);
  return out;
}

double compute_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw Error(Errc::ShapeMismatch, "compute_auc lengths differ or empty");
  }
  size_t n_pos = 0;
  for (int y : labels) n_pos += (y == 1);
  size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw Error(Errc::SingleClass, "AUC needs both classes present");
  }
  std::vector<size_t> order(scores.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  // Average ranks over ties, then the rank-sum statistic.
  double pos_rank_sum = 0.0;
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) pos_rank_sum += avg_rank;
    }
    i = j;
  }
  double np = static_cast<double>(n_pos);
  double nn = static_cast<double>(n_neg);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

namespace {

std::vector<std::pair<int32_t, int32_t>> to_rows(const NodeIndex& index,
                                                 const std::vector<Example>& examples) {
  std::vector<std::pair<int32_t, int32_t>> rows;
  rows.reserve(examples.size());
  for (const Example& e : examples) rows.emplace_back(index.row(e.user), index.row(e.post));
  return rows;
}

std::vector<int> to_labels(const std::vector<Example>& examples) {
  std::vector<int> labels;
  labels.reserve(examples.size());
  for (const Example& e : examples) labels.push_back(e.label);
  return labels;
}

PathGraphs make_path_graphs(const HeteroGraph& snapshot, const TrainConfig& cfg) {
  if (cfg.model.enabled_paths.size() == 1 && cfg.model.enabled_paths[0] == PathKind::Main) {
    // Main-only ablation: nothing downstream may depend on stance labels.
    PathGraphs pg;
    pg.snapshot = &snapshot;
    for (PathKind k : {PathKind::FSP, PathKind::FOP, PathKind::ESP, PathKind::EOP}) {
      pg.derived[k] = {};
    }
    return pg;
  }
  return materialize(snapshot, cfg.paths);
}

std::vector<double> score_examples(const StanceGnnModel& model, const GraphViews& views,
                                   const std::vector<std::pair<int32_t, int32_t>>& rows) {
  Tape tape;
  int prob = forward_on_tape(tape, model, nullptr, views, rows);
  return tape.value(prob).data;
}

}  // namespace

std::pair<StanceGnnModel, MetricsReport> train(const HeteroGraph& g, const TrainConfig& cfg) {
  cfg.validate();
  SplitSpec spec = temporal_split(g);
  HeteroGraph snapshot = g.snapshot_before(spec.t_train_end);
  PathGraphs pg = make_path_graphs(snapshot, cfg);
  GraphViews views = build_views(pg, cfg.model);

  // Supervision: links that emerge in the window right after the training
  // snapshot. A seeded holdout of those pairs drives early stopping.
  std::vector<Example> examples =
      build_examples(g, spec, Window::Val, cfg.neg_ratio, cfg.seed, cfg.count_mentions);
  if (examples.empty()) throw Error(Errc::TooFewEdges, "no supervision examples in window");
  auto holdout =
      static_cast<std::ptrdiff_t>(std::floor(cfg.holdout_frac * static_cast<double>(examples.size())));
  std::vector<Example> fit(examples.begin(), examples.end() - holdout);
  std::vector<Example> stop(examples.end() - holdout, examples.end());
  if (fit.empty()) throw Error(Errc::TooFewEdges, "holdout leaves no training examples");

  auto stop_rows = to_rows(views.index, stop);
  auto stop_labels = to_labels(stop);
  bool have_stop_auc = !stop.empty();
  if (have_stop_auc) {
    bool pos = false, neg = false;
    for (int y : stop_labels) (y == 1 ? pos : neg) = true;
    have_stop_auc = pos && neg;
  }

  StanceGnnModel model = init_model(cfg.model, cfg.seed);
  AdamConfig adam{cfg.lr, 0.9, 0.999, 1e-8};
  MetricsReport report;
  report.config_hash = config_hash_hex(cfg.model);
  report.seed = cfg.seed;

  double best_metric = -std::numeric_limits<double>::infinity();
  std::map<std::string, Tensor> best_values = model.store.snapshot_values();
  int best_epoch = 0;
  int since_best = 0;

  std::vector<size_t> perm(fit.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    report.attention_trajectory.push_back(attention_weights(model));

    SplitMix64 rng(mix64(cfg.seed ^ (0x65706f63ULL + static_cast<uint64_t>(epoch))));
    rng.shuffle(perm);

    double epoch_loss = 0.0;
    size_t batches = 0;
    for (size_t off = 0; off < perm.size(); off += static_cast<size_t>(cfg.batch_size)) {
      size_t stop_at = std::min(perm.size(), off + static_cast<size_t>(cfg.batch_size));
      std::vector<Example> batch;
      batch.reserve(stop_at - off);
      for (size_t i = off; i < stop_at; ++i) batch.push_back(fit[perm[i]]);

      Tape tape;
      int prob = forward_on_tape(tape, model, &model.store, views, to_rows(views.index, batch));
      int loss = tape.bce_mean(prob, to_labels(batch));
      epoch_loss += tape.value(loss).data[0];
      ++batches;
      tape.backward(loss);
      model.store.adam_step(adam);
    }
    report.loss_curve.push_back(epoch_loss / static_cast<double>(batches));

    double metric;
    if (have_stop_auc) {
      metric = compute_auc(score_examples(model, views, stop_rows), stop_labels);
    } else {
      metric = -report.loss_curve.back();  // degenerate holdout: fall back to loss
    }
    if (cfg.progress) cfg.progress(epoch, report.loss_curve.back(), metric);
    if (metric > best_metric) {
      best_metric = metric;
      best_values = model.store.snapshot_values();
      best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }

  model.store.restore_values(best_values);
  report.best_epoch = best_epoch;
  report.final_attention = attention_weights(model);
  report.val_auc = have_stop_auc
                       ? compute_auc(score_examples(model, views, stop_rows), stop_labels)
                       : 0.5;
  report.test_auc = evaluate(model, g, spec, Window::Test, cfg);
  return {std::move(model), std::move(report)};
}

double evaluate(const StanceGnnModel& model, const HeteroGraph& g, const SplitSpec& spec,
                Window window, const TrainConfig& cfg) {
  std::vector<Example> examples =
      build_examples(g, spec, window, cfg.neg_ratio, cfg.seed, cfg.count_mentions);
  bool pos = false, neg = false;
  for (const Example& e : examples) (e.label == 1 ? pos : neg) = true;
  if (!pos || !neg) throw Error(Errc::SingleClass, "window lacks one of the classes");

  HeteroGraph snapshot = g.snapshot_before(spec.window_start(window));
  PathGraphs pg = make_path_graphs(snapshot, cfg);
  GraphViews views = build_views(pg, cfg.model);
  std::vector<double> scores = score_examples(model, views, to_rows(views.index, examples));
  return compute_auc(scores, to_labels(examples));
}

std::string MetricsReport::to_json() const {
  nlohmann::json j;
  j["val_auc"] = val_auc;
  j["test_auc"] = test_auc;
  j["loss_curve"] = loss_curve;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : attention_trajectory) {
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["attention_trajectory"] = rows;
  j["final_attention"] = std::vector<double>(final_attention.begin(), final_attention.end());
  j["best_epoch"] = best_epoch;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

}  // namespace stancegraph
