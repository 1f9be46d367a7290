#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "stancegraph/model.hpp"

namespace stancegraph {

enum class Window { Train, Val, Test };

const char* to_string(Window w);

// Temporal boundaries over the interaction edges: train|val|test close at the
// 80th/90th/100th percentile timestamps, ties falling into the earlier
// window.
struct SplitSpec {
  int64_t t_train_end = 0;
  int64_t t_val_end = 0;
  int64_t t_test_end = 0;

  int64_t window_start(Window w) const;
  int64_t window_end(Window w) const;
};

SplitSpec temporal_split(const HeteroGraph& g);

struct Example {
  NodeId user;
  NodeId post;
  int label = 0;
  Window window = Window::Train;
};

struct TrainConfig {
  uint64_t seed = 1;
  double lr = 1e-3;
  int epochs = 100;
  int patience = 10;
  int neg_ratio = 1;
  int batch_size = 128;
  // Fraction of the supervision examples held out for early stopping.
  double holdout_frac = 0.2;
  bool count_mentions = false;
  ModelConfig model;
  PathConfig paths;
  // Observer called after each epoch (epoch, mean loss, holdout AUC).
  std::function<void(int, double, double)> progress;

  void validate() const;
};

struct MetricsReport {
  double val_auc = 0.0;
  double test_auc = 0.0;
  std::vector<double> loss_curve;
  // One row per epoch: the weights entering that epoch.
  std::vector<std::array<double, 5>> attention_trajectory;
  std::array<double, 5> final_attention{};
  int best_epoch = 0;
  std::string config_hash;
  uint64_t seed = 0;

  std::string to_json() const;
};

// Positives: (user, misinfo post) pairs whose first propagation edge falls
// inside the window. Negatives: seeded uniform sample of never-linked (up to
// the window end) pairs, neg_ratio per positive, without replacement. The
// returned list is shuffled deterministically by the seed.
std::vector<Example> build_examples(const HeteroGraph& g, const SplitSpec& spec, Window window,
                                    int neg_ratio, uint64_t seed, bool count_mentions = false);

// Probability that a random positive outranks a random negative; ties count
// one half. Rank-statistic implementation.
double compute_auc(const std::vector<double>& scores, const std::vector<int>& labels);

// Trains on the supervision window that follows the training snapshot: the
// model only ever sees the graph at t_train_end, and the supervised links all
// emerge after it. A seeded holdout of the supervision pairs drives early
// stopping; the best-holdout parameters are returned.
std::pair<StanceGnnModel, MetricsReport> train(const HeteroGraph& g, const TrainConfig& cfg);

// Scores the window's examples using only the snapshot at the window start.
double evaluate(const StanceGnnModel& model, const HeteroGraph& g, const SplitSpec& spec,
                Window window, const TrainConfig& cfg);

}  // namespace stancegraph
