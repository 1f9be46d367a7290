#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stancegraph/graph.hpp"

namespace stancegraph {

enum class SizePreset { Small, Medium, Large };

// Generator for stance-labeled social graphs with a known diffusion process.
// Communities drive both follows (homophily) and stance propensities: users
// support posts aligned with their community and oppose the rest. Future
// propagation links are sampled from exposure counts along the four derived
// paths, with opposition coefficients entering negatively.
struct SynthConfig {
  int n_users = 100;
  int n_posts = 40;
  double misinfo_frac = 0.5;
  int n_communities = 4;
  double p_follow_in = 0.08;    // within-community follow probability
  double p_follow_out = 0.004;  // between-community follow probability
  double p_support = 0.22;      // P(support interaction | aligned community)
  double p_oppose = 0.08;       // P(oppose interaction | other community)
  double beta_fsp = 0.5;
  double beta_fop = 2.0;
  double beta_esp = 0.5;
  double beta_eop = 2.0;
  double base_logit = -2.0;  // logit of the exposure-free link rate
  int64_t horizon_steps = 100000;  // span of the future period in seconds
  uint64_t seed = 1;

  void validate() const;
  static SynthConfig preset(SizePreset size);
};

// Exposure counts and generative probability for one candidate pair.
// user/post are indices into GroundTruth::user_ids / post_ids.
struct GtRecord {
  int32_t user = 0;
  int32_t post = 0;
  int32_t x_fsp = 0;
  int32_t x_fop = 0;
  int32_t x_esp = 0;
  int32_t x_eop = 0;
  double p_star = 0.0;
  bool realized = false;
};

struct GroundTruth {
  std::vector<NodeId> user_ids;
  std::vector<NodeId> post_ids;
  // Candidates with any exposure or a realized link; zero-exposure
  // unrealized candidates are counted but not listed.
  std::vector<GtRecord> records;
  int64_t candidate_count = 0;
  int64_t realized_count = 0;
  int64_t period_t_end = 0;  // last timestamp of the observation period

  const NodeId& user_of(const GtRecord& r) const { return user_ids[static_cast<size_t>(r.user)]; }
  const NodeId& post_of(const GtRecord& r) const { return post_ids[static_cast<size_t>(r.post)]; }
};

// p* = sigmoid(b0 + b_fsp*x_fsp - b_fop*x_fop + b_esp*x_esp - b_eop*x_eop)
double ground_truth_probability(int x_fsp, int x_fop, int x_esp, int x_eop,
                                const SynthConfig& cfg);

// Deterministic per seed; the realization draw for each candidate is keyed by
// (seed, user, post) so changing a coefficient never reshuffles other draws.
std::pair<HeteroGraph, GroundTruth> generate(const SynthConfig& cfg);

// ground_truth.jsonl: {"user","post","x_fsp","x_fop","x_esp","x_eop",
//                      "p_star","realized"} per listed record.
void save_ground_truth(const GroundTruth& gt, const std::string& path);

SynthConfig synth_config_from_json(const std::string& text);
std::string synth_config_to_json(const SynthConfig& cfg);

}  // namespace stancegraph
