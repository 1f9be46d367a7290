#include "stancegraph/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <tuple>

#include <json.hpp>

#include "stancegraph/rng.hpp"
#include "stancegraph/tensor.hpp"

namespace stancegraph {

namespace {

// Draw streams; keyed draws keep every structural choice independent of the
// influence coefficients, so changing a beta only re-decides realizations.
enum Stream : uint64_t {
  kCommunityUser = 1,
  kSide,
  kFollow,
  kEngage,
  kKind,
  kAuthor,
  kFutureKind,
  kRealize,
  kDescription,
};

const char* kFillerWords[] = {
    "sharing", "thoughts", "daily",    "online",  "reader", "curious",  "observer",
    "threads", "updates",  "opinions", "digest",  "topics", "stories",  "headline",
    "science", "weather",  "gadgets",  "recipes", "sports", "podcasts",
};
constexpr size_t kFillerCount = sizeof(kFillerWords) / sizeof(kFillerWords[0]);

std::string padded_id(char prefix, int i) {
  char buf[16];
  snprintf(buf, sizeof(buf), "%c%05d", prefix, i);
  return buf;
}

std::string pick_words(uint64_t seed, uint64_t stream, uint64_t entity, int count) {
  std::string out;
  for (int w = 0; w < count; ++w) {
    size_t idx = static_cast<size_t>(
        keyed_uniform(seed, stream, entity, static_cast<uint64_t>(w)) * kFillerCount);
    if (idx >= kFillerCount) idx = kFillerCount - 1;
    if (!out.empty()) out += " ";
    out += kFillerWords[idx];
  }
  return out;
}

EdgeKind pick_interaction_kind(uint64_t seed, uint64_t stream, uint64_t a, uint64_t b) {
  double d = keyed_uniform(seed, stream, a, b);
  if (d < 1.0 / 3.0) return EdgeKind::Retweets;
  if (d < 2.0 / 3.0) return EdgeKind::Replies;
  return EdgeKind::Quotes;
}

struct Interaction {
  int32_t user;
  int32_t post;
  Stance stance;
  EdgeKind kind;
  int64_t ts = 0;
};

// Count distinct third components per (a, b) key.
std::map<std::pair<int32_t, int32_t>, int32_t> distinct_witness_counts(
    std::vector<std::tuple<int32_t, int32_t, int32_t>>& triples) {
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
  std::map<std::pair<int32_t, int32_t>, int32_t> counts;
  for (const auto& [a, b, w] : triples) ++counts[{a, b}];
  return counts;
}

}  // namespace

void SynthConfig::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (n_users < 1 || n_posts < 1) throw Error(Errc::ConfigInvalid, "need users and posts");
  if (n_communities < 1) throw Error(Errc::ConfigInvalid, "n_communities must be >= 1");
  if (!prob(misinfo_frac) || !prob(p_follow_in) || !prob(p_follow_out) || !prob(p_support) ||
      !prob(p_oppose)) {
    throw Error(Errc::ConfigInvalid, "probabilities must lie in [0, 1]");
  }
  if (horizon_steps < 1) throw Error(Errc::ConfigInvalid, "horizon_steps must be >= 1");
}

SynthConfig SynthConfig::preset(SizePreset size) {
  SynthConfig cfg;
  switch (size) {
    case SizePreset::Small:
      cfg.n_users = 100;
      cfg.n_posts = 40;
      cfg.n_communities = 4;
      cfg.p_follow_in = 0.25;
      cfg.p_follow_out = 0.01;
      cfg.p_support = 0.12;
      cfg.p_oppose = 0.03;
      break;
    case SizePreset::Medium:
      cfg.n_users = 1000;
      cfg.n_posts = 400;
      cfg.misinfo_frac = 0.088;
      cfg.n_communities = 10;
      cfg.p_follow_in = 0.25;
      cfg.p_follow_out = 0.005;
      cfg.p_support = 0.0247;
      cfg.p_oppose = 0.0153;
      break;
    case SizePreset::Large:
      cfg.n_users = 10000;
      cfg.n_posts = 4000;
      cfg.misinfo_frac = 0.06;
      cfg.n_communities = 32;
      cfg.p_follow_in = 0.03;
      cfg.p_follow_out = 0.0004;
      cfg.p_support = 0.0016;
      cfg.p_oppose = 0.0004;
      break;
  }
  return cfg;
}

double ground_truth_probability(int x_fsp, int x_fop, int x_esp, int x_eop,
                                const SynthConfig& cfg) {
  if (x_fsp < 0 || x_fop < 0 || x_esp < 0 || x_eop < 0) {
    throw Error(Errc::ConfigInvalid, "exposure counts must be non-negative");
  }
  double logit = cfg.base_logit + cfg.beta_fsp * x_fsp - cfg.beta_fop * x_fop +
                 cfg.beta_esp * x_esp - cfg.beta_eop * x_eop;
  return sigmoid(logit);
}

std::pair<HeteroGraph, GroundTruth> generate(const SynthConfig& cfg) {
  cfg.validate();
  const uint64_t seed = cfg.seed;
  const int n_users = cfg.n_users;
  const int n_posts = cfg.n_posts;
  const int n_misinfo = static_cast<int>(std::lround(cfg.misinfo_frac * n_posts));

  GroundTruth gt;
  for (int i = 0; i < n_users; ++i) gt.user_ids.push_back(padded_id('u', i));
  for (int j = 0; j < n_posts; ++j) gt.post_ids.push_back(padded_id('p', j));

  // 1. community memberships, plus each community's side per post. Half the
  //    communities lean credulous (aligned with most posts), half lean
  //    skeptical (targeted by most). Both sides engage at the same overall
  //    rate, so a community's leaning shows up only in the stances it takes,
  //    never in raw engagement volume.
  std::vector<int> user_comm(static_cast<size_t>(n_users));
  for (int i = 0; i < n_users; ++i) {
    int c = static_cast<int>(keyed_uniform(seed, kCommunityUser, i, 0) * cfg.n_communities);
    if (c >= cfg.n_communities) c = cfg.n_communities - 1;
    user_comm[static_cast<size_t>(i)] = c;
  }
  auto community_aligned = [&](int post, int comm) {
    bool credulous = keyed_uniform(seed, kSide, 0xffffffffULL, static_cast<uint64_t>(comm)) < 0.5;
    double aligned_share = credulous ? 0.85 : 0.15;
    return keyed_uniform(seed, kSide, static_cast<uint64_t>(post), static_cast<uint64_t>(comm)) <
           aligned_share;
  };

  // 2. follows via homophily
  std::vector<std::pair<int32_t, int32_t>> follows;
  for (int a = 0; a < n_users; ++a) {
    for (int b = 0; b < n_users; ++b) {
      if (a == b) continue;
      double p = user_comm[static_cast<size_t>(a)] == user_comm[static_cast<size_t>(b)]
                     ? cfg.p_follow_in
                     : cfg.p_follow_out;
      if (keyed_uniform(seed, kFollow, a, b) < p) follows.emplace_back(a, b);
    }
  }

  // 3. observation-period interactions: authorship plus stance-bearing
  //    engagements per community side.
  std::vector<Interaction> interactions;
  std::vector<int32_t> author_of(static_cast<size_t>(n_posts));
  for (int j = 0; j < n_posts; ++j) {
    auto author = static_cast<int32_t>(keyed_uniform(seed, kAuthor, j, 0) * n_users);
    if (author >= n_users) author = n_users - 1;
    author_of[static_cast<size_t>(j)] = author;
    interactions.push_back({author, j, Stance::Support, EdgeKind::Posts, 1 + j});
  }
  // Every pair engages at rate p_support + p_oppose regardless of side; the
  // side only decides whether the non-neutral slice supports or opposes.
  // Total engagement volume therefore carries no information about sides.
  int64_t engagement_t0 = 1 + n_posts;
  std::vector<Interaction> engagements;
  double engage_rate = cfg.p_support + cfg.p_oppose;
  for (int i = 0; i < n_users; ++i) {
    for (int j = 0; j < n_posts; ++j) {
      if (author_of[static_cast<size_t>(j)] == i) continue;
      double draw = keyed_uniform(seed, kEngage, i, j);
      if (draw >= engage_rate) continue;
      bool aligned = community_aligned(j, user_comm[static_cast<size_t>(i)]);
      Stance stance;
      if (aligned) {
        stance = draw < cfg.p_support ? Stance::Support : Stance::Neutral;
      } else {
        stance = draw < cfg.p_oppose ? Stance::Oppose : Stance::Neutral;
      }
      engagements.push_back({i, j, stance, pick_interaction_kind(seed, kKind, i, j), 0});
    }
  }
  {
    SplitMix64 order_rng(mix64(seed ^ 0x74696d65ULL));
    order_rng.shuffle(engagements);
    for (size_t k = 0; k < engagements.size(); ++k) {
      engagements[k].ts = engagement_t0 + static_cast<int64_t>(k);
    }
  }
  interactions.insert(interactions.end(), engagements.begin(), engagements.end());
  gt.period_t_end = engagement_t0 + static_cast<int64_t>(engagements.size());

  // 4. exposures along the four paths, by direct enumeration over the
  //    generator's own records.
  std::vector<std::vector<std::pair<int64_t, int32_t>>> engaged_posts(
      static_cast<size_t>(n_users));  // (ts, post)
  std::vector<std::vector<std::pair<int64_t, int32_t>>> engagers(
      static_cast<size_t>(n_posts));  // (ts, user)
  std::vector<std::vector<std::pair<int64_t, int32_t>>> supporters(
      static_cast<size_t>(n_posts));  // (ts, user), support stance only
  std::vector<std::vector<std::pair<int64_t, int32_t>>> opposers(static_cast<size_t>(n_posts));
  for (const Interaction& it : interactions) {
    engaged_posts[static_cast<size_t>(it.user)].emplace_back(it.ts, it.post);
    engagers[static_cast<size_t>(it.post)].emplace_back(it.ts, it.user);
    if (it.stance == Stance::Support) {
      supporters[static_cast<size_t>(it.post)].emplace_back(it.ts, it.user);
    } else if (it.stance == Stance::Oppose) {
      opposers[static_cast<size_t>(it.post)].emplace_back(it.ts, it.user);
    }
  }

  auto is_misinfo_post = [&](int32_t j) { return j < n_misinfo; };

  // Follower paths: (follower, post, focal) triples.
  std::vector<std::tuple<int32_t, int32_t, int32_t>> fsp_triples;
  std::vector<std::tuple<int32_t, int32_t, int32_t>> fop_triples;
  std::vector<std::vector<int32_t>> followers(static_cast<size_t>(n_users));
  for (const auto& [a, b] : follows) followers[static_cast<size_t>(b)].push_back(a);
  for (int j = 0; j < n_misinfo; ++j) {
    for (const auto& [ts, focal] : supporters[static_cast<size_t>(j)]) {
      (void)ts;
      for (int32_t f : followers[static_cast<size_t>(focal)]) {
        fsp_triples.emplace_back(f, j, focal);
      }
    }
    for (const auto& [ts, focal] : opposers[static_cast<size_t>(j)]) {
      (void)ts;
      for (int32_t f : followers[static_cast<size_t>(focal)]) {
        fop_triples.emplace_back(f, j, focal);
      }
    }
  }

  // Engagement paths: co-engagement strictly before the focal interaction.
  std::vector<std::tuple<int32_t, int32_t, int32_t>> esp_triples;
  std::vector<std::tuple<int32_t, int32_t, int32_t>> eop_triples;
  auto engagement_witnesses = [&](const std::vector<std::pair<int64_t, int32_t>>& stanced,
                                  int32_t j,
                                  std::vector<std::tuple<int32_t, int32_t, int32_t>>& out) {
    for (const auto& [trigger_ts, focal] : stanced) {
      for (const auto& [prior_ts, shared_post] : engaged_posts[static_cast<size_t>(focal)]) {
        if (shared_post == j || prior_ts >= trigger_ts) continue;
        for (const auto& [other_ts, other] : engagers[static_cast<size_t>(shared_post)]) {
          if (other == focal || other_ts >= trigger_ts) continue;
          out.emplace_back(other, j, focal);
        }
      }
    }
  };
  for (int j = 0; j < n_misinfo; ++j) {
    engagement_witnesses(supporters[static_cast<size_t>(j)], j, esp_triples);
    engagement_witnesses(opposers[static_cast<size_t>(j)], j, eop_triples);
  }

  auto fsp_counts = distinct_witness_counts(fsp_triples);
  auto fop_counts = distinct_witness_counts(fop_triples);
  auto esp_counts = distinct_witness_counts(esp_triples);
  auto eop_counts = distinct_witness_counts(eop_triples);

  // 5. future propagation links over candidate pairs (no observation-period
  //    interaction).
  std::vector<std::vector<bool>> engaged(static_cast<size_t>(n_users),
                                         std::vector<bool>(static_cast<size_t>(n_posts), false));
  for (const Interaction& it : interactions) {
    engaged[static_cast<size_t>(it.user)][static_cast<size_t>(it.post)] = true;
  }

  auto lookup = [](const std::map<std::pair<int32_t, int32_t>, int32_t>& counts, int32_t u,
                   int32_t p) {
    auto it = counts.find({u, p});
    return it == counts.end() ? 0 : it->second;
  };

  std::vector<Interaction> future;
  for (int i = 0; i < n_users; ++i) {
    for (int j = 0; j < n_misinfo; ++j) {
      if (engaged[static_cast<size_t>(i)][static_cast<size_t>(j)]) continue;
      ++gt.candidate_count;
      GtRecord rec;
      rec.user = i;
      rec.post = j;
      rec.x_fsp = lookup(fsp_counts, i, j);
      rec.x_fop = lookup(fop_counts, i, j);
      rec.x_esp = lookup(esp_counts, i, j);
      rec.x_eop = lookup(eop_counts, i, j);
      rec.p_star = ground_truth_probability(rec.x_fsp, rec.x_fop, rec.x_esp, rec.x_eop, cfg);
      rec.realized = keyed_uniform(seed, kRealize, i, j) < rec.p_star;
      if (rec.realized) {
        ++gt.realized_count;
        future.push_back(
            {i, j, Stance::Support, pick_interaction_kind(seed, kFutureKind, i, j), 0});
      }
      if (rec.realized || rec.x_fsp || rec.x_fop || rec.x_esp || rec.x_eop) {
        gt.records.push_back(rec);
      }
    }
  }
  {
    SplitMix64 order_rng(mix64(seed ^ 0x66757475ULL));
    order_rng.shuffle(future);
    int64_t stride =
        std::max<int64_t>(1, cfg.horizon_steps / (static_cast<int64_t>(future.size()) + 1));
    for (size_t k = 0; k < future.size(); ++k) {
      future[k].ts = gt.period_t_end + 1 + static_cast<int64_t>(k) * stride;
    }
  }

  // 6. assemble the graph. Node attributes are deliberately generic: who a
  //    user is only shows through graph structure, so nothing in the features
  //    shortcuts the stance-conditioned message passing.
  HeteroGraph g;
  for (int i = 0; i < n_users; ++i) {
    UserAttrs attrs;
    attrs.description = pick_words(seed, kDescription, static_cast<uint64_t>(i % 2), 2);
    attrs.post_count = 10;
    attrs.account_age_days = 365;
    attrs.verified = false;
    g.add_node({gt.user_ids[static_cast<size_t>(i)], NodeKind::User, attrs});
  }
  // Post text is deliberately boilerplate: a post is characterized by who
  // reacts to it and how, not by its wording.
  for (int j = 0; j < n_posts; ++j) {
    PostAttrs attrs;
    attrs.text = "headline daily digest";
    attrs.claim_id = "claim" + std::to_string(j % std::max(1, n_posts / 4));
    attrs.is_misinfo = is_misinfo_post(j);
    attrs.created_ts = 1 + j;
    g.add_node({gt.post_ids[static_cast<size_t>(j)], NodeKind::Post, attrs});
  }
  for (const auto& [a, b] : follows) {
    g.add_edge({gt.user_ids[static_cast<size_t>(a)], gt.user_ids[static_cast<size_t>(b)],
                EdgeKind::Follows, std::nullopt, std::nullopt});
  }
  for (const Interaction& it : interactions) {
    g.add_edge({gt.user_ids[static_cast<size_t>(it.user)],
                gt.post_ids[static_cast<size_t>(it.post)], it.kind, it.stance, it.ts});
  }
  for (const Interaction& it : future) {
    g.add_edge({gt.user_ids[static_cast<size_t>(it.user)],
                gt.post_ids[static_cast<size_t>(it.post)], it.kind, it.stance, it.ts});
  }
  g.freeze();
  return {std::move(g), std::move(gt)};
}

void save_ground_truth(const GroundTruth& gt, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write '" + path + "'");
  for (const GtRecord& r : gt.records) {
    nlohmann::json j = {{"user", gt.user_of(r)}, {"post", gt.post_of(r)}, {"x_fsp", r.x_fsp},
                        {"x_fop", r.x_fop},      {"x_esp", r.x_esp},      {"x_eop", r.x_eop},
                        {"p_star", r.p_star},    {"realized", r.realized}};
    out << j.dump() << "\n";
  }
}

SynthConfig synth_config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigInvalid, std::string("synth config: ") + e.what());
  }
  SynthConfig cfg;
  if (j.contains("size_preset")) {
    std::string name = j["size_preset"].get<std::string>();
    if (name == "small") {
      cfg = SynthConfig::preset(SizePreset::Small);
    } else if (name == "medium") {
      cfg = SynthConfig::preset(SizePreset::Medium);
    } else if (name == "large") {
      cfg = SynthConfig::preset(SizePreset::Large);
    } else {
      throw Error(Errc::ConfigInvalid, "unknown size_preset '" + name + "'");
    }
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "size_preset") continue;
    if (key == "n_users") cfg.n_users = it.value().get<int>();
    else if (key == "n_posts") cfg.n_posts = it.value().get<int>();
    else if (key == "misinfo_frac") cfg.misinfo_frac = it.value().get<double>();
    else if (key == "n_communities") cfg.n_communities = it.value().get<int>();
    else if (key == "p_follow_in") cfg.p_follow_in = it.value().get<double>();
    else if (key == "p_follow_out") cfg.p_follow_out = it.value().get<double>();
    else if (key == "p_support") cfg.p_support = it.value().get<double>();
    else if (key == "p_oppose") cfg.p_oppose = it.value().get<double>();
    else if (key == "beta_fsp") cfg.beta_fsp = it.value().get<double>();
    else if (key == "beta_fop") cfg.beta_fop = it.value().get<double>();
    else if (key == "beta_esp") cfg.beta_esp = it.value().get<double>();
    else if (key == "beta_eop") cfg.beta_eop = it.value().get<double>();
    else if (key == "base_logit") cfg.base_logit = it.value().get<double>();
    else if (key == "horizon_steps") cfg.horizon_steps = it.value().get<int64_t>();
    else if (key == "seed") cfg.seed = it.value().get<uint64_t>();
    else throw Error(Errc::ConfigInvalid, "unknown synth config key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

std::string synth_config_to_json(const SynthConfig& cfg) {
  nlohmann::json j;
  j["n_users"] = cfg.n_users;
  j["n_posts"] = cfg.n_posts;
  j["misinfo_frac"] = cfg.misinfo_frac;
  j["n_communities"] = cfg.n_communities;
  j["p_follow_in"] = cfg.p_follow_in;
  j["p_follow_out"] = cfg.p_follow_out;
  j["p_support"] = cfg.p_support;
  j["p_oppose"] = cfg.p_oppose;
  j["beta_fsp"] = cfg.beta_fsp;
  j["beta_fop"] = cfg.beta_fop;
  j["beta_esp"] = cfg.beta_esp;
  j["beta_eop"] = cfg.beta_eop;
  j["base_logit"] = cfg.base_logit;
  j["horizon_steps"] = cfg.horizon_steps;
  j["seed"] = cfg.seed;
  return j.dump(2) + "\n";
}

}  // namespace stancegraph
