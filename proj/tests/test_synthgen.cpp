#include <doctest.h>

#include <cmath>

#include "stancegraph/synthgen.hpp"
#include "test_support.hpp"

using namespace stancegraph;
using namespace testsupport;

namespace {

SynthConfig small_cfg(uint64_t seed) {
  SynthConfig cfg;
  cfg.n_users = 60;
  cfg.n_posts = 40;
  cfg.n_communities = 4;
  cfg.p_follow_in = 0.2;
  cfg.p_follow_out = 0.02;
  cfg.p_support = 0.18;
  cfg.p_oppose = 0.05;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("ground_truth_probability evaluates the logistic form") {
  SynthConfig cfg;
  cfg.base_logit = 0.0;
  CHECK(ground_truth_probability(0, 0, 0, 0, cfg) == 0.5);

  cfg.beta_fop = 30.0;
  CHECK(ground_truth_probability(0, 1, 0, 0, cfg) == doctest::Approx(0.0).epsilon(1e-9));

  SplitMix64 rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    SynthConfig c;
    c.base_logit = rng.next_range(-3, 3);
    c.beta_fsp = rng.next_range(0, 3);
    c.beta_fop = rng.next_range(0, 3);
    c.beta_esp = rng.next_range(0, 3);
    c.beta_eop = rng.next_range(0, 3);
    int xf = static_cast<int>(rng.next_below(4));
    int xo = static_cast<int>(rng.next_below(4));
    int xe = static_cast<int>(rng.next_below(4));
    int xq = static_cast<int>(rng.next_below(4));
    double logit = c.base_logit + c.beta_fsp * xf - c.beta_fop * xo + c.beta_esp * xe -
                   c.beta_eop * xq;
    double direct = 1.0 / (1.0 + std::exp(-logit));
    CHECK(ground_truth_probability(xf, xo, xe, xq, c) == doctest::Approx(direct).epsilon(1e-12));
  }
  CHECK_THROWS_AS(ground_truth_probability(-1, 0, 0, 0, cfg), Error);
}

TEST_CASE("generate: zero betas with a heavily negative base produce no future edges") {
  SynthConfig cfg = small_cfg(1);
  cfg.beta_fsp = cfg.beta_fop = cfg.beta_esp = cfg.beta_eop = 0.0;
  cfg.base_logit = -30.0;
  auto [g, gt] = generate(cfg);
  CHECK(gt.realized_count == 0);
  for (const Edge& e : g.edges()) {
    if (e.ts.has_value()) CHECK(*e.ts <= gt.period_t_end);
  }
}

TEST_CASE("generate: zero betas at base 0 realize about half the candidates") {
  SynthConfig cfg = small_cfg(2);
  cfg.n_users = 100;
  cfg.n_posts = 60;  // 3000 candidate pairs before removing engaged ones
  cfg.beta_fsp = cfg.beta_fop = cfg.beta_esp = cfg.beta_eop = 0.0;
  cfg.base_logit = 0.0;
  auto [g, gt] = generate(cfg);
  REQUIRE(gt.candidate_count >= 2000);
  double rate = static_cast<double>(gt.realized_count) / static_cast<double>(gt.candidate_count);
  double se = std::sqrt(0.25 / static_cast<double>(gt.candidate_count));
  CHECK(std::abs(rate - 0.5) <= 3.0 * se);
}

TEST_CASE("generate: same seed reproduces the graph exactly") {
  SynthConfig cfg = small_cfg(3);
  auto [g1, gt1] = generate(cfg);
  auto [g2, gt2] = generate(cfg);
  CHECK(graph_equal(g1, g2));
  CHECK(gt1.candidate_count == gt2.candidate_count);
  CHECK(gt1.realized_count == gt2.realized_count);
  REQUIRE(gt1.records.size() == gt2.records.size());
  for (size_t i = 0; i < gt1.records.size(); ++i) {
    CHECK(gt1.records[i].user == gt2.records[i].user);
    CHECK(gt1.records[i].p_star == gt2.records[i].p_star);
    CHECK(gt1.records[i].realized == gt2.records[i].realized);
  }
}

TEST_CASE("generate: stances and typing hold across the emitted graph") {
  auto [g, gt] = generate(small_cfg(4));
  int interactions = 0;
  for (const Edge& e : g.edges()) {
    if (is_interaction(e.kind)) {
      ++interactions;
      CHECK(e.stance.has_value());
      CHECK(e.ts.has_value());
    }
  }
  CHECK(interactions > 0);
  CHECK(gt.period_t_end > 0);
}

TEST_CASE("raising the opposition coefficient never adds future edges") {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    SynthConfig low = small_cfg(seed);
    low.beta_fop = 0.5;
    SynthConfig high = low;
    high.beta_fop = 3.0;
    auto [g_low, gt_low] = generate(low);
    auto [g_high, gt_high] = generate(high);
    CAPTURE(seed);
    CHECK(gt_high.realized_count <= gt_low.realized_count);
  }
}

TEST_CASE("exposures equal path multiplicities recomputed by the paths module") {
  for (uint64_t seed = 101; seed <= 103; ++seed) {
    SynthConfig cfg = small_cfg(seed);
    auto [g, gt] = generate(cfg);
    HeteroGraph snapshot = g.snapshot_before(gt.period_t_end);
    auto fsp = build_fsp_multiplicity(snapshot);
    auto fop = build_fop_multiplicity(snapshot);
    auto esp = build_esp_multiplicity(snapshot);
    auto eop = build_eop_multiplicity(snapshot);

    std::set<std::pair<NodeId, NodeId>> candidates_with_exposure;
    for (const GtRecord& r : gt.records) {
      std::pair<NodeId, NodeId> key{gt.user_of(r), gt.post_of(r)};
      auto count_of = [&](const PathMultiplicity& m) {
        auto it = m.find(key);
        return it == m.end() ? 0 : it->second;
      };
      CAPTURE(seed);
      CAPTURE(key.first);
      CAPTURE(key.second);
      CHECK(r.x_fsp == count_of(fsp));
      CHECK(r.x_fop == count_of(fop));
      CHECK(r.x_esp == count_of(esp));
      CHECK(r.x_eop == count_of(eop));
      if (r.x_fsp || r.x_fop || r.x_esp || r.x_eop) candidates_with_exposure.insert(key);
    }

    // Completeness: every multiplicity the paths module finds for a candidate
    // pair appears in the ground truth records.
    std::set<std::pair<NodeId, NodeId>> linked;
    for (const Edge& e : snapshot.edges()) {
      if (is_interaction(e.kind)) linked.insert({e.src, e.dst});
    }
    for (const auto* mult : {&fsp, &fop, &esp, &eop}) {
      for (const auto& [key, count] : *mult) {
        if (linked.count(key)) continue;  // not a candidate
        CHECK(candidates_with_exposure.count(key) == 1);
      }
    }
  }
}

TEST_CASE("size presets scale the node counts") {
  SynthConfig small = SynthConfig::preset(SizePreset::Small);
  CHECK(small.n_users == 100);
  SynthConfig medium = SynthConfig::preset(SizePreset::Medium);
  CHECK(medium.n_users == 1000);
  SynthConfig large = SynthConfig::preset(SizePreset::Large);
  CHECK(large.n_users == 10000);
  // posts grow in proportion to users
  CHECK(medium.n_posts == 10 * small.n_posts);
  CHECK(large.n_posts == 10 * medium.n_posts);

  auto [g, gt] = generate(small);
  int users = 0, posts = 0;
  for (const auto& [id, rec] : g.nodes()) {
    (rec.kind == NodeKind::User ? users : posts)++;
  }
  CHECK(users == 100);
  CHECK(posts == small.n_posts);
}

TEST_CASE("config json round-trip and validation") {
  SynthConfig cfg = small_cfg(5);
  std::string text = synth_config_to_json(cfg);
  SynthConfig back = synth_config_from_json(text);
  CHECK(back.n_users == cfg.n_users);
  CHECK(back.p_support == cfg.p_support);
  CHECK(back.seed == cfg.seed);

  CHECK_THROWS_AS(synth_config_from_json("{\"nope\": 1}"), Error);
  CHECK_THROWS_AS(synth_config_from_json("{\"misinfo_frac\": 2.0}"), Error);
  SynthConfig preset = synth_config_from_json("{\"size_preset\": \"medium\", \"seed\": 9}");
  CHECK(preset.n_users == 1000);
  CHECK(preset.seed == 9);
}
