#include "stancegraph/paths.hpp"

#include <fstream>
#include <limits>
#include <set>

#include <json.hpp>

namespace stancegraph {

namespace {

bool is_target_post(const HeteroGraph& g, const NodeId& post, const PathConfig& cfg) {
  if (cfg.all_posts) return true;
  return std::get<PostAttrs>(g.node(post).attrs).is_misinfo;
}

// Interaction edges onto target posts must be stance-labeled; path
// correctness depends on them. Elsewhere a missing stance is tolerated.
void require_labeled(const HeteroGraph& g, const PathConfig& cfg) {
  for (const Edge& e : g.edges()) {
    if (is_interaction(e.kind) && !e.stance.has_value() && is_target_post(g, e.dst, cfg)) {
      throw Error(Errc::UnlabeledStance,
                  "interaction edge " + e.src + " -> " + e.dst + " lacks a stance");
    }
  }
}

PathMultiplicity build_follower_paths(const HeteroGraph& g, Stance stance,
                                      const PathConfig& cfg) {
  require_labeled(g, cfg);
  std::map<std::pair<NodeId, NodeId>, std::set<NodeId>> witnesses;
  for (const Edge& e : g.edges()) {
    if (!is_interaction(e.kind) || e.stance != stance) continue;
    if (!is_target_post(g, e.dst, cfg)) continue;
    const auto* follower_edges = g.in_edges(e.src, EdgeKind::Follows);
    if (!follower_edges) continue;
    for (size_t pos : *follower_edges) {
      const NodeId& follower = g.edges()[pos].src;
      witnesses[{follower, e.dst}].insert(e.src);
    }
  }
  PathMultiplicity out;
  for (const auto& [pair, users] : witnesses) out[pair] = static_cast<int>(users.size());
  return out;
}

PathMultiplicity build_engagement_paths(const HeteroGraph& g, Stance stance,
                                        const PathConfig& cfg) {
  require_labeled(g, cfg);

  // Per-post engagement history: (ts, user) for every interaction edge.
  std::map<NodeId, std::vector<std::pair<int64_t, NodeId>>> engagers_of_post;
  std::map<NodeId, std::vector<std::pair<int64_t, NodeId>>> posts_of_user;
  for (const Edge& e : g.edges()) {
    if (!is_interaction(e.kind)) continue;
    engagers_of_post[e.dst].emplace_back(*e.ts, e.src);
    posts_of_user[e.src].emplace_back(*e.ts, e.dst);
  }

  std::map<std::pair<NodeId, NodeId>, std::set<NodeId>> witnesses;
  for (const Edge& e : g.edges()) {
    if (!is_interaction(e.kind) || e.stance != stance) continue;
    if (!is_target_post(g, e.dst, cfg)) continue;
    const NodeId& focal = e.src;
    const NodeId& target = e.dst;
    int64_t trigger_ts = *e.ts;
    int64_t earliest = cfg.co_engage_window_secs
                           ? trigger_ts - *cfg.co_engage_window_secs
                           : std::numeric_limits<int64_t>::min();
    auto it = posts_of_user.find(focal);
    if (it == posts_of_user.end()) continue;
    for (const auto& [focal_ts, shared_post] : it->second) {
      if (shared_post == target || focal_ts >= trigger_ts || focal_ts < earliest) continue;
      for (const auto& [other_ts, other_user] : engagers_of_post[shared_post]) {
        if (other_user == focal || other_ts >= trigger_ts || other_ts < earliest) continue;
        witnesses[{other_user, target}].insert(focal);
      }
    }
  }
  PathMultiplicity out;
  for (const auto& [pair, users] : witnesses) out[pair] = static_cast<int>(users.size());
  return out;
}

std::vector<DerivedEdge> to_edges(const PathMultiplicity& mult, PathKind kind) {
  std::vector<DerivedEdge> out;
  out.reserve(mult.size());
  for (const auto& [pair, count] : mult) out.push_back({pair.first, pair.second, kind});
  return out;
}

}  // namespace

PathMultiplicity build_fsp_multiplicity(const HeteroGraph& g, const PathConfig& cfg) {
  return build_follower_paths(g, Stance::Support, cfg);
}

PathMultiplicity build_fop_multiplicity(const HeteroGraph& g, const PathConfig& cfg) {
  return build_follower_paths(g, Stance::Oppose, cfg);
}

PathMultiplicity build_esp_multiplicity(const HeteroGraph& g, const PathConfig& cfg) {
  return build_engagement_paths(g, Stance::Support, cfg);
}

PathMultiplicity build_eop_multiplicity(const HeteroGraph& g, const PathConfig& cfg) {
  return build_engagement_paths(g, Stance::Oppose, cfg);
}

std::vector<DerivedEdge> build_fsp(const HeteroGraph& g, const PathConfig& cfg) {
  return to_edges(build_fsp_multiplicity(g, cfg), PathKind::FSP);
}

std::vector<DerivedEdge> build_fop(const HeteroGraph& g, const PathConfig& cfg) {
  return to_edges(build_fop_multiplicity(g, cfg), PathKind::FOP);
}

std::vector<DerivedEdge> build_esp(const HeteroGraph& g, const PathConfig& cfg) {
  return to_edges(build_esp_multiplicity(g, cfg), PathKind::ESP);
}

std::vector<DerivedEdge> build_eop(const HeteroGraph& g, const PathConfig& cfg) {
  return to_edges(build_eop_multiplicity(g, cfg), PathKind::EOP);
}

PathGraphs materialize(const HeteroGraph& g, const PathConfig& cfg) {
  PathGraphs out;
  out.snapshot = &g;
  out.derived[PathKind::FSP] = build_fsp(g, cfg);
  out.derived[PathKind::FOP] = build_fop(g, cfg);
  out.derived[PathKind::ESP] = build_esp(g, cfg);
  out.derived[PathKind::EOP] = build_eop(g, cfg);
  return out;
}

void save_paths_jsonl(const PathGraphs& paths, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write '" + path + "'");
  for (PathKind k : {PathKind::FSP, PathKind::FOP, PathKind::ESP, PathKind::EOP}) {
    for (const DerivedEdge& e : paths.derived_for(k)) {
      nlohmann::json j = {{"user", e.user}, {"post", e.post}, {"path", to_string(k)}};
      out << j.dump() << "\n";
    }
  }
}

const char* to_string(PathKind k) {
  switch (k) {
    case PathKind::Main: return "main";
    case PathKind::FSP: return "fsp";
    case PathKind::FOP: return "fop";
    case PathKind::ESP: return "esp";
    case PathKind::EOP: return "eop";
  }
  return "?";
}

std::optional<PathKind> path_kind_from_string(const std::string& s) {
  for (int i = 0; i < kPathKindCount; ++i) {
    PathKind k = static_cast<PathKind>(i);
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

}  // namespace stancegraph
