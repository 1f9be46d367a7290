#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stancegraph/graph.hpp"

namespace stancegraph {

// The five neighbor structures a node can be embedded under: the organic
// graph plus the four stance-conditioned echo-chamber paths.
enum class PathKind { Main, FSP, FOP, ESP, EOP };

constexpr int kPathKindCount = 5;

const char* to_string(PathKind k);
std::optional<PathKind> path_kind_from_string(const std::string& s);

// Derived user->post link created by one of the four builders.
struct DerivedEdge {
  NodeId user;
  NodeId post;
  PathKind kind = PathKind::FSP;

  auto operator<=>(const DerivedEdge&) const = default;
};

struct PathConfig {
  // Derived edges target misinfo posts only unless extended to all posts.
  bool all_posts = false;
  // When set, co-engagement for ESP/EOP must fall within this many seconds
  // before the triggering interaction.
  std::optional<int64_t> co_engage_window_secs;
};

// (user, post) -> number of distinct intermediary users generating the pair.
using PathMultiplicity = std::map<std::pair<NodeId, NodeId>, int>;

// Follower-based paths: u2 follows u1 and u1 supports (FSP) or opposes (FOP)
// a target post; the pair (u2, post) is emitted.
PathMultiplicity build_fsp_multiplicity(const HeteroGraph& g, const PathConfig& cfg = {});
PathMultiplicity build_fop_multiplicity(const HeteroGraph& g, const PathConfig& cfg = {});

// Engagement-based paths: u1 supports (ESP) or opposes (EOP) a target post at
// time T, and u2 != u1 co-engaged some other post with u1 strictly before T.
PathMultiplicity build_esp_multiplicity(const HeteroGraph& g, const PathConfig& cfg = {});
PathMultiplicity build_eop_multiplicity(const HeteroGraph& g, const PathConfig& cfg = {});

std::vector<DerivedEdge> build_fsp(const HeteroGraph& g, const PathConfig& cfg = {});
std::vector<DerivedEdge> build_fop(const HeteroGraph& g, const PathConfig& cfg = {});
std::vector<DerivedEdge> build_esp(const HeteroGraph& g, const PathConfig& cfg = {});
std::vector<DerivedEdge> build_eop(const HeteroGraph& g, const PathConfig& cfg = {});

// Main edges plus the four deduplicated derived sets for one snapshot.
struct PathGraphs {
  const HeteroGraph* snapshot = nullptr;
  std::map<PathKind, std::vector<DerivedEdge>> derived;

  const std::vector<DerivedEdge>& derived_for(PathKind k) const { return derived.at(k); }
};

PathGraphs materialize(const HeteroGraph& g, const PathConfig& cfg = {});

// paths.jsonl export: {"user": str, "post": str, "path": "fsp"|...}.
void save_paths_jsonl(const PathGraphs& paths, const std::string& path);

}  // namespace stancegraph
