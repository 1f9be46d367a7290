#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "stancegraph/errors.hpp"

namespace stancegraph {

// Node identifiers are opaque strings, unique across both node kinds.
using NodeId = std::string;

enum class NodeKind { User, Post };

struct UserAttrs {
  std::string description;
  int64_t post_count = 0;
  int64_t account_age_days = 0;
  bool verified = false;

  bool operator==(const UserAttrs&) const = default;
};

struct PostAttrs {
  std::string text;
  std::optional<std::string> claim_id;
  bool is_misinfo = false;  // ground label, never predicted
  int64_t created_ts = 0;

  bool operator==(const PostAttrs&) const = default;
};

struct NodeRecord {
  NodeId id;
  NodeKind kind = NodeKind::User;
  std::variant<UserAttrs, PostAttrs> attrs;

  bool operator==(const NodeRecord&) const = default;
};

enum class EdgeKind {
  Follows,
  Mentions,
  SameClaim,
  SharedKeyword,
  Posts,
  Retweets,
  Replies,
  Quotes,
};

constexpr int kEdgeKindCount = 8;

enum class Stance { Support, Oppose, Neutral };

// User->Post edges; the only kinds that carry timestamps and stances.
inline bool is_interaction(EdgeKind k) {
  return k == EdgeKind::Posts || k == EdgeKind::Retweets || k == EdgeKind::Replies ||
         k == EdgeKind::Quotes;
}

inline bool is_user_user(EdgeKind k) {
  return k == EdgeKind::Follows || k == EdgeKind::Mentions;
}

inline bool is_post_post(EdgeKind k) {
  return k == EdgeKind::SameClaim || k == EdgeKind::SharedKeyword;
}

// Post-post kinds are undirected; stored once per unordered pair with the
// lower NodeId first.
inline bool is_symmetric(EdgeKind k) { return is_post_post(k); }

struct Edge {
  NodeId src;
  NodeId dst;
  EdgeKind kind = EdgeKind::Follows;
  std::optional<Stance> stance;
  std::optional<int64_t> ts;

  bool operator==(const Edge&) const = default;
};

enum class Direction { Out, In, Both };

// Typed heterogeneous graph. Single-writer while mutable; freeze() makes it
// immutable and safe for concurrent readers.
class HeteroGraph {
 public:
  void add_node(NodeRecord record);
  void add_edge(Edge edge);

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  bool has_node(const NodeId& id) const { return nodes_.count(id) > 0; }
  const NodeRecord& node(const NodeId& id) const;
  const NodeRecord* find_node(const NodeId& id) const;

  size_t node_count() const { return nodes_.size(); }
  size_t edge_count() const { return edges_.size(); }

  // Nodes in NodeId order.
  const std::map<NodeId, NodeRecord>& nodes() const { return nodes_; }
  // Edges in insertion order.
  const std::vector<Edge>& edges() const { return edges_; }

  // Edge indices (positions into edges()) for a given endpoint and kind.
  const std::vector<size_t>* out_edges(const NodeId& id, EdgeKind kind) const;
  const std::vector<size_t>* in_edges(const NodeId& id, EdgeKind kind) const;

  // Sorted, deduplicated neighbor ids reachable over the given kinds.
  std::vector<NodeId> neighbors(const NodeId& id, const std::set<EdgeKind>& kinds,
                                Direction direction) const;

  // Copy containing all nodes, all untimestamped edges, and timestamped edges
  // with ts <= t. The returned graph is frozen.
  HeteroGraph snapshot_before(int64_t t) const;

 private:
  void index_edge(size_t pos);

  bool frozen_ = false;
  std::map<NodeId, NodeRecord> nodes_;
  std::vector<Edge> edges_;
  std::map<std::pair<NodeId, EdgeKind>, std::vector<size_t>> out_index_;
  std::map<std::pair<NodeId, EdgeKind>, std::vector<size_t>> in_index_;
  std::set<std::tuple<NodeId, NodeId, EdgeKind, std::optional<int64_t>>> seen_;
};

// Same node set (ids, kinds, attrs) and same edge multiset.
bool graph_equal(const HeteroGraph& a, const HeteroGraph& b);

const char* to_string(NodeKind k);
const char* to_string(EdgeKind k);
const char* to_string(Stance s);
std::optional<NodeKind> node_kind_from_string(const std::string& s);
std::optional<EdgeKind> edge_kind_from_string(const std::string& s);
std::optional<Stance> stance_from_string(const std::string& s);

}  // namespace stancegraph
