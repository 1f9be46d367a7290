#include "stancegraph/graph.hpp"

#include <algorithm>

namespace stancegraph {

namespace {

NodeKind expected_src(EdgeKind k) { return is_post_post(k) ? NodeKind::Post : NodeKind::User; }

NodeKind expected_dst(EdgeKind k) {
  if (is_user_user(k)) return NodeKind::User;
  return NodeKind::Post;
}

}  // namespace

void HeteroGraph::add_node(NodeRecord record) {
  if (frozen_) throw Error(Errc::FrozenGraph, "add_node on frozen graph");
  if (record.id.empty()) throw Error(Errc::SchemaMismatch, "empty node id");
  if (nodes_.count(record.id)) throw Error(Errc::DuplicateId, "node '" + record.id + "'");
  bool attrs_are_user = std::holds_alternative<UserAttrs>(record.attrs);
  if (attrs_are_user != (record.kind == NodeKind::User)) {
    throw Error(Errc::SchemaMismatch, "attrs do not match node kind for '" + record.id + "'");
  }
  if (record.kind == NodeKind::User) {
    const auto& a = std::get<UserAttrs>(record.attrs);
    if (a.post_count < 0 || a.account_age_days < 0) {
      throw Error(Errc::SchemaMismatch, "negative counter on user '" + record.id + "'");
    }
  } else {
    const auto& a = std::get<PostAttrs>(record.attrs);
    if (a.created_ts < 0) {
      throw Error(Errc::SchemaMismatch, "negative created_ts on post '" + record.id + "'");
    }
  }
  nodes_.emplace(record.id, std::move(record));
}

void HeteroGraph::add_edge(Edge edge) {
  if (frozen_) throw Error(Errc::FrozenGraph, "add_edge on frozen graph");
  auto src_it = nodes_.find(edge.src);
  auto dst_it = nodes_.find(edge.dst);
  if (src_it == nodes_.end() || dst_it == nodes_.end()) {
    throw Error(Errc::UnknownEndpoint,
                "edge " + edge.src + " -> " + edge.dst + " (" + to_string(edge.kind) + ")");
  }
  if (src_it->second.kind != expected_src(edge.kind) ||
      dst_it->second.kind != expected_dst(edge.kind)) {
    throw Error(Errc::KindTypingViolation,
                "edge " + edge.src + " -> " + edge.dst + " (" + to_string(edge.kind) + ")");
  }
  if (is_interaction(edge.kind)) {
    if (!edge.ts.has_value()) {
      throw Error(Errc::MissingTimestamp,
                  "interaction edge " + edge.src + " -> " + edge.dst + " has no ts");
    }
  } else if (edge.stance.has_value()) {
    throw Error(Errc::IllegalStance,
                "stance on non-interaction edge " + edge.src + " -> " + edge.dst);
  }
  if (is_symmetric(edge.kind) && edge.dst < edge.src) {
    std::swap(edge.src, edge.dst);  // canonical direction: lower id first
  }
  auto key = std::make_tuple(edge.src, edge.dst, edge.kind, edge.ts);
  if (!seen_.insert(key).second) {
    throw Error(Errc::DuplicateId,
                "duplicate edge " + edge.src + " -> " + edge.dst + " (" + to_string(edge.kind) + ")");
  }
  edges_.push_back(std::move(edge));
  index_edge(edges_.size() - 1);
}

void HeteroGraph::index_edge(size_t pos) {
  const Edge& e = edges_[pos];
  out_index_[{e.src, e.kind}].push_back(pos);
  in_index_[{e.dst, e.kind}].push_back(pos);
}

const NodeRecord& HeteroGraph::node(const NodeId& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(Errc::UnknownNode, "'" + id + "'");
  return it->second;
}

const NodeRecord* HeteroGraph::find_node(const NodeId& id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const std::vector<size_t>* HeteroGraph::out_edges(const NodeId& id, EdgeKind kind) const {
  auto it = out_index_.find({id, kind});
  return it == out_index_.end() ? nullptr : &it->second;
}

const std::vector<size_t>* HeteroGraph::in_edges(const NodeId& id, EdgeKind kind) const {
  auto it = in_index_.find({id, kind});
  return it == in_index_.end() ? nullptr : &it->second;
}

std::vector<NodeId> HeteroGraph::neighbors(const NodeId& id, const std::set<EdgeKind>& kinds,
                                           Direction direction) const {
  if (!has_node(id)) throw Error(Errc::UnknownNode, "'" + id + "'");
  std::set<NodeId> out;
  for (EdgeKind k : kinds) {
    if (direction == Direction::Out || direction == Direction::Both) {
      if (const auto* idx = out_edges(id, k)) {
        for (size_t pos : *idx) out.insert(edges_[pos].dst);
      }
    }
    if (direction == Direction::In || direction == Direction::Both) {
      if (const auto* idx = in_edges(id, k)) {
        for (size_t pos : *idx) out.insert(edges_[pos].src);
      }
    }
  }
  return {out.begin(), out.end()};
}

HeteroGraph HeteroGraph::snapshot_before(int64_t t) const {
  HeteroGraph g;
  for (const auto& [id, rec] : nodes_) g.add_node(rec);
  for (const Edge& e : edges_) {
    if (!e.ts.has_value() || *e.ts <= t) g.add_edge(e);
  }
  g.freeze();
  return g;
}

bool graph_equal(const HeteroGraph& a, const HeteroGraph& b) {
  if (a.nodes() != b.nodes()) return false;
  auto key = [](const Edge& e) {
    return std::make_tuple(e.src, e.dst, e.kind, e.stance, e.ts);
  };
  auto collect = [&](const HeteroGraph& g) {
    std::vector<std::tuple<NodeId, NodeId, EdgeKind, std::optional<Stance>, std::optional<int64_t>>>
        v;
    v.reserve(g.edge_count());
    for (const Edge& e : g.edges()) v.push_back(key(e));
    std::sort(v.begin(), v.end());
    return v;
  };
  return collect(a) == collect(b);
}

const char* to_string(NodeKind k) { return k == NodeKind::User ? "user" : "post"; }

const char* to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Follows: return "follows";
    case EdgeKind::Mentions: return "mentions";
    case EdgeKind::SameClaim: return "same_claim";
    case EdgeKind::SharedKeyword: return "shared_keyword";
    case EdgeKind::Posts: return "posts";
    case EdgeKind::Retweets: return "retweets";
    case EdgeKind::Replies: return "replies";
    case EdgeKind::Quotes: return "quotes";
  }
  return "?";
}

const char* to_string(Stance s) {
  switch (s) {
    case Stance::Support: return "support";
    case Stance::Oppose: return "oppose";
    case Stance::Neutral: return "neutral";
  }
  return "?";
}

std::optional<NodeKind> node_kind_from_string(const std::string& s) {
  if (s == "user") return NodeKind::User;
  if (s == "post") return NodeKind::Post;
  return std::nullopt;
}

std::optional<EdgeKind> edge_kind_from_string(const std::string& s) {
  for (int i = 0; i < kEdgeKindCount; ++i) {
    EdgeKind k = static_cast<EdgeKind>(i);
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

std::optional<Stance> stance_from_string(const std::string& s) {
  if (s == "support") return Stance::Support;
  if (s == "oppose") return Stance::Oppose;
  if (s == "neutral") return Stance::Neutral;
  return std::nullopt;
}

}  // namespace stancegraph
