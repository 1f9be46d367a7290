#include "stancegraph/jsonl.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace stancegraph {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& path, size_t line, const std::string& msg) {
  throw Error(Errc::ParseError, path + ":" + std::to_string(line) + ": " + msg);
}

void check_keys(const json& obj, const std::set<std::string>& allowed, bool strict,
                const std::string& path, size_t line) {
  if (!strict) return;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) parse_fail(path, line, "unknown key '" + it.key() + "'");
  }
}

NodeRecord parse_node(const json& j, bool strict, const std::string& path, size_t line) {
  check_keys(j, {"id", "kind", "attrs"}, strict, path, line);
  NodeRecord rec;
  if (!j.contains("id") || !j["id"].is_string()) parse_fail(path, line, "missing string 'id'");
  rec.id = j["id"].get<std::string>();
  if (!j.contains("kind") || !j["kind"].is_string()) parse_fail(path, line, "missing string 'kind'");
  auto kind = node_kind_from_string(j["kind"].get<std::string>());
  if (!kind) parse_fail(path, line, "unknown node kind '" + j["kind"].get<std::string>() + "'");
  rec.kind = *kind;
  json attrs = j.value("attrs", json::object());
  if (!attrs.is_object()) parse_fail(path, line, "'attrs' must be an object");
  if (rec.kind == NodeKind::User) {
    check_keys(attrs, {"description", "post_count", "account_age_days", "verified"}, strict, path,
               line);
    UserAttrs a;
    a.description = attrs.value("description", std::string());
    a.post_count = attrs.value("post_count", int64_t{0});
    a.account_age_days = attrs.value("account_age_days", int64_t{0});
    a.verified = attrs.value("verified", false);
    rec.attrs = std::move(a);
  } else {
    check_keys(attrs, {"text", "claim_id", "is_misinfo", "created_ts"}, strict, path, line);
    PostAttrs a;
    a.text = attrs.value("text", std::string());
    if (attrs.contains("claim_id") && !attrs["claim_id"].is_null()) {
      a.claim_id = attrs["claim_id"].get<std::string>();
    }
    a.is_misinfo = attrs.value("is_misinfo", false);
    a.created_ts = attrs.value("created_ts", int64_t{0});
    rec.attrs = std::move(a);
  }
  return rec;
}

Edge parse_edge(const json& j, bool strict, const std::string& path, size_t line) {
  check_keys(j, {"src", "dst", "kind", "stance", "ts"}, strict, path, line);
  Edge e;
  if (!j.contains("src") || !j["src"].is_string()) parse_fail(path, line, "missing string 'src'");
  if (!j.contains("dst") || !j["dst"].is_string()) parse_fail(path, line, "missing string 'dst'");
  if (!j.contains("kind") || !j["kind"].is_string()) parse_fail(path, line, "missing string 'kind'");
  e.src = j["src"].get<std::string>();
  e.dst = j["dst"].get<std::string>();
  auto kind = edge_kind_from_string(j["kind"].get<std::string>());
  if (!kind) parse_fail(path, line, "unknown edge kind '" + j["kind"].get<std::string>() + "'");
  e.kind = *kind;
  if (j.contains("stance") && !j["stance"].is_null()) {
    if (!j["stance"].is_string()) parse_fail(path, line, "'stance' must be string or null");
    auto st = stance_from_string(j["stance"].get<std::string>());
    if (!st) parse_fail(path, line, "unknown stance '" + j["stance"].get<std::string>() + "'");
    e.stance = st;
  }
  if (j.contains("ts") && !j["ts"].is_null()) {
    if (!j["ts"].is_number_integer()) parse_fail(path, line, "'ts' must be integer or null");
    e.ts = j["ts"].get<int64_t>();
  }
  return e;
}

template <typename Fn>
void for_each_line(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    fn(line, lineno);
  }
}

json node_to_json(const NodeRecord& rec) {
  json attrs;
  if (rec.kind == NodeKind::User) {
    const auto& a = std::get<UserAttrs>(rec.attrs);
    attrs = {{"description", a.description},
             {"post_count", a.post_count},
             {"account_age_days", a.account_age_days},
             {"verified", a.verified}};
  } else {
    const auto& a = std::get<PostAttrs>(rec.attrs);
    attrs = {{"text", a.text},
             {"claim_id", a.claim_id ? json(*a.claim_id) : json(nullptr)},
             {"is_misinfo", a.is_misinfo},
             {"created_ts", a.created_ts}};
  }
  return {{"id", rec.id}, {"kind", to_string(rec.kind)}, {"attrs", attrs}};
}

json edge_to_json(const Edge& e) {
  return {{"src", e.src},
          {"dst", e.dst},
          {"kind", to_string(e.kind)},
          {"stance", e.stance ? json(to_string(*e.stance)) : json(nullptr)},
          {"ts", e.ts ? json(*e.ts) : json(nullptr)}};
}

}  // namespace

HeteroGraph load_jsonl(const std::string& nodes_path, const std::string& edges_path, bool strict) {
  HeteroGraph g;
  for_each_line(nodes_path, [&](const std::string& line, size_t lineno) {
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      parse_fail(nodes_path, lineno, e.what());
    }
    if (!j.is_object()) parse_fail(nodes_path, lineno, "expected a JSON object");
    try {
      g.add_node(parse_node(j, strict, nodes_path, lineno));
    } catch (const Error& e) {
      if (e.code() == Errc::ParseError) throw;
      throw Error(e.code(), nodes_path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  });
  for_each_line(edges_path, [&](const std::string& line, size_t lineno) {
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      parse_fail(edges_path, lineno, e.what());
    }
    if (!j.is_object()) parse_fail(edges_path, lineno, "expected a JSON object");
    try {
      g.add_edge(parse_edge(j, strict, edges_path, lineno));
    } catch (const Error& e) {
      if (e.code() == Errc::ParseError) throw;
      throw Error(e.code(), edges_path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  });
  return g;
}

void save_nodes_jsonl(const HeteroGraph& g, const std::string& nodes_path) {
  std::ofstream out(nodes_path);
  if (!out) throw Error(Errc::IoError, "cannot write '" + nodes_path + "'");
  for (const auto& [id, rec] : g.nodes()) out << node_to_json(rec).dump() << "\n";
}

void save_edges_jsonl(const HeteroGraph& g, const std::string& edges_path) {
  std::ofstream out(edges_path);
  if (!out) throw Error(Errc::IoError, "cannot write '" + edges_path + "'");
  for (const Edge& e : g.edges()) out << edge_to_json(e).dump() << "\n";
}

void save_jsonl(const HeteroGraph& g, const std::string& nodes_path,
                const std::string& edges_path) {
  save_nodes_jsonl(g, nodes_path);
  save_edges_jsonl(g, edges_path);
}

}  // namespace stancegraph
