#pragma once

#include <string>

#include "stancegraph/graph.hpp"

namespace stancegraph {

// nodes.jsonl / edges.jsonl readers and writers.
//
// One JSON object per line:
//   nodes: {"id": str, "kind": "user"|"post", "attrs": {...}}
//   edges: {"src": str, "dst": str, "kind": str, "stance": str|null, "ts": int|null}
//
// strict mode rejects unknown keys; parse and validation failures carry the
// offending line number. The returned graph is not frozen.
HeteroGraph load_jsonl(const std::string& nodes_path, const std::string& edges_path,
                       bool strict = true);

void save_jsonl(const HeteroGraph& g, const std::string& nodes_path,
                const std::string& edges_path);

void save_nodes_jsonl(const HeteroGraph& g, const std::string& nodes_path);
void save_edges_jsonl(const HeteroGraph& g, const std::string& edges_path);

}  // namespace stancegraph
