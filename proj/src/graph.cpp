// Copyright 2026 The hdlkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hdlkit/graph.hpp"

#include <algorithm>
#include <map>
#include <functional>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "hdlkit/classes.hpp"

namespace hdlkit {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ConnectionGraph connection_graph(const Design& d, EntityId top) {
  ConnectionGraph g;
  g.top = d.entity(top).path;
  std::map<NodeId, std::string> node_ids;
  std::map<ObjectId, std::string> object_ids;

  for (EntityId e : d.hierarchy(top)) {
    const auto& rec = d.entity(e);
    std::optional<std::string> parent;
    if (rec.parent && e != top) parent = d.entity(*rec.parent).path;
    g.nodes.push_back({rec.path, "entity", display_name(rec.hdl_name, rec.requested_name), rec.type_name, "",
                       parent});
    for (const auto& p : rec.ports) {
      if (p.is_object) {
        const auto& o = d.object(p.id);
        std::string id = d.object_path(p.id);
        object_ids[p.id] = id;
        g.nodes.push_back({id, "port", o.hdl_name, o.cls->name,
                           o.port->direction == PortDirection::out ? "out" : "in", rec.path});
      } else {
        const auto& n = d.node(p.id);
        std::string id = d.node_path(p.id);
        node_ids[p.id] = id;
        g.nodes.push_back({id, "port", n.hdl_name, n.type.to_string(),
                           n.port->direction == PortDirection::out ? "out" : "in", rec.path});
      }
    }
    for (NodeId id : rec.nodes) {
      const auto& n = d.node(id);
      if (n.port || n.object || n.process || n.storage != Storage::signal) continue;
      node_ids[id] = d.node_path(id);
      g.nodes.push_back({node_ids[id], "signal", n.hdl_name, n.type.to_string(), "", rec.path});
    }
    for (ObjectId id : rec.objects) {
      const auto& o = d.object(id);
      if (o.port || o.cls->kind != ClassKind::interface) continue;
      object_ids[id] = d.object_path(id);
      g.nodes.push_back({object_ids[id], "signal", o.hdl_name, o.cls->name, "", rec.path});
    }
  }

  std::set<std::tuple<std::string, std::string, std::string>> edges;
  for (const auto& [id, path] : node_ids) {
    const auto& n = d.node(id);
    if (!n.structural_driver) continue;
    auto it = node_ids.find(*n.structural_driver);
    if (it != node_ids.end()) edges.emplace(it->second, path, "driver");
  }
  for (EntityId e : d.hierarchy(top)) {
    for (const auto& c : d.entity(e).connections) {
      auto a = object_ids.find(c.source);
      auto b = object_ids.find(c.sink);
      if (a != object_ids.end() && b != object_ids.end()) edges.emplace(a->second, b->second, "connection");
    }
  }
  for (const auto& [from, to, kind] : edges) g.edges.push_back({from, to, kind});
  return g;
}

std::string ConnectionGraph::to_dot() const {
  std::map<std::string, std::vector<const Node*>> members;
  std::map<std::string, std::vector<const Node*>> children;
  const Node* root = nullptr;
  for (const auto& n : nodes) {
    if (n.kind == "entity") {
      if (n.parent) {
        children[*n.parent].push_back(&n);
      } else {
        root = &n;
      }
    } else if (n.parent) {
      members[*n.parent].push_back(&n);
    }
  }

  std::string out = fmt::format("digraph {} {{\n  rankdir=LR;\n  node [fontname=\"Helvetica\"];\n", quote(top));
  std::function<void(const Node&, int)> cluster = [&](const Node& e, int depth) {
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    out += fmt::format("{}subgraph {} {{\n", pad, quote("cluster_" + e.id));
    out += fmt::format("{}  label={};\n", pad, quote(e.name + " : " + e.type));
    for (const auto* m : members[e.id]) {
      std::string shape = m->kind == "port" ? (m->direction == "in" ? "invhouse" : "house") : "ellipse";
      out += fmt::format("{}  {} [label={}, shape={}];\n", pad, quote(m->id), quote(m->name), shape);
    }
    for (const auto* c : children[e.id]) cluster(*c, depth + 1);
    out += pad + "}\n";
  };
  if (root) cluster(*root, 1);
  for (const auto& e : edges) {
    out += fmt::format("  {} -> {}{};\n", quote(e.from), quote(e.to),
                       e.kind == "connection" ? " [penwidth=2]" : "");
  }
  out += "}\n";
  return out;
}

nlohmann::ordered_json ConnectionGraph::to_json() const {
  nlohmann::ordered_json j;
  j["top"] = top;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : nodes) {
    nlohmann::ordered_json o;
    o["id"] = n.id;
    o["kind"] = n.kind;
    o["name"] = n.name;
    o["type"] = n.type;
    if (n.kind == "port") o["direction"] = n.direction;
    o["parent"] = n.parent ? nlohmann::ordered_json(*n.parent) : nlohmann::ordered_json(nullptr);
    j["nodes"].push_back(std::move(o));
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : edges) j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"kind", e.kind}});
  return j;
}

}  // namespace hdlkit
