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

#include "hdlkit/design.hpp"

#include <functional>

#include "hdlkit/classes.hpp"
#include "hdlkit/error.hpp"

namespace hdlkit {

std::string display_name(const std::string& hdl_name, const std::string& requested) {
  if (!hdl_name.empty()) return hdl_name;
  if (!requested.empty()) return requested;
  return "<unnamed>";
}

SignalNode& Design::add_node() {
  auto& n = nodes_.emplace_back();
  n.id = static_cast<NodeId>(nodes_.size() - 1);
  shadow_.push_back({ShadowEntry::Kind::node, n.id, nullptr});
  return n;
}

ObjectInstance& Design::add_object() {
  auto& o = objects_.emplace_back();
  o.id = static_cast<ObjectId>(objects_.size() - 1);
  shadow_.push_back({ShadowEntry::Kind::object, o.id, nullptr});
  return o;
}

ProcessBlock& Design::add_process() {
  auto& p = processes_.emplace_back();
  p.id = static_cast<ProcessId>(processes_.size() - 1);
  shadow_.push_back({ShadowEntry::Kind::process, p.id, nullptr});
  return p;
}

EntityRecord& Design::add_entity() {
  auto& e = entities_.emplace_back();
  e.id = static_cast<EntityId>(entities_.size() - 1);
  shadow_.push_back({ShadowEntry::Kind::entity, e.id, nullptr});
  return e;
}

void Design::register_class(const ClassDef* cls) {
  shadow_.push_back({ShadowEntry::Kind::class_def, 0, cls});
}

NodeId Design::root(NodeId id) const {
  // Connection checks reject cycles, so the chain terminates.
  while (nodes_.at(id).structural_driver) id = *nodes_.at(id).structural_driver;
  return id;
}

std::string Design::object_path(ObjectId id) const {
  const auto& o = objects_.at(id);
  std::string prefix = entities_.at(o.owner).path;
  std::string name = display_name(o.hdl_name, o.requested_name);
  if (o.parent_handler && o.hdl_name.empty()) {
    name = object_path(*o.parent_handler).substr(prefix.size() + 1) + "/" + name;
  }
  return prefix + "/" + name;
}

std::string Design::node_path(NodeId id) const {
  const auto& n = nodes_.at(id);
  if (n.object) {
    const auto& o = objects_.at(*n.object);
    return object_path(*n.object) + "/" + o.cls->member(n.slot).name;
  }
  std::string base = entities_.at(n.owner).path;
  if (n.process) base += "/" + display_name(processes_.at(*n.process).hdl_name,
                                            processes_.at(*n.process).requested_name);
  return base + "/" + display_name(n.hdl_name, n.requested_name);
}

std::string Design::process_path(ProcessId id) const {
  const auto& p = processes_.at(id);
  return entities_.at(p.owner).path + "/" + display_name(p.hdl_name, p.requested_name);
}

std::vector<EntityId> Design::hierarchy(EntityId top) const {
  std::vector<EntityId> out;
  std::function<void(EntityId)> walk = [&](EntityId e) {
    out.push_back(e);
    for (auto c : entities_.at(e).children) walk(c);
  };
  walk(top);
  return out;
}

}  // namespace hdlkit
