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

#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hdlkit/ir.hpp"
#include "hdlkit/types.hpp"

namespace hdlkit {

class Entity;
class HostContext;
struct ExecFrame;

namespace vhdl {
class EntityConverter;
}

enum class PortDirection : std::uint8_t { in, out };
enum class PortBinding : std::uint8_t { signal_port, variable_port, free_type };
enum class StreamRole : std::uint8_t { none, pipeline_in, pipeline_out };

/// Scalar ports carry a direction; interface ports use `out` for the primary
/// (port_out / pipeline_out) side and `in` for the secondary side.
struct PortSpec {
  PortDirection direction = PortDirection::in;
  PortBinding binding = PortBinding::signal_port;
  StreamRole stream = StreamRole::none;
};

/// A typed storage cell: the universal leaf of the design graph.
struct SignalNode {
  NodeId id = 0;
  Storage storage = Storage::signal;
  Type type;
  Value init;
  Value current;
  std::optional<Value> pending;
  std::string requested_name;
  std::string hdl_name;
  EntityId owner = 0;
  std::optional<ProcessId> process;   // process-local variables
  std::optional<ObjectId> object;     // leaf of a class instance
  int slot = -1;
  std::optional<NodeId> structural_driver;
  std::optional<PortSpec> port;
  std::vector<ProcessId> subscribers;
  bool traced = false;  // variables are traced only on request
};

/// Instance of a class: handler, interface bundle (port or free_type), or a
/// data container such as optional_t.
struct ObjectInstance {
  ObjectId id = 0;
  const ClassDef* cls = nullptr;
  EntityId owner = 0;
  std::string requested_name;
  std::string hdl_name;
  Storage storage = Storage::signal;
  std::vector<NodeId> leaves;
  std::optional<PortSpec> port;
  bool free_type = false;
  std::optional<ObjectId> parent_handler;
  std::optional<ObjectId> link;        // handlers: the interface bundle the view mirrors
  std::optional<ProcessId> process;    // handlers: owning process
  std::vector<ObjectId> bundles;       // handlers: free_type bundles
};

enum class ProcessKind : std::uint8_t { rising_edge, combinational, host };

using CompiledBlock = std::function<void(ExecFrame&)>;
using HostBody = std::function<void(HostContext&)>;

struct ProcessBlock {
  ProcessId id = 0;
  ProcessKind kind = ProcessKind::rising_edge;
  EntityId owner = 0;
  std::string requested_name;
  std::string hdl_name;
  std::optional<ObjectId> installed_by;  // combinational blocks of a handler class
  std::optional<NodeId> clock;
  Block body;
  CompiledBlock compiled;
  HostBody host;
  std::vector<NodeId> captured;
  std::vector<ObjectId> handlers;
  std::vector<NodeId> locals;
  std::vector<NodeId> host_writes;  // nodes a host process drives directly
};

/// Interface-level structural connection recorded in an architecture.
struct Connection {
  ObjectId source = 0;
  ObjectId sink = 0;
};

/// Entry of an entity's port list: a scalar node or an interface object.
struct PortRef {
  bool is_object = false;
  std::uint32_t id = 0;

  static PortRef node(NodeId n) { return {false, n}; }
  static PortRef object(ObjectId o) { return {true, o}; }
};

struct ClockSource {
  NodeId node = 0;
  unsigned period = 2;
};

struct EntityRecord {
  EntityId id = 0;
  std::string type_name;
  std::string requested_name;
  std::string hdl_name;
  std::string path;
  std::optional<EntityId> parent;
  Entity* object = nullptr;
  std::vector<EntityId> children;
  std::vector<NodeId> nodes;
  std::vector<ObjectId> objects;
  std::vector<ProcessId> processes;
  std::vector<PortRef> ports;  // declaration order
  std::optional<NodeId> clk;
  std::vector<Connection> connections;
  std::optional<ClockSource> clock_source;
  std::shared_ptr<const vhdl::EntityConverter> converter;
  bool arch_started = false;
  bool elaborated = false;
  bool sim_only = false;
  unsigned anon_counter = 0;
};

/// Ordered registry of every framework object created in a session.
struct ShadowEntry {
  enum class Kind : std::uint8_t { node, entity, object, process, class_def };
  Kind kind = Kind::node;
  std::uint32_t id = 0;
  const ClassDef* cls = nullptr;
};

/// Arena for the elaborated design graph. Ids index directly into the
/// containers; deques keep references stable while elaboration appends.
class Design {
 public:
  SignalNode& node(NodeId id) { return nodes_.at(id); }
  const SignalNode& node(NodeId id) const { return nodes_.at(id); }
  ObjectInstance& object(ObjectId id) { return objects_.at(id); }
  const ObjectInstance& object(ObjectId id) const { return objects_.at(id); }
  ProcessBlock& process(ProcessId id) { return processes_.at(id); }
  const ProcessBlock& process(ProcessId id) const { return processes_.at(id); }
  EntityRecord& entity(EntityId id) { return entities_.at(id); }
  const EntityRecord& entity(EntityId id) const { return entities_.at(id); }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t object_count() const { return objects_.size(); }
  std::size_t process_count() const { return processes_.size(); }
  std::size_t entity_count() const { return entities_.size(); }

  SignalNode& add_node();
  ObjectInstance& add_object();
  ProcessBlock& add_process();
  EntityRecord& add_entity();
  void register_class(const ClassDef* cls);

  const std::vector<ShadowEntry>& shadow_register() const { return shadow_; }

  /// Follows structural drivers to the net root that owns the storage.
  NodeId root(NodeId id) const;

  /// Hierarchical path for diagnostics (tb/cnt/Dout).
  std::string node_path(NodeId id) const;
  std::string object_path(ObjectId id) const;
  std::string process_path(ProcessId id) const;

  /// Entities reachable from `top`, parents before children.
  std::vector<EntityId> hierarchy(EntityId top) const;

 private:
  std::deque<SignalNode> nodes_;
  std::deque<ObjectInstance> objects_;
  std::deque<ProcessBlock> processes_;
  std::deque<EntityRecord> entities_;
  std::vector<ShadowEntry> shadow_;
};

std::string display_name(const std::string& hdl_name, const std::string& requested);

}  // namespace hdlkit
