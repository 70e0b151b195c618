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

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hdlkit/builder.hpp"
#include "hdlkit/design.hpp"
#include "hdlkit/session.hpp"

namespace hdlkit {

/// Handle to a single storage node (signal, variable, constant, port).
class Signal {
 public:
  Signal() = default;
  Signal(Session* s, NodeId id) : session_(s), id_(id) {}

  bool valid() const { return session_ != nullptr; }
  NodeId id() const { return id_; }
  const Type& type() const;
  Storage storage() const;
  const SignalNode& node() const;
  /// Current committed value of the node's net.
  Value value() const;
  std::string path() const;

  operator Expr() const;    // NOLINT(google-explicit-constructor)
  operator Target() const;  // NOLINT(google-explicit-constructor)

 private:
  Session* session_ = nullptr;
  NodeId id_ = 0;
};

/// Handle to a class instance: interface bundle or port, handler, or data
/// container such as optional_t.
class Object {
 public:
  Object() = default;
  Object(Session* s, ObjectId id) : session_(s), id_(id) {}

  bool valid() const { return session_ != nullptr; }
  ObjectId id() const { return id_; }
  Session& session() const { return *session_; }
  const ClassDef& cls() const;
  const ObjectInstance& instance() const;
  Signal member(std::string_view name) const;
  std::string path() const;

  operator Target() const;   // NOLINT(google-explicit-constructor)
  operator Operand() const;  // NOLINT(google-explicit-constructor)

 private:
  Session* session_ = nullptr;
  ObjectId id_ = 0;
};

using Interface = Object;
using Handler = Object;

class Architecture;

/// Entity base. Concrete entities declare their ports in the constructor and
/// usually elaborate their architecture there as well.
class Entity {
 public:
  Entity(Session& session, std::string type_name, std::string instance_name);
  virtual ~Entity() = default;
  Entity(const Entity&) = delete;
  Entity& operator=(const Entity&) = delete;

  EntityId id() const { return id_; }
  Session& session() const { return *session_; }
  const EntityRecord& record() const;
  const std::string& path() const;
  const std::string& type_name() const;

  /// Port lookup by requested name (scalar or interface).
  Signal scalar_port(std::string_view name) const;
  Object interface_port(std::string_view name) const;
  Object stream_port(StreamRole role) const;

 protected:
  Signal port_in(std::string name, Type type);
  Signal port_out(std::string name, Type type);
  /// Interface ports: primary side (port_Master) or secondary (port_Slave).
  Object port_primary(std::string name, const ClassDef& iface);
  Object port_secondary(std::string name, const ClassDef& iface);
  Object pipeline_in(std::string name, const ClassDef& iface);
  Object pipeline_out(std::string name, const ClassDef& iface);

  /// Scalar input driven structurally by `source` from the enclosing scope.
  void bind_input(Signal port, Signal source);

  Architecture begin_architecture();

  /// Marks the entity as simulation-only; conversion rejects it.
  void set_sim_only();

 private:
  Object make_port(std::string name, const ClassDef& iface, PortDirection dir, StreamRole role);
  Session* session_;
  EntityId id_;
};

/// Entity with a clock input `clk`.
class ClockedEntity : public Entity {
 public:
  ClockedEntity(Session& session, std::string type_name, std::string instance_name, Signal clk);

  Signal clk;
};

/// Recorder for a process body: statements plus process-local declarations.
class ProcessBuilder : public BlockBuilder {
 public:
  ProcessBuilder(Session& session, ProcessId pid);

  Signal variable(std::string name, Type type);
  Signal variable(std::string name, Type type, std::int64_t init);
  /// Process-local data container (variable storage).
  Object data(std::string name, const ClassDef& cls);

  ProcessId id() const { return pid_; }

 private:
  Session* session_;
  ProcessId pid_;
};

using ProcessBody = std::function<void(ProcessBuilder&)>;

/// Host-side view for native (simulation-only) processes.
class HostContext {
 public:
  virtual ~HostContext() = default;
  virtual std::uint64_t tick() const = 0;
  virtual Value read(Signal s) const = 0;
  virtual void write(Signal s, const Value& v) = 0;
  virtual bool truthy(const Object& handler) = 0;
  /// handler << value
  virtual void send(const Object& handler, const Value& v) = 0;
  /// value << handler
  virtual Value receive(const Object& handler) = 0;
};

/// One stage of a `|` pipeline: an entity's stream ports or an interface port.
class Endpoint {
 public:
  Endpoint(Entity& e);         // NOLINT(google-explicit-constructor)
  Endpoint(const Object& o);   // NOLINT(google-explicit-constructor)

  Object upstream() const;    // what feeds the next stage
  Object downstream() const;  // what the previous stage feeds
  Session& session() const { return *session_; }

 private:
  friend struct Pipeline;
  Endpoint() = default;
  // Each side is an object or an entity resolved on use; a pipeline takes
  // its downstream side from the first stage and its upstream side from the last.
  Session* session_ = nullptr;
  std::optional<EntityId> down_entity_, up_entity_;
  std::optional<ObjectId> down_object_, up_object_;
};

struct Pipeline {
  Endpoint head;
  Endpoint tail;
  operator Endpoint() const;  // NOLINT(google-explicit-constructor)
};

/// Connects upstream's stream output to downstream's stream input in the
/// current architecture. Returns the chain so far; chains associate.
Pipeline operator|(const Endpoint& upstream, const Endpoint& downstream);

class Architecture {
 public:
  Architecture(Session& session, EntityId entity);
  ~Architecture();
  Architecture(const Architecture&) = delete;
  Architecture& operator=(const Architecture&) = delete;

  EntityId entity() const { return entity_; }
  Session& session() const { return *session_; }

  Signal signal(std::string name, Type type);
  Signal signal(std::string name, Type type, std::int64_t init);
  Signal vector(std::string name, unsigned width, std::uint64_t init = 0);
  Signal logic(std::string name);
  Signal constant(std::string name, Type type, std::int64_t value);

  /// Local interface bundle (signal storage) or free_type bundle.
  Object bundle(std::string name, const ClassDef& iface, bool free_type = false);
  /// Data container with signal storage.
  Object data(std::string name, const ClassDef& cls);
  /// Handler for an interface port, chosen by the port's role in this scope.
  Object get_handle(const Object& port, std::string name);
  Object get_handle(const Object& bundle, std::string name, HandlerRole role);

  template <class T, class... A>
  T& instantiate(std::string name, A&&... args) {
    return session_->create<T>(std::move(name), std::forward<A>(args)...);
  }

  ProcessId on_rising_edge(Signal clk, std::string name, const ProcessBody& body);
  ProcessId combinational(std::string name, const ProcessBody& body);
  ProcessId host_process(Signal clk, std::string name, HostBody body,
                         std::vector<Signal> writes = {}, std::vector<Object> handlers = {});

  /// sink << source for interface bundles/ports and scalar nodes.
  void connect(const Object& sink, const Object& source);
  void connect(Signal sink, Signal source);

  /// Installs a clock source (simulation) on `node`.
  void clock_source(Signal node, unsigned period = 2);

  void end();
  bool ended() const { return ended_; }

 private:
  friend class Entity;
  ProcessId new_process(ProcessKind kind, std::string name);
  Session* session_;
  EntityId entity_;
  bool ended_ = false;
  bool active_ = true;
};

/// Stamps names on everything created in `entity`'s scope: requested names
/// first, collisions suffixed _1, _2, ..., anonymous objects gen_<n>.
void assign_names(Design& design, EntityId entity);

}  // namespace hdlkit
