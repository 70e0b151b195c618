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

#include "hdlkit/entity.hpp"

#include <fmt/format.h>

#include <functional>
#include <set>

#include "hdlkit/error.hpp"

namespace hdlkit {

// ---------------------------------------------------------------------------
// Handles

const Type& Signal::type() const { return node().type; }
Storage Signal::storage() const { return node().storage; }
const SignalNode& Signal::node() const { return session_->design().node(id_); }

Value Signal::value() const {
  const Design& d = session_->design();
  return d.node(d.root(id_)).current;
}

std::string Signal::path() const { return session_->design().node_path(id_); }

Signal::operator Expr() const { return Expr::ref(Ref::node(id_), type()); }
Signal::operator Target() const { return Target{Ref::node(id_), nullptr, type()}; }

const ClassDef& Object::cls() const { return *instance().cls; }
const ObjectInstance& Object::instance() const { return session_->design().object(id_); }

Signal Object::member(std::string_view name) const {
  int s = cls().slot(name);
  if (s < 0) fail(ErrorKind::template_, fmt::format("class {} has no member '{}'", cls().name, name));
  return Signal(session_, instance().leaves.at(static_cast<std::size_t>(s)));
}

std::string Object::path() const { return session_->design().object_path(id_); }

namespace {

ArgMode mode_of(Storage s) {
  return s == Storage::signal ? ArgMode::signal : s == Storage::variable ? ArgMode::variable
                                                                         : ArgMode::value;
}

Value member_init(const MemberSpec& m) {
  // Members without an explicit init take the power-on value of their type.
  if (m.init.type() == m.type) return m.init;
  return Value::initial(m.type);
}

ObjectId make_object(Session& s, EntityId owner, std::string name, const ClassDef& cls,
                     Storage storage, std::optional<ProcessId> process = std::nullopt) {
  Design& d = s.design();
  auto& obj = d.add_object();
  obj.cls = &cls;
  obj.owner = owner;
  obj.requested_name = std::move(name);
  obj.storage = storage;
  obj.process = process;
  ObjectId id = obj.id;
  for (std::size_t i = 0; i < cls.members.size(); ++i) {
    const auto& m = cls.members[i];
    auto& n = d.add_node();
    n.owner = owner;
    n.type = m.type;
    n.init = member_init(m);
    n.current = n.init;
    switch (m.storage) {
      case MemberStorage::signal: n.storage = Storage::signal; break;
      case MemberStorage::variable: n.storage = Storage::variable; break;
      default: n.storage = storage; break;
    }
    n.object = id;
    n.slot = static_cast<int>(i);
    n.process = process;
    d.object(id).leaves.push_back(n.id);
    d.entity(owner).nodes.push_back(n.id);
  }
  d.entity(owner).objects.push_back(id);
  return id;
}

}  // namespace

Object::operator Target() const { return Target{ObjRef::object(id_), &cls(), Type()}; }

Object::operator Operand() const {
  Operand op;
  op.v = ObjRef::object(id_);
  op.cls = &cls();
  op.mode = mode_of(instance().storage);
  return op;
}

// ---------------------------------------------------------------------------
// Entity

Entity::Entity(Session& session, std::string type_name, std::string instance_name)
    : session_(&session),
      id_(session.register_entity(this, std::move(type_name), std::move(instance_name))) {}

const EntityRecord& Entity::record() const { return session_->design().entity(id_); }
const std::string& Entity::path() const { return record().path; }
const std::string& Entity::type_name() const { return record().type_name; }

Signal Entity::scalar_port(std::string_view name) const {
  const Design& d = session_->design();
  for (const auto& p : record().ports) {
    if (!p.is_object && d.node(p.id).requested_name == name) {
      return Signal(session_, p.id);
    }
  }
  fail(ErrorKind::elaboration, fmt::format("entity {} has no port '{}'", path(), name));
}

Object Entity::interface_port(std::string_view name) const {
  const Design& d = session_->design();
  for (const auto& p : record().ports) {
    if (p.is_object && d.object(p.id).requested_name == name) {
      return Object(session_, p.id);
    }
  }
  fail(ErrorKind::elaboration, fmt::format("entity {} has no port '{}'", path(), name));
}

Object Entity::stream_port(StreamRole role) const {
  const Design& d = session_->design();
  for (const auto& p : record().ports) {
    if (p.is_object && d.object(p.id).port->stream == role) {
      return Object(session_, p.id);
    }
  }
  fail(ErrorKind::pipeline, fmt::format("entity {} has no {} port", path(),
                                        role == StreamRole::pipeline_in ? "pipeline_in"
                                                                        : "pipeline_out"));
}

namespace {

Signal scalar(Session& s, EntityId owner, std::string name, Type type, PortDirection dir) {
  s.require_mutable("port declaration");
  Design& d = s.design();
  if (d.entity(owner).arch_started) {
    fail(ErrorKind::state, "ports of " + d.entity(owner).path + " declared after its architecture");
  }
  auto& n = d.add_node();
  n.owner = owner;
  n.type = std::move(type);
  n.init = Value::initial(n.type);
  n.current = n.init;
  n.requested_name = std::move(name);
  n.port = PortSpec{dir, PortBinding::signal_port, StreamRole::none};
  d.entity(owner).nodes.push_back(n.id);
  d.entity(owner).ports.push_back(PortRef::node(n.id));
  return Signal(&s, n.id);
}

}  // namespace

Signal Entity::port_in(std::string name, Type type) {
  return scalar(*session_, id_, std::move(name), std::move(type), PortDirection::in);
}

Signal Entity::port_out(std::string name, Type type) {
  return scalar(*session_, id_, std::move(name), std::move(type), PortDirection::out);
}

Object Entity::make_port(std::string name, const ClassDef& iface, PortDirection dir,
                         StreamRole role) {
  session_->require_mutable("port declaration");
  if (iface.kind != ClassKind::interface) {
    fail(ErrorKind::type, "port " + name + " needs an interface class, got " + iface.name);
  }
  Design& d = session_->design();
  if (record().arch_started) {
    fail(ErrorKind::state, "ports of " + path() + " declared after its architecture");
  }
  if (role != StreamRole::none) {
    for (const auto& p : record().ports) {
      if (p.is_object && d.object(p.id).port->stream == role) {
        fail(ErrorKind::pipeline,
             fmt::format("entity {} declares more than one {} port", path(),
                         role == StreamRole::pipeline_in ? "pipeline_in" : "pipeline_out"));
      }
    }
  }
  ObjectId id = make_object(*session_, id_, std::move(name), iface, Storage::signal);
  d.object(id).port = PortSpec{dir, PortBinding::signal_port, role};
  d.entity(id_).ports.push_back(PortRef::object(id));
  return Object(session_, id);
}

Object Entity::port_primary(std::string name, const ClassDef& iface) {
  return make_port(std::move(name), iface, PortDirection::out, StreamRole::none);
}
Object Entity::port_secondary(std::string name, const ClassDef& iface) {
  return make_port(std::move(name), iface, PortDirection::in, StreamRole::none);
}
Object Entity::pipeline_in(std::string name, const ClassDef& iface) {
  return make_port(std::move(name), iface, PortDirection::in, StreamRole::pipeline_in);
}
Object Entity::pipeline_out(std::string name, const ClassDef& iface) {
  return make_port(std::move(name), iface, PortDirection::out, StreamRole::pipeline_out);
}

namespace {

void link_nodes(Design& d, NodeId sink, NodeId source) {
  auto& dst = d.node(sink);
  const auto& src = d.node(source);
  if (dst.type != src.type) {
    fail(ErrorKind::type, fmt::format("cannot connect {} ({}) to {} ({})", d.node_path(sink),
                                      dst.type.to_string(), d.node_path(source),
                                      src.type.to_string()));
  }
  if (dst.structural_driver) {
    fail(ErrorKind::connection, fmt::format("{} is already driven by {}", d.node_path(sink),
                                            d.node_path(*dst.structural_driver)));
  }
  if (d.root(source) == sink) {
    fail(ErrorKind::connection, "connecting " + d.node_path(sink) + " would close a loop");
  }
  dst.structural_driver = source;
}

}  // namespace

void Entity::bind_input(Signal port, Signal source) {
  session_->require_mutable("connection");
  Design& d = session_->design();
  const auto& n = d.node(port.id());
  if (n.owner != id_ || !n.port || n.port->direction != PortDirection::in) {
    fail(ErrorKind::connection, port.path() + " is not an input port of " + path());
  }
  link_nodes(d, port.id(), source.id());
}

Architecture Entity::begin_architecture() {
  session_->require_mutable("architecture");
  auto& rec = session_->design().entity(id_);
  if (rec.arch_started) fail(ErrorKind::state, "architecture of " + rec.path + " already ran");
  rec.arch_started = true;
  return Architecture(*session_, id_);
}

void Entity::set_sim_only() { session_->design().entity(id_).sim_only = true; }

ClockedEntity::ClockedEntity(Session& session, std::string type_name, std::string instance_name,
                             Signal clk_source)
    : Entity(session, std::move(type_name), std::move(instance_name)) {
  clk = port_in("clk", Type::logic());
  session.design().entity(id()).clk = clk.id();
  if (clk_source.valid()) bind_input(clk, clk_source);
}

// ---------------------------------------------------------------------------
// Process builder

ProcessBuilder::ProcessBuilder(Session& session, ProcessId pid)
    : BlockBuilder(
          Context{&session, nullptr, nullptr, session.design().process(pid).owner,
                  [&session, pid](ObjectId obj) {
                    Design& d = session.design();
                    auto& inst = d.object(obj);
                    if (inst.cls->kind != ClassKind::handler) return;
                    if (inst.process && *inst.process != pid) {
                      fail(ErrorKind::elaboration,
                           fmt::format("handler {} is used by two processes: {} and {}",
                                       d.object_path(obj), d.process_path(*inst.process),
                                       d.process_path(pid)));
                    }
                    if (!inst.process) {
                      inst.process = pid;
                      d.process(pid).handlers.push_back(obj);
                    }
                  }},
          session.design().process(pid).body),
      session_(&session),
      pid_(pid) {}

Signal ProcessBuilder::variable(std::string name, Type type) {
  Design& d = session_->design();
  auto& p = d.process(pid_);
  auto& n = d.add_node();
  n.owner = p.owner;
  n.storage = Storage::variable;
  n.type = std::move(type);
  n.init = Value::initial(n.type);
  n.current = n.init;
  n.requested_name = std::move(name);
  n.process = pid_;
  p.locals.push_back(n.id);
  d.entity(p.owner).nodes.push_back(n.id);
  return Signal(session_, n.id);
}

Signal ProcessBuilder::variable(std::string name, Type type, std::int64_t init) {
  Signal s = variable(std::move(name), type);
  auto& n = session_->design().node(s.id());
  n.init = assign_convert(type, Value::integer(init));
  n.current = n.init;
  return s;
}

Object ProcessBuilder::data(std::string name, const ClassDef& cls) {
  Design& d = session_->design();
  ObjectId id = make_object(*session_, d.process(pid_).owner, std::move(name), cls,
                            Storage::variable, pid_);
  for (auto leaf : d.object(id).leaves) d.process(pid_).locals.push_back(leaf);
  return Object(session_, id);
}

// ---------------------------------------------------------------------------
// Pipelines

Endpoint::Endpoint(Entity& e) : session_(&e.session()), down_entity_(e.id()), up_entity_(e.id()) {}
Endpoint::Endpoint(const Object& o) : session_(&o.session()), down_object_(o.id()), up_object_(o.id()) {}

Object Endpoint::upstream() const {
  if (up_object_) return Object(session_, *up_object_);
  return session_->entity(*up_entity_).stream_port(StreamRole::pipeline_out);
}

Object Endpoint::downstream() const {
  if (down_object_) return Object(session_, *down_object_);
  return session_->entity(*down_entity_).stream_port(StreamRole::pipeline_in);
}

Pipeline::operator Endpoint() const {
  Endpoint e;
  e.session_ = &head.session();
  e.down_entity_ = head.down_entity_;
  e.down_object_ = head.down_object_;
  e.up_entity_ = tail.up_entity_;
  e.up_object_ = tail.up_object_;
  return e;
}

Pipeline operator|(const Endpoint& upstream, const Endpoint& downstream) {
  Architecture* arch = upstream.session().current_architecture();
  if (!arch) fail(ErrorKind::state, "pipe (|) used outside an architecture");
  arch->connect(downstream.downstream(), upstream.upstream());
  return Pipeline{upstream, downstream};
}

// ---------------------------------------------------------------------------
// Architecture

Architecture::Architecture(Session& session, EntityId entity)
    : session_(&session), entity_(entity) {
  session.push_architecture(this);
}

Architecture::~Architecture() {
  if (active_) session_->pop_architecture(this);
}

Signal Architecture::signal(std::string name, Type type) {
  session_->require_mutable("signal declaration");
  Design& d = session_->design();
  auto& n = d.add_node();
  n.owner = entity_;
  n.type = std::move(type);
  n.init = Value::initial(n.type);
  n.current = n.init;
  n.requested_name = std::move(name);
  d.entity(entity_).nodes.push_back(n.id);
  return Signal(session_, n.id);
}

Signal Architecture::signal(std::string name, Type type, std::int64_t init) {
  Signal s = signal(std::move(name), type);
  auto& n = session_->design().node(s.id());
  n.init = assign_convert(type, Value::integer(init));
  n.current = n.init;
  return s;
}

Signal Architecture::vector(std::string name, unsigned width, std::uint64_t init) {
  Type t = Type::vector(width);
  if (width < 64 && init > width_mask(width)) {
    fail(ErrorKind::range, fmt::format("initial value {} does not fit a {}-bit vector", init, width));
  }
  Signal s = signal(std::move(name), t);
  auto& n = session_->design().node(s.id());
  n.init = Value::vector(width, init);
  n.current = n.init;
  return s;
}

Signal Architecture::logic(std::string name) { return signal(std::move(name), Type::logic()); }

Signal Architecture::constant(std::string name, Type type, std::int64_t value) {
  Signal s = signal(std::move(name), type, value);
  session_->design().node(s.id()).storage = Storage::constant;
  return s;
}

Object Architecture::bundle(std::string name, const ClassDef& iface, bool free_type) {
  session_->require_mutable("bundle declaration");
  if (iface.kind != ClassKind::interface) {
    fail(ErrorKind::type, "bundle " + name + " needs an interface class, got " + iface.name);
  }
  ObjectId id = make_object(*session_, entity_, std::move(name), iface, Storage::signal);
  session_->design().object(id).free_type = free_type;
  return Object(session_, id);
}

Object Architecture::data(std::string name, const ClassDef& cls) {
  session_->require_mutable("object declaration");
  ObjectId id = make_object(*session_, entity_, std::move(name), cls, Storage::signal);
  return Object(session_, id);
}

namespace {

enum class Side { source, sink, either };

Side side_in(const Design& d, EntityId scope, ObjectId obj) {
  const auto& o = d.object(obj);
  if (o.port) {
    bool primary = o.port->direction == PortDirection::out;
    if (o.owner == scope) return primary ? Side::sink : Side::source;
    if (d.entity(o.owner).parent == scope) return primary ? Side::source : Side::sink;
  } else if (o.owner == scope) {
    return Side::either;
  }
  fail(ErrorKind::connection, fmt::format("{} is not visible from {}", d.object_path(obj),
                                          d.entity(scope).path));
}

}  // namespace

Object Architecture::get_handle(const Object& port, std::string name) {
  Side side = side_in(session_->design(), entity_, port.id());
  if (side == Side::either) {
    fail(ErrorKind::elaboration,
         "get_handle on local bundle " + port.path() + " needs an explicit handler role");
  }
  // Where data leaves this scope through the port we send; where it enters, we receive.
  return get_handle(port, std::move(name),
                    side == Side::sink ? HandlerRole::primary : HandlerRole::secondary);
}

Object Architecture::get_handle(const Object& port, std::string name, HandlerRole role) {
  session_->require_mutable("get_handle");
  const ClassDef& iface = port.cls();
  const auto& factory = role == HandlerRole::primary ? iface.primary_handler : iface.secondary_handler;
  if (!factory) {
    fail(ErrorKind::template_, fmt::format("interface {} registers no {} handler", iface.name,
                                           role == HandlerRole::primary ? "primary" : "secondary"));
  }
  const ClassDef& cls = factory(*session_, iface);
  ObjectId h = make_object(*session_, entity_, std::move(name), cls, Storage::variable);
  ObjectId link = port.id();
  if (cls.on_bind) link = cls.on_bind(*this, h, port.id());
  Design& d = session_->design();
  d.object(h).link = link;
  const ClassDef* link_cls = d.object(link).cls;
  for (const char* which : {"pull", "push"}) {
    if (cls.has_function(which)) {
      session_->specialize(cls, which, {ArgKey{Type(), link_cls, ArgMode::signal}});
    }
  }
  return Object(session_, h);
}

ProcessId Architecture::new_process(ProcessKind kind, std::string name) {
  session_->require_mutable("process declaration");
  if (ended_) fail(ErrorKind::state, "process added after end_architecture");
  Design& d = session_->design();
  auto& p = d.add_process();
  p.kind = kind;
  p.owner = entity_;
  p.requested_name = std::move(name);
  d.entity(entity_).processes.push_back(p.id);
  return p.id;
}

ProcessId Architecture::on_rising_edge(Signal clk, std::string name, const ProcessBody& body) {
  if (!clk.type().is_logic()) {
    fail(ErrorKind::type, "clock of process " + name + " must be logic, found " +
                              clk.type().to_string());
  }
  ProcessId pid = new_process(ProcessKind::rising_edge, std::move(name));
  session_->design().process(pid).clock = clk.id();
  ProcessBuilder pb(*session_, pid);
  body(pb);
  return pid;
}

ProcessId Architecture::combinational(std::string name, const ProcessBody& body) {
  ProcessId pid = new_process(ProcessKind::combinational, std::move(name));
  ProcessBuilder pb(*session_, pid);
  body(pb);
  return pid;
}

ProcessId Architecture::host_process(Signal clk, std::string name, HostBody body,
                                     std::vector<Signal> writes, std::vector<Object> handlers) {
  if (!clk.type().is_logic()) fail(ErrorKind::type, "clock of host process must be logic");
  ProcessId pid = new_process(ProcessKind::host, std::move(name));
  Design& d = session_->design();
  auto& p = d.process(pid);
  p.clock = clk.id();
  p.host = std::move(body);
  for (const auto& w : writes) p.host_writes.push_back(w.id());
  for (const auto& h : handlers) {
    auto& inst = d.object(h.id());
    if (inst.process && *inst.process != pid) {
      fail(ErrorKind::elaboration, "handler " + h.path() + " is used by two processes");
    }
    inst.process = pid;
    p.handlers.push_back(h.id());
  }
  d.entity(entity_).sim_only = true;
  return pid;
}

void Architecture::connect(const Object& sink, const Object& source) {
  session_->require_mutable("connection");
  Design& d = session_->design();
  if (sink.id() == source.id()) {
    fail(ErrorKind::connection, "cannot connect " + sink.path() + " to itself");
  }
  if (sink.instance().cls != source.instance().cls) {
    fail(ErrorKind::type, fmt::format("interface type mismatch: {} is {}, {} is {}", sink.path(),
                                      sink.cls().name, source.path(), source.cls().name));
  }
  if (sink.cls().kind != ClassKind::interface) {
    fail(ErrorKind::connection, "only interface bundles connect structurally: " + sink.path());
  }
  ObjectId snk = sink.id(), src = source.id();
  Side a = side_in(d, entity_, snk), b = side_in(d, entity_, src);
  if (a == Side::source && b == Side::sink) {
    std::swap(snk, src);
  } else if (a != Side::either && a == b) {
    fail(ErrorKind::connection,
         fmt::format("direction conflict connecting {} and {}: both are {}", sink.path(),
                     source.path(), a == Side::source ? "sources" : "sinks"));
  }
  const ClassDef& cls = sink.cls();
  const auto& sink_leaves = d.object(snk).leaves;
  const auto& src_leaves = d.object(src).leaves;
  for (std::size_t i = 0; i < cls.members.size(); ++i) {
    if (cls.members[i].flow == Flow::m2s) {
      link_nodes(d, sink_leaves[i], src_leaves[i]);
    } else {
      link_nodes(d, src_leaves[i], sink_leaves[i]);
    }
  }
  d.entity(entity_).connections.push_back(Connection{src, snk});
}

void Architecture::connect(Signal sink, Signal source) {
  session_->require_mutable("connection");
  if (sink.id() == source.id()) {
    fail(ErrorKind::connection, "cannot connect " + sink.path() + " to itself");
  }
  link_nodes(session_->design(), sink.id(), source.id());
}

void Architecture::clock_source(Signal node, unsigned period) {
  if (!node.type().is_logic()) fail(ErrorKind::type, "clock source must drive a logic node");
  if (period < 2 || period % 2 != 0) {
    fail(ErrorKind::range, fmt::format("clock period {} must be an even tick count", period));
  }
  auto& n = session_->design().node(node.id());
  n.init = Value::logic(Logic::zero);
  n.current = n.init;
  session_->design().entity(entity_).clock_source = ClockSource{node.id(), period};
}

void Architecture::end() {
  if (ended_) fail(ErrorKind::state, "end_architecture called twice for " +
                                         session_->design().entity(entity_).path);
  Design& d = session_->design();
  assign_names(d, entity_);
  check_single_driver(*session_, d.hierarchy(entity_));
  d.entity(entity_).elaborated = true;
  ended_ = true;
  session_->pop_architecture(this);
  active_ = false;
}

// ---------------------------------------------------------------------------
// Naming

namespace {

class Namespace {
 public:
  std::string claim(const std::string& requested, unsigned& anon) {
    if (requested.empty()) {
      std::string n;
      do {
        n = fmt::format("gen_{}", anon++);
      } while (used_.count(n));
      used_.insert(n);
      return n;
    }
    if (used_.insert(requested).second) return requested;
    for (unsigned i = 1;; ++i) {
      std::string n = fmt::format("{}_{}", requested, i);
      if (used_.insert(n).second) return n;
    }
  }
  void reserve(const std::string& n) { used_.insert(n); }

 private:
  std::set<std::string> used_;
};

void update_paths(Design& d, EntityId e) {
  auto& rec = d.entity(e);
  rec.path = rec.parent ? d.entity(*rec.parent).path + "/" + rec.hdl_name : rec.hdl_name;
  for (auto c : rec.children) update_paths(d, c);
}

}  // namespace

void assign_names(Design& d, EntityId entity) {
  auto& rec = d.entity(entity);
  Namespace ns;
  ns.reserve("clk");
  // Ports keep their declared names.
  for (const auto& p : rec.ports) {
    if (!p.is_object) {
      d.node(p.id).hdl_name = d.node(p.id).requested_name;
      ns.reserve(d.node(p.id).hdl_name);
    } else {
      auto& o = d.object(p.id);
      o.hdl_name = o.requested_name;
      ns.reserve(o.hdl_name);
    }
  }
  for (const auto& entry : d.shadow_register()) {
    switch (entry.kind) {
      case ShadowEntry::Kind::entity: {
        auto& child = d.entity(entry.id);
        if (child.parent != entity) break;
        child.hdl_name = ns.claim(child.requested_name, rec.anon_counter);
        update_paths(d, child.id);
        break;
      }
      case ShadowEntry::Kind::node: {
        auto& n = d.node(entry.id);
        if (n.owner != entity || n.object || n.port) break;
        n.hdl_name = ns.claim(n.requested_name, rec.anon_counter);
        break;
      }
      case ShadowEntry::Kind::object: {
        auto& o = d.object(entry.id);
        if (o.owner != entity || o.port) break;
        std::string req = o.requested_name;
        if (o.parent_handler && !req.empty()) {
          req = d.object(*o.parent_handler).hdl_name + "_" + req;
        }
        o.hdl_name = ns.claim(req, rec.anon_counter);
        break;
      }
      case ShadowEntry::Kind::process: {
        auto& p = d.process(entry.id);
        if (p.owner != entity) break;
        p.hdl_name = ns.claim(p.requested_name, rec.anon_counter);
        break;
      }
      case ShadowEntry::Kind::class_def: break;
    }
  }
  // Object leaves: <object>_<member>.
  for (auto oid : rec.objects) {
    auto& o = d.object(oid);
    for (std::size_t i = 0; i < o.leaves.size(); ++i) {
      d.node(o.leaves[i]).hdl_name = o.hdl_name + "_" + o.cls->members[i].name;
    }
  }
}

}  // namespace hdlkit
