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

#include "hdlkit/session.hpp"

#include <fmt/format.h>

#include <map>
#include <set>

#include "hdlkit/entity.hpp"
#include "hdlkit/error.hpp"

namespace hdlkit {

Session::Session() = default;
Session::~Session() = default;

const ClassDef& Session::monomorphize(const ClassTemplate& tmpl, std::vector<Type> args) {
  if (args.size() != tmpl.arity) {
    fail(ErrorKind::template_, fmt::format("{} expects {} type argument(s), got {}",
                                           tmpl.base_name, tmpl.arity, args.size()));
  }
  auto key = std::make_pair(tmpl.base_name, args);
  if (auto it = classes_.find(key); it != classes_.end()) return *it->second;
  auto cls = std::make_unique<ClassDef>(tmpl.build(*this, args));
  cls->base_name = tmpl.base_name;
  cls->type_args = args;
  if (cls->name.empty()) {
    cls->name = tmpl.base_name;
    for (const auto& t : args) cls->name += t.mangle();
  }
  if (find_class(cls->name)) {
    fail(ErrorKind::template_, "two specializations share the emitted name " + cls->name);
  }
  const ClassDef* raw = cls.get();
  classes_.emplace(std::move(key), std::move(cls));
  class_order_.push_back(raw);
  design_.register_class(raw);
  return *raw;
}

const ClassDef* Session::find_class(const std::string& name) const {
  for (const auto* c : class_order_) {
    if (c->name == name) return c;
  }
  return nullptr;
}

const MemberFunction& Session::specialize(const ClassDef& cls, const std::string& member,
                                          std::vector<ArgKey> args) {
  return specs_.get_or_create(*this, MemberKey{&cls, member, std::move(args)});
}

Entity& Session::entity(EntityId id) const {
  Entity* e = design_.entity(id).object;
  if (!e) fail(ErrorKind::state, fmt::format("entity {} has no object", id));
  return *e;
}

std::optional<EntityId> Session::top() const { return first_top_; }

std::optional<EntityId> Session::current_entity() const {
  if (arch_stack_.empty()) return std::nullopt;
  return arch_stack_.back()->entity();
}

Architecture* Session::current_architecture() const {
  return arch_stack_.empty() ? nullptr : arch_stack_.back();
}

void Session::require_mutable(const std::string& what) const {
  if (frozen_) fail(ErrorKind::state, what + " after the design was frozen");
}

void Session::push_architecture(Architecture* arch) { arch_stack_.push_back(arch); }

void Session::pop_architecture(Architecture* arch) {
  if (!arch_stack_.empty() && arch_stack_.back() == arch) arch_stack_.pop_back();
}

EntityId Session::register_entity(Entity* object, std::string type_name,
                                   std::string instance_name) {
  require_mutable("entity construction");
  auto parent = current_entity();
  auto& rec = design_.add_entity();
  rec.object = object;
  rec.type_name = std::move(type_name);
  rec.requested_name = instance_name;
  rec.hdl_name = instance_name;
  if (parent) {
    rec.parent = parent;
    rec.path = design_.entity(*parent).path + "/" + instance_name;
    design_.entity(*parent).children.push_back(rec.id);
  } else {
    rec.path = instance_name;
    if (!first_top_) first_top_ = rec.id;
  }
  return rec.id;
}

void Session::freeze(EntityId top) {
  if (frozen_) return;
  auto entities = design_.hierarchy(top);
  for (auto e : entities) {
    const auto& rec = design_.entity(e);
    if (!rec.elaborated) {
      fail(ErrorKind::elaboration,
           "entity " + rec.path + ": architecture was not finished with end_architecture");
    }
  }
  check_single_driver(*this, entities);
  for (auto e : entities) {
    for (auto pid : design_.entity(e).processes) {
      auto& p = design_.process(pid);
      if (p.kind != ProcessKind::combinational) continue;
      p.captured = process_reads(*this, p);
      if (p.captured.empty()) {
        fail(ErrorKind::elaboration,
             "combinational block " + design_.process_path(pid) + " captures no signals");
      }
    }
  }
  frozen_ = true;
}

// ---------------------------------------------------------------------------
// Access analysis

namespace {

struct Bind {
  enum class Kind { none, object, node } kind = Kind::none;
  std::uint32_t id = 0;
};

struct Env {
  std::optional<ObjectId> self;
  std::vector<Bind> params;
};

struct Access {
  std::set<NodeId> reads;
  std::set<NodeId> writes;
};

class Analyzer {
 public:
  Analyzer(const Session& s) : s_(s), d_(s.design()) {}

  std::optional<NodeId> resolve(const Ref& r, const Env& env) const {
    switch (r.kind) {
      case Ref::Kind::node: return r.index;
      case Ref::Kind::member:
        if (!env.self) return std::nullopt;
        return d_.object(*env.self).leaves.at(r.index);
      case Ref::Kind::param: {
        if (r.index >= env.params.size()) return std::nullopt;
        const auto& b = env.params[r.index];
        if (r.slot >= 0 && b.kind == Bind::Kind::object) {
          return d_.object(b.id).leaves.at(static_cast<std::size_t>(r.slot));
        }
        if (r.slot < 0 && b.kind == Bind::Kind::node) return b.id;
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  std::optional<ObjectId> resolve(const ObjRef& o, const Env& env) const {
    switch (o.kind) {
      case ObjRef::Kind::object: return o.index;
      case ObjRef::Kind::self: return env.self;
      case ObjRef::Kind::param:
        if (o.index < env.params.size() && env.params[o.index].kind == Bind::Kind::object) {
          return env.params[o.index].id;
        }
        return std::nullopt;
    }
    return std::nullopt;
  }

  void expr(const Expr& e, const Env& env, Access& acc) const {
    for_each_expr(e, [&](const Expr& x) {
      if (x.kind() == Expr::Kind::ref) {
        if (auto n = resolve(x.ref(), env)) acc.reads.insert(*n);
      } else if (x.kind() == Expr::Kind::truthy) {
        Env inner;
        inner.self = resolve(x.object(), env);
        function(*x.function(), inner, acc);
      }
    });
  }

  void function(const MemberFunction& fn, const Env& env, Access& acc) const {
    block(fn.body, env, acc);
    if (fn.result) expr(*fn.result, env, acc);
  }

  void block(const Block& b, const Env& env, Access& acc) const {
    for (const auto& st : b) {
      if (const auto* d = std::get_if<Drive>(&st.node)) {
        if (d->value_fn) {
          Env inner;
          inner.self = resolve(d->source.object(), env);
          inner.params.push_back({});
          function(*d->value_fn, inner, acc);
        } else {
          expr(d->source.expr(), env, acc);
        }
        if (d->assign_fn) {
          Env inner;
          inner.self = resolve(d->target.object(), env);
          inner.params.push_back({});
          function(*d->assign_fn, inner, acc);
        } else if (!d->target.is_object()) {
          if (auto n = resolve(d->target.ref(), env)) acc.writes.insert(*n);
        }
      } else if (const auto* br = std::get_if<Branch>(&st.node)) {
        for (const auto& [c, body] : br->arms) {
          expr(c, env, acc);
          block(body, env, acc);
        }
        block(br->otherwise, env, acc);
      } else if (const auto* c = std::get_if<Call>(&st.node)) {
        Env inner;
        inner.self = resolve(c->object, env);
        for (std::size_t i = 0; i < c->args.size(); ++i) {
          const auto& a = c->args[i];
          Bind bind;
          if (a.is_object()) {
            if (auto o = resolve(a.object(), env)) bind = {Bind::Kind::object, *o};
          } else if (a.expr().kind() == Expr::Kind::ref && a.mode != ArgMode::value) {
            if (auto n = resolve(a.expr().ref(), env)) bind = {Bind::Kind::node, *n};
          } else {
            expr(a.expr(), env, acc);
          }
          inner.params.push_back(bind);
        }
        function(*c->fn, inner, acc);
      }
    }
  }

  Access process(const ProcessBlock& p) const {
    Access acc;
    if (p.kind != ProcessKind::host) block(p.body, Env{}, acc);
    for (auto n : p.host_writes) acc.writes.insert(n);
    for (auto h : p.handlers) {
      const auto& inst = d_.object(h);
      if (!inst.link) continue;
      for (const char* which : {"pull", "push"}) {
        if (const auto* fn = handler_hook(s_, h, which)) {
          Env env;
          env.self = h;
          env.params.push_back({Bind::Kind::object, *inst.link});
          function(*fn, env, acc);
        }
      }
    }
    return acc;
  }

 private:
  const Session& s_;
  const Design& d_;
};

std::vector<NodeId> roots(const Design& d, const std::set<NodeId>& nodes, bool signals_only) {
  std::set<NodeId> out;
  for (auto n : nodes) {
    NodeId r = d.root(n);
    if (signals_only && d.node(r).storage != Storage::signal) continue;
    out.insert(r);
  }
  return {out.begin(), out.end()};
}

}  // namespace

const MemberFunction* handler_hook(const Session& session, ObjectId handler, const char* which) {
  const auto& inst = session.design().object(handler);
  if (!inst.link) return nullptr;
  const ClassDef* link_cls = session.design().object(*inst.link).cls;
  return session.specializations().find(
      MemberKey{inst.cls, which, {ArgKey{Type(), link_cls, ArgMode::signal}}});
}

std::vector<NodeId> process_writes(const Session& session, const ProcessBlock& proc) {
  return roots(session.design(), Analyzer(session).process(proc).writes, false);
}

std::vector<NodeId> process_reads(const Session& session, const ProcessBlock& proc) {
  return roots(session.design(), Analyzer(session).process(proc).reads, true);
}

void check_single_driver(const Session& session, const std::vector<EntityId>& entities) {
  const Design& d = session.design();
  std::map<NodeId, ProcessId> writer;
  for (auto e : entities) {
    for (auto pid : d.entity(e).processes) {
      for (auto n : process_writes(session, d.process(pid))) {
        if (d.node(n).storage != Storage::signal) continue;
        auto [it, fresh] = writer.emplace(n, pid);
        if (!fresh && it->second != pid) {
          fail(ErrorKind::elaboration,
               fmt::format("signal {} has more than one driver: {} and {}", d.node_path(n),
                           d.process_path(it->second), d.process_path(pid)));
        }
      }
    }
  }
}

}  // namespace hdlkit
