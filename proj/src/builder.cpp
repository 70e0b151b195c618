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

#include "hdlkit/builder.hpp"

#include <fmt/format.h>

#include "hdlkit/error.hpp"
#include "hdlkit/session.hpp"

namespace hdlkit {

namespace {

ArgMode mode_of(Storage s) {
  switch (s) {
    case Storage::signal: return ArgMode::signal;
    case Storage::variable: return ArgMode::variable;
    case Storage::constant: return ArgMode::value;
  }
  return ArgMode::value;
}

}  // namespace

BlockBuilder::BlockBuilder(Context ctx, Block& out) : ctx_(std::move(ctx)) {
  stack_.push_back(&out);
}

Session& BlockBuilder::session() const { return *ctx_.session; }

Operand BlockBuilder::value(const Expr& e) {
  Operand op;
  op.v = e;
  op.mode = ArgMode::value;
  op.type = e.type();
  return op;
}

ArgMode BlockBuilder::ref_mode(const Ref& r) const {
  switch (r.kind) {
    case Ref::Kind::node: return mode_of(session().design().node(r.index).storage);
    case Ref::Kind::member: {
      auto st = ctx_.self->member(static_cast<int>(r.index)).storage;
      return st == MemberStorage::signal ? ArgMode::signal : ArgMode::variable;
    }
    case Ref::Kind::param: return ctx_.params->at(r.index).key.mode;
  }
  return ArgMode::value;
}

void BlockBuilder::check_writable(const Ref& r) const {
  const Design& d = session().design();
  if (r.kind == Ref::Kind::param) {
    const auto& p = ctx_.params->at(r.index);
    if (p.dir == ParamDir::in && p.key.mode == ArgMode::value) {
      fail(ErrorKind::storage, fmt::format("parameter '{}' of {} is read-only", p.name,
                                           ctx_.self ? ctx_.self->name : std::string("?")));
    }
    return;
  }
  if (r.kind != Ref::Kind::node) return;
  const auto& n = d.node(r.index);
  if (n.storage == Storage::constant) {
    fail(ErrorKind::storage, "cannot drive constant " + d.node_path(n.id));
  }
  if (!ctx_.entity) return;
  if (n.owner != *ctx_.entity) {
    fail(ErrorKind::storage, fmt::format("{} belongs to entity {} and cannot be driven from {}",
                                         d.node_path(n.id), d.entity(n.owner).path,
                                         d.entity(*ctx_.entity).path));
  }
  if (n.port && n.port->direction == PortDirection::in) {
    fail(ErrorKind::storage, "in-port " + d.node_path(n.id) + " written from inside its own entity");
  }
  if (n.object) {
    const auto& o = d.object(*n.object);
    if (o.port) {
      Flow writable = o.port->direction == PortDirection::out ? Flow::m2s : Flow::s2m;
      if (o.cls->member(n.slot).flow != writable) {
        fail(ErrorKind::storage,
             "in-direction member " + d.node_path(n.id) + " written from inside its own entity");
      }
    }
  }
}

void BlockBuilder::note_expr(const Expr& e) {
  if (!ctx_.on_object_use) return;
  const Design& d = session().design();
  for_each_expr(e, [&](const Expr& x) {
    if (x.kind() == Expr::Kind::truthy && x.object().kind == ObjRef::Kind::object) {
      ctx_.on_object_use(x.object().index);
    } else if (x.kind() == Expr::Kind::ref && x.ref().kind == Ref::Kind::node) {
      const auto& n = d.node(x.ref().index);
      if (n.object && d.object(*n.object).cls->kind == ClassKind::handler) {
        ctx_.on_object_use(*n.object);
      }
    }
  });
}

ArgKey BlockBuilder::key_of(const Operand& op) const {
  ArgKey k;
  if (op.is_object()) {
    k.cls = op.cls;
    k.mode = op.mode;
    return k;
  }
  k.type = op.expr().type();
  k.mode = op.expr().kind() == Expr::Kind::ref ? op.mode : ArgMode::value;
  return k;
}

const MemberFunction& BlockBuilder::request(const ClassDef& cls, const std::string& member,
                                            std::vector<ArgKey> args) const {
  return session().specialize(cls, member, std::move(args));
}

Operand BlockBuilder::lvalue(const Target& t) const {
  Operand op;
  if (t.is_object()) {
    op.v = t.object();
    op.cls = t.cls;
    switch (t.object().kind) {
      case ObjRef::Kind::object:
        op.mode = mode_of(session().design().object(t.object().index).storage);
        break;
      case ObjRef::Kind::param: op.mode = ctx_.params->at(t.object().index).key.mode; break;
      case ObjRef::Kind::self: op.mode = ArgMode::variable; break;
    }
    return op;
  }
  op.v = Expr::ref(t.ref(), t.type);
  op.mode = ref_mode(t.ref());
  op.type = t.type;
  return op;
}

void BlockBuilder::drive(const Target& target, const Expr& source) {
  if (target.is_object()) {
    const ClassDef& cls = *target.cls;
    if (target.object().kind == ObjRef::Kind::object && ctx_.on_object_use) {
      ctx_.on_object_use(target.object().index);
    }
    if (cls.kind == ClassKind::data) {
      if (!cls.assign_hook) fail(ErrorKind::type, "class " + cls.name + " has no assignment");
      Expr src = source;
      if (src.is_literal() && cls.data_type) src = src.coerce(*cls.data_type);
      cls.assign_hook(*this, target.object(), cls, src);
      return;
    }
    if (cls.assign_fn.empty()) {
      fail(ErrorKind::type, "class " + cls.name + " does not accept assignments");
    }
    Expr src = source;
    if (src.is_literal() && cls.data_type) src = src.coerce(*cls.data_type);
    note_expr(src);
    Drive d;
    d.target = target;
    d.source = value(src);
    d.value_type = src.type();
    d.assign_fn = &request(cls, cls.assign_fn, {ArgKey{src.type(), nullptr, ArgMode::value}});
    current().push_back(Stmt{std::move(d)});
    return;
  }
  check_writable(target.ref());
  Expr src = source;
  if (src.type() != target.type) {
    if (!src.is_literal()) {
      fail(ErrorKind::type, fmt::format("cannot assign {} to {}", src.type().to_string(),
                                        target.type.to_string()));
    }
    src = src.coerce(target.type);
  }
  note_expr(src);
  Drive d;
  d.target = target;
  d.source = value(src);
  d.value_type = target.type;
  current().push_back(Stmt{std::move(d)});
}

void BlockBuilder::drive(const Target& target, const Operand& source) {
  if (!source.is_object()) {
    drive(target, source.expr());
    return;
  }
  const ClassDef& scls = *source.cls;
  if (scls.value_fn.empty() || !scls.data_type) {
    fail(ErrorKind::type, "cannot read a value from " + scls.name);
  }
  if (source.object().kind == ObjRef::Kind::object && ctx_.on_object_use) {
    ctx_.on_object_use(source.object().index);
  }
  const Type& dt = *scls.data_type;
  Drive d;
  d.target = target;
  d.source = source;
  d.value_type = dt;
  d.value_fn = &request(scls, scls.value_fn, {ArgKey{dt, nullptr, ArgMode::variable}});
  if (target.is_object()) {
    const ClassDef& tcls = *target.cls;
    if (tcls.kind != ClassKind::handler || tcls.assign_fn.empty()) {
      fail(ErrorKind::grammar, "assign " + scls.name + " into " + tcls.name +
                                   " through stream-out (>>) instead");
    }
    if (target.object().kind == ObjRef::Kind::object && ctx_.on_object_use) {
      ctx_.on_object_use(target.object().index);
    }
    d.assign_fn = &request(tcls, tcls.assign_fn, {ArgKey{dt, nullptr, ArgMode::value}});
  } else {
    check_writable(target.ref());
    if (target.type != dt) {
      fail(ErrorKind::type,
           fmt::format("cannot assign {} to {}", dt.to_string(), target.type.to_string()));
    }
  }
  current().push_back(Stmt{std::move(d)});
}

void BlockBuilder::reset(const Target& target) {
  if (target.is_object()) {
    const ClassDef& cls = *target.cls;
    if (!cls.reset_hook) fail(ErrorKind::type, "class " + cls.name + " is not resettable");
    cls.reset_hook(*this, target.object(), cls);
    return;
  }
  drive(target, Expr::constant(Value::zero(target.type)));
}

void BlockBuilder::call(const Operand& object, const std::string& member,
                        std::vector<Operand> args) {
  if (!object.is_object()) fail(ErrorKind::type, "member call on a non-object");
  if (object.object().kind == ObjRef::Kind::object && ctx_.on_object_use) {
    ctx_.on_object_use(object.object().index);
  }
  std::vector<ArgKey> keys;
  for (const auto& a : args) {
    keys.push_back(key_of(a));
    if (a.is_object()) {
      if (a.object().kind == ObjRef::Kind::object && ctx_.on_object_use &&
          a.cls->kind == ClassKind::handler) {
        ctx_.on_object_use(a.object().index);
      }
    } else {
      note_expr(a.expr());
    }
  }
  const MemberFunction& fn = request(*object.cls, member, keys);
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (fn.params.at(i).dir == ParamDir::in || args[i].is_object()) continue;
    const Expr& e = args[i].expr();
    if (e.kind() != Expr::Kind::ref) {
      fail(ErrorKind::type, fmt::format("argument {} of {} must be assignable", i, fn.signature()));
    }
    check_writable(e.ref());
  }
  Call c;
  c.object = object.object();
  c.cls = object.cls;
  c.member = member;
  c.args = std::move(args);
  c.fn = &fn;
  current().push_back(Stmt{std::move(c)});
}

void BlockBuilder::stream_out(const Operand& handler, const Target& target) {
  if (!handler.is_object() || handler.cls->stream_out_fn.empty()) {
    fail(ErrorKind::type, "stream-out source has no stream-out member");
  }
  call(handler, handler.cls->stream_out_fn, {lvalue(target)});
}

void BlockBuilder::capture(Block& into, const std::function<void()>& fn) {
  stack_.push_back(&into);
  try {
    fn();
  } catch (...) {
    stack_.pop_back();
    throw;
  }
  stack_.pop_back();
}

namespace {

void check_condition(const Expr& cond) {
  if (!cond.type().is_logic() && cond.type().kind() != Kind::boolean) {
    fail(ErrorKind::type, "condition must be logic or boolean, found " + cond.type().to_string());
  }
}

}  // namespace

BlockBuilder::If BlockBuilder::if_(const Expr& cond, const std::function<void()>& then) {
  check_condition(cond);
  note_expr(cond);
  Block& parent = current();
  parent.push_back(Stmt{Branch{}});
  If handle(*this, parent.size() - 1);
  handle.parent_ = &parent;
  auto& br = std::get<Branch>(parent.back().node);
  br.arms.emplace_back(cond, Block{});
  capture(br.arms.back().second, then);
  return handle;
}

BlockBuilder::If& BlockBuilder::If::elif_(const Expr& cond, const std::function<void()>& then) {
  check_condition(cond);
  b_->note_expr(cond);
  auto& br = std::get<Branch>(parent_->at(index_).node);
  br.arms.emplace_back(cond, Block{});
  b_->capture(br.arms.back().second, then);
  return *this;
}

void BlockBuilder::If::else_(const std::function<void()>& otherwise) {
  auto& br = std::get<Branch>(parent_->at(index_).node);
  b_->capture(br.otherwise, otherwise);
}

Expr BlockBuilder::truthy(const Operand& object) {
  if (!object.is_object()) fail(ErrorKind::truthiness, "truthiness of a non-object");
  const ClassDef& cls = *object.cls;
  if (cls.truthy_fn.empty()) {
    fail(ErrorKind::truthiness, "class " + cls.name + " defines no truthiness predicate");
  }
  if (object.object().kind == ObjRef::Kind::object && ctx_.on_object_use) {
    ctx_.on_object_use(object.object().index);
  }
  const MemberFunction& fn = request(cls, cls.truthy_fn, {});
  if (!fn.result) fail(ErrorKind::truthiness, fn.signature() + " returns no value");
  return Expr::truthy(object.object(), &cls, &fn);
}

Expr BlockBuilder::self(std::string_view member) const {
  int s = ctx_.self->slot(member);
  if (s < 0) fail(ErrorKind::template_, fmt::format("class {} has no member '{}'", ctx_.self->name, member));
  return Expr::ref(Ref::member(s), ctx_.self->member(s).type);
}

Target BlockBuilder::self_target(std::string_view member) const {
  int s = ctx_.self->slot(member);
  if (s < 0) fail(ErrorKind::template_, fmt::format("class {} has no member '{}'", ctx_.self->name, member));
  return Target{Ref::member(s), nullptr, ctx_.self->member(s).type};
}

Operand BlockBuilder::self_object() const {
  Operand op;
  op.v = ObjRef::self();
  op.cls = ctx_.self;
  op.mode = ArgMode::variable;
  return op;
}

Expr BlockBuilder::arg(std::size_t i) const {
  const auto& p = ctx_.params->at(i);
  if (p.key.cls) fail(ErrorKind::type, "parameter '" + p.name + "' is an object");
  return Expr::ref(Ref::param(static_cast<std::uint32_t>(i)), p.key.type);
}

Expr BlockBuilder::arg(std::size_t i, std::string_view member) const {
  return leaf(ObjRef::param(static_cast<std::uint32_t>(i)), *ctx_.params->at(i).key.cls, member);
}

Target BlockBuilder::arg_target(std::size_t i) const {
  const auto& p = ctx_.params->at(i);
  if (p.key.cls) return Target{ObjRef::param(static_cast<std::uint32_t>(i)), p.key.cls, Type()};
  return Target{Ref::param(static_cast<std::uint32_t>(i)), nullptr, p.key.type};
}

Target BlockBuilder::arg_target(std::size_t i, std::string_view member) const {
  return leaf_target(ObjRef::param(static_cast<std::uint32_t>(i)), *ctx_.params->at(i).key.cls,
                     member);
}

Operand BlockBuilder::arg_object(std::size_t i) const {
  return lvalue(arg_target(i));
}

Target BlockBuilder::leaf_target(const ObjRef& obj, const ClassDef& cls,
                                 std::string_view member) const {
  int s = cls.slot(member);
  if (s < 0) fail(ErrorKind::template_, fmt::format("class {} has no member '{}'", cls.name, member));
  Target t;
  t.type = cls.member(s).type;
  switch (obj.kind) {
    case ObjRef::Kind::object:
      t.v = Ref::node(session().design().object(obj.index).leaves.at(static_cast<std::size_t>(s)));
      break;
    case ObjRef::Kind::param: t.v = Ref::param(obj.index, s); break;
    case ObjRef::Kind::self: t.v = Ref::member(s); break;
  }
  return t;
}

Expr BlockBuilder::leaf(const ObjRef& obj, const ClassDef& cls, std::string_view member) const {
  Target t = leaf_target(obj, cls, member);
  return Expr::ref(t.ref(), t.type);
}

FunctionBuilder::FunctionBuilder(Session& session, const ClassDef& self, std::string member,
                                 std::span<const ArgKey> args, std::vector<std::string> param_names)
    : body_(BlockBuilder::Context{&session, &self, &fn_.params, std::nullopt, {}}, fn_.body) {
  if (args.size() != param_names.size()) {
    fail(ErrorKind::template_, fmt::format("{}.{} expects {} argument(s), got {}", self.name,
                                           member, param_names.size(), args.size()));
  }
  fn_.owner = &self;
  fn_.member = std::move(member);
  fn_.key.assign(args.begin(), args.end());
  for (std::size_t i = 0; i < args.size(); ++i) {
    fn_.params.push_back(Param{param_names[i], args[i], ParamDir::in, {}});
  }
}

}  // namespace hdlkit
