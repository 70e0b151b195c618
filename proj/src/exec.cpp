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

#include "hdlkit/exec.hpp"

#include "hdlkit/classes.hpp"
#include "hdlkit/error.hpp"

namespace hdlkit {

void Store::write(NodeId root, Value v) {
  auto& n = design_->node(root);
  if (n.storage == Storage::variable) {
    n.current = std::move(v);
    return;
  }
  if (!n.pending) dirty_.push_back(root);
  n.pending = std::move(v);
}

Value apply_binary(BinaryOp op, const Value& a, const Value& b) {
  switch (op) {
    case BinaryOp::add: return add(a, b);
    case BinaryOp::sub: return sub(a, b);
    case BinaryOp::eq: return compare(a, b, Relation::eq);
    case BinaryOp::ne: return compare(a, b, Relation::ne);
    case BinaryOp::lt: return compare(a, b, Relation::lt);
    case BinaryOp::le: return compare(a, b, Relation::le);
    case BinaryOp::gt: return compare(a, b, Relation::gt);
    case BinaryOp::ge: return compare(a, b, Relation::ge);
    case BinaryOp::logic_and: return logical_and(a, b);
    case BinaryOp::logic_or: return logical_or(a, b);
  }
  fail(ErrorKind::state, "unknown operator");
}

std::optional<ObjectId> resolve_object(const ObjRef& o, const ExecFrame& f) {
  switch (o.kind) {
    case ObjRef::Kind::object: return o.index;
    case ObjRef::Kind::self: return f.self;
    case ObjRef::Kind::param: {
      const auto& b = f.params.at(o.index);
      if (b.kind != Binding::Kind::object) fail(ErrorKind::state, "parameter is not an object");
      return b.id;
    }
  }
  return std::nullopt;
}

namespace {

/// Where a reference lives at run time.
struct Place {
  NodeId root = 0;
  Value* cell = nullptr;
  const Value* rvalue = nullptr;
};

Place place_of(const Design& d, const Ref& r, ExecFrame& f) {
  switch (r.kind) {
    case Ref::Kind::node: return {d.root(r.index), nullptr, nullptr};
    case Ref::Kind::member:
      return {d.root(d.object(*f.self).leaves[r.index]), nullptr, nullptr};
    case Ref::Kind::param: {
      auto& b = f.params.at(r.index);
      if (r.slot >= 0) {
        if (b.kind != Binding::Kind::object) fail(ErrorKind::state, "member of non-object parameter");
        return {d.root(d.object(b.id).leaves[static_cast<std::size_t>(r.slot)]), nullptr, nullptr};
      }
      switch (b.kind) {
        case Binding::Kind::node: return {b.id, nullptr, nullptr};
        case Binding::Kind::cell: return {0, b.cell, nullptr};
        case Binding::Kind::value: return {0, nullptr, &b.value};
        default: fail(ErrorKind::state, "unbound parameter");
      }
    }
  }
  return {};
}

Value read_place(const Store& s, const Place& p) {
  if (p.cell) return *p.cell;
  if (p.rvalue) return *p.rvalue;
  return s.read(p.root);
}

void write_place(Store& s, const Place& p, Value v) {
  if (p.cell) {
    *p.cell = std::move(v);
  } else if (p.rvalue) {
    fail(ErrorKind::state, "write to a value parameter");
  } else {
    s.write(p.root, std::move(v));
  }
}

Binding bind_place(const Place& p) {
  if (p.cell) return Binding::local(p.cell);
  if (p.rvalue) return Binding::rvalue(*p.rvalue);
  return Binding::node(p.root);
}

bool is_lvalue_arg(const Operand& a) {
  return !a.is_object() && a.expr().kind() == Expr::Kind::ref && a.mode != ArgMode::value;
}

}  // namespace

NodeId resolve_ref(const Design& d, const Ref& r, const ExecFrame& f) {
  Place p = place_of(d, r, const_cast<ExecFrame&>(f));
  if (p.cell || p.rvalue) fail(ErrorKind::state, "reference is not a design node");
  return p.root;
}

// ---------------------------------------------------------------------------
// Interpreter

Value Interpreter::eval(const Expr& e, ExecFrame& f) {
  switch (e.kind()) {
    case Expr::Kind::constant: return e.value();
    case Expr::Kind::ref: return read_place(*store_, place_of(store_->design(), e.ref(), f));
    case Expr::Kind::binary:
      return apply_binary(e.op(), eval(e.operands()[0], f), eval(e.operands()[1], f));
    case Expr::Kind::negate: return logical_not(eval(e.operands()[0], f));
    case Expr::Kind::select: {
      const auto& ops = e.operands();
      for (std::size_t i = 1; i + 1 < ops.size(); i += 2) {
        if (eval(ops[i], f).truthy()) return eval(ops[i + 1], f);
      }
      return eval(ops[0], f);
    }
    case Expr::Kind::truthy:
      return call_result(*e.function(), resolve_object(e.object(), f));
  }
  fail(ErrorKind::state, "unknown expression");
}

void Interpreter::call(const MemberFunction& fn, std::optional<ObjectId> self,
                       std::vector<Binding> args) {
  ExecFrame inner{store_, self, std::move(args)};
  run(fn.body, inner);
}

Value Interpreter::call_result(const MemberFunction& fn, std::optional<ObjectId> self) {
  ExecFrame inner{store_, self, {}};
  run(fn.body, inner);
  return eval(*fn.result, inner);
}

void Interpreter::run(const Block& block, ExecFrame& f) {
  const Design& d = store_->design();
  for (const auto& st : block) {
    if (const auto* dr = std::get_if<Drive>(&st.node)) {
      Value v;
      if (dr->value_fn) {
        Value cell = Value::zero(dr->value_type);
        call(*dr->value_fn, resolve_object(dr->source.object(), f), {Binding::local(&cell)});
        v = std::move(cell);
      } else {
        v = eval(dr->source.expr(), f);
      }
      if (dr->assign_fn) {
        call(*dr->assign_fn, resolve_object(dr->target.object(), f), {Binding::rvalue(std::move(v))});
      } else {
        write_place(*store_, place_of(d, dr->target.ref(), f), std::move(v));
      }
    } else if (const auto* br = std::get_if<Branch>(&st.node)) {
      bool taken = false;
      for (const auto& [cond, body] : br->arms) {
        if (eval(cond, f).truthy()) {
          run(body, f);
          taken = true;
          break;
        }
      }
      if (!taken) run(br->otherwise, f);
    } else if (const auto* c = std::get_if<Call>(&st.node)) {
      std::vector<Binding> args;
      for (const auto& a : c->args) {
        if (a.is_object()) {
          args.push_back(Binding::object(*resolve_object(a.object(), f)));
        } else if (is_lvalue_arg(a)) {
          args.push_back(bind_place(place_of(d, a.expr().ref(), f)));
        } else {
          args.push_back(Binding::rvalue(eval(a.expr(), f)));
        }
      }
      call(*c->fn, resolve_object(c->object, f), std::move(args));
    }
  }
}

// ---------------------------------------------------------------------------
// Compiler

Compiler::ValueFn Compiler::compile(const Expr& e) {
  const Design* d = design_;
  switch (e.kind()) {
    case Expr::Kind::constant: {
      Value v = e.value();
      return [v](ExecFrame&) { return v; };
    }
    case Expr::Kind::ref: {
      const Ref r = e.ref();
      if (r.kind == Ref::Kind::node) {
        NodeId root = d->root(r.index);
        return [root](ExecFrame& f) { return f.store->read(root); };
      }
      if (r.kind == Ref::Kind::member) {
        return [d, r](ExecFrame& f) {
          return f.store->read(d->root(d->object(*f.self).leaves[r.index]));
        };
      }
      return [d, r](ExecFrame& f) { return read_place(*f.store, place_of(*d, r, f)); };
    }
    case Expr::Kind::binary: {
      auto a = compile(e.operands()[0]);
      auto b = compile(e.operands()[1]);
      BinaryOp op = e.op();
      return [a, b, op](ExecFrame& f) { return apply_binary(op, a(f), b(f)); };
    }
    case Expr::Kind::negate: {
      auto a = compile(e.operands()[0]);
      return [a](ExecFrame& f) { return logical_not(a(f)); };
    }
    case Expr::Kind::select: {
      auto fallback = compile(e.operands()[0]);
      std::vector<std::pair<ValueFn, ValueFn>> arms;
      for (std::size_t i = 1; i + 1 < e.operands().size(); i += 2) {
        arms.emplace_back(compile(e.operands()[i]), compile(e.operands()[i + 1]));
      }
      return [fallback, arms](ExecFrame& f) {
        for (const auto& [c, v] : arms) {
          if (c(f).truthy()) return v(f);
        }
        return fallback(f);
      };
    }
    case Expr::Kind::truthy: {
      const MemberFunction* fn = e.function();
      ObjRef obj = e.object();
      return [this, fn, obj](ExecFrame& f) {
        return invoke_result(*fn, f, resolve_object(obj, f));
      };
    }
  }
  fail(ErrorKind::state, "unknown expression");
}

Compiler::Fn Compiler::compile(const Block& block) {
  const Design* d = design_;
  std::vector<Fn> steps;
  for (const auto& st : block) {
    if (const auto* dr = std::get_if<Drive>(&st.node)) {
      std::function<Value(ExecFrame&)> source;
      if (dr->value_fn) {
        const MemberFunction* vf = dr->value_fn;
        ObjRef obj = dr->source.object();
        Type vt = dr->value_type;
        source = [this, vf, obj, vt](ExecFrame& f) {
          Value cell = Value::zero(vt);
          invoke(*vf, f, resolve_object(obj, f), {Binding::local(&cell)});
          return cell;
        };
      } else {
        source = compile(dr->source.expr());
      }
      if (dr->assign_fn) {
        const MemberFunction* af = dr->assign_fn;
        ObjRef obj = dr->target.object();
        steps.push_back([this, af, obj, source](ExecFrame& f) {
          invoke(*af, f, resolve_object(obj, f), {Binding::rvalue(source(f))});
        });
      } else if (dr->target.ref().kind == Ref::Kind::node) {
        NodeId root = d->root(dr->target.ref().index);
        steps.push_back([root, source](ExecFrame& f) { f.store->write(root, source(f)); });
      } else {
        Ref r = dr->target.ref();
        steps.push_back([d, r, source](ExecFrame& f) {
          Value v = source(f);
          write_place(*f.store, place_of(*d, r, f), std::move(v));
        });
      }
    } else if (const auto* br = std::get_if<Branch>(&st.node)) {
      std::vector<std::pair<ValueFn, Fn>> arms;
      for (const auto& [cond, body] : br->arms) arms.emplace_back(compile(cond), compile(body));
      Fn otherwise = br->otherwise.empty() ? Fn{} : compile(br->otherwise);
      steps.push_back([arms, otherwise](ExecFrame& f) {
        for (const auto& [c, body] : arms) {
          if (c(f).truthy()) {
            body(f);
            return;
          }
        }
        if (otherwise) otherwise(f);
      });
    } else if (const auto* c = std::get_if<Call>(&st.node)) {
      using ArgFn = std::function<Binding(ExecFrame&)>;
      std::vector<ArgFn> args;
      for (const auto& a : c->args) {
        if (a.is_object()) {
          ObjRef o = a.object();
          args.push_back([o](ExecFrame& f) { return Binding::object(*resolve_object(o, f)); });
        } else if (is_lvalue_arg(a)) {
          Ref r = a.expr().ref();
          args.push_back([d, r](ExecFrame& f) { return bind_place(place_of(*d, r, f)); });
        } else {
          auto v = compile(a.expr());
          args.push_back([v](ExecFrame& f) { return Binding::rvalue(v(f)); });
        }
      }
      const MemberFunction* fn = c->fn;
      ObjRef obj = c->object;
      steps.push_back([this, fn, obj, args](ExecFrame& f) {
        std::vector<Binding> bound;
        bound.reserve(args.size());
        for (const auto& a : args) bound.push_back(a(f));
        invoke(*fn, f, resolve_object(obj, f), std::move(bound));
      });
    }
  }
  if (steps.size() == 1) return steps.front();
  return [steps = std::move(steps)](ExecFrame& f) {
    for (const auto& s : steps) s(f);
  };
}

const Compiler::Compiled& Compiler::function(const MemberFunction& fn) {
  auto it = functions_.find(&fn);
  if (it != functions_.end()) return *it->second;
  auto c = std::make_unique<Compiled>();
  auto* raw = c.get();
  functions_.emplace(&fn, std::move(c));
  raw->body = compile(fn.body);
  if (fn.result) raw->result = compile(*fn.result);
  return *raw;
}

void Compiler::invoke(const MemberFunction& fn, ExecFrame& caller, std::optional<ObjectId> self,
                      std::vector<Binding> args) {
  const Compiled& c = function(fn);
  ExecFrame inner{caller.store, self, std::move(args)};
  c.body(inner);
}

Value Compiler::invoke_result(const MemberFunction& fn, ExecFrame& caller,
                              std::optional<ObjectId> self) {
  const Compiled& c = function(fn);
  ExecFrame inner{caller.store, self, {}};
  c.body(inner);
  return c.result(inner);
}

}  // namespace hdlkit
