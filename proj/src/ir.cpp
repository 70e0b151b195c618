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

#include "hdlkit/ir.hpp"

#include <fmt/format.h>

#include "hdlkit/classes.hpp"
#include "hdlkit/error.hpp"

namespace hdlkit {

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::eq: return "==";
    case BinaryOp::ne: return "!=";
    case BinaryOp::lt: return "<";
    case BinaryOp::le: return "<=";
    case BinaryOp::gt: return ">";
    case BinaryOp::ge: return ">=";
    case BinaryOp::logic_and: return "and";
    case BinaryOp::logic_or: return "or";
  }
  return "?";
}

Expr::Expr(std::int64_t literal) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = Value::integer(literal);
  n->type = n->value.type();
  n->literal = true;
  node_ = std::move(n);
}

Expr Expr::ref(Ref r, Type type) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::ref;
  n->ref = r;
  n->type = std::move(type);
  return Expr(std::move(n));
}

Expr Expr::constant(Value v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->type = v.type();
  n->value = std::move(v);
  return Expr(std::move(n));
}

namespace {

// Stand-in value used to type-check an operation at construction: literals
// keep their payload so range errors surface immediately.
Value prototype(const Expr& e) {
  if (e.kind() == Expr::Kind::constant) return e.value();
  return Value::zero(e.type());
}

Relation relation_of(BinaryOp op) {
  switch (op) {
    case BinaryOp::eq: return Relation::eq;
    case BinaryOp::ne: return Relation::ne;
    case BinaryOp::lt: return Relation::lt;
    case BinaryOp::le: return Relation::le;
    case BinaryOp::gt: return Relation::gt;
    default: return Relation::ge;
  }
}

}  // namespace

Expr Expr::binary(BinaryOp op, const Expr& a, const Expr& b) {
  Expr lhs = a, rhs = b;
  // Integer literals adopt the width/kind of the other operand.
  if (lhs.is_literal() && !rhs.is_literal() && rhs.type().kind() != hdlkit::Kind::integer) {
    if (rhs.type().is_vector() || rhs.type().is_logic()) lhs = lhs.coerce(rhs.type());
  } else if (rhs.is_literal() && !lhs.is_literal() &&
             lhs.type().kind() != hdlkit::Kind::integer) {
    if (lhs.type().is_vector() || lhs.type().is_logic()) rhs = rhs.coerce(lhs.type());
  }
  Value pa = prototype(lhs), pb = prototype(rhs);
  Value result;
  switch (op) {
    case BinaryOp::add: result = add(pa, pb); break;
    case BinaryOp::sub: result = sub(pa, pb); break;
    case BinaryOp::logic_and: result = logical_and(pa, pb); break;
    case BinaryOp::logic_or: result = logical_or(pa, pb); break;
    default: result = compare(pa, pb, relation_of(op)); break;
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::binary;
  n->op = op;
  n->type = result.type();
  n->literal = lhs.is_literal() && rhs.is_literal();
  n->operands = {lhs, rhs};
  return Expr(std::move(n));
}

Expr Expr::negate(const Expr& e) {
  auto t = logical_not(prototype(e)).type();
  auto n = std::make_shared<Node>();
  n->kind = Kind::negate;
  n->type = t;
  n->operands = {e};
  return Expr(std::move(n));
}

Expr Expr::select(const Expr& fallback, std::vector<std::pair<Expr, Expr>> cases) {
  // Branch type: the first non-literal branch, else the default's type.
  std::optional<Type> branch_type;
  if (!fallback.is_literal()) branch_type = fallback.type();
  for (const auto& [c, v] : cases) {
    if (!branch_type && !v.is_literal()) branch_type = v.type();
  }
  Type t = branch_type.value_or(fallback.type());
  auto n = std::make_shared<Node>();
  n->kind = Kind::select;
  n->type = t;
  n->operands.push_back(fallback.coerce(t));
  for (auto& [c, v] : cases) {
    if (!c.type().is_logic() && c.type().kind() != hdlkit::Kind::boolean) {
      fail(ErrorKind::type, "v_case condition must be logic or boolean, found " +
                                c.type().to_string());
    }
    n->operands.push_back(c);
    n->operands.push_back(v.coerce(t));
  }
  return Expr(std::move(n));
}

Expr Expr::truthy(ObjRef obj, const ClassDef* cls, const MemberFunction* fn) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::truthy;
  n->type = Type::boolean();
  n->object = obj;
  n->cls = cls;
  n->fn = fn;
  return Expr(std::move(n));
}

Expr Expr::coerce(const Type& target) const {
  if (type() == target) return *this;
  if (is_literal() && kind() == Kind::constant) {
    Expr e = constant(assign_convert(target, value()));
    return e;
  }
  fail(ErrorKind::type, fmt::format("expected {}, found {}", target.to_string(),
                                    type().to_string()));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::sub, a, b); }
Expr operator==(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::eq, a, b); }
Expr operator!=(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::ne, a, b); }
Expr operator<(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::lt, a, b); }
Expr operator<=(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::le, a, b); }
Expr operator>(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::gt, a, b); }
Expr operator>=(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::ge, a, b); }
Expr operator&&(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::logic_and, a, b); }
Expr operator||(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::logic_or, a, b); }
Expr operator!(const Expr& a) { return Expr::negate(a); }

Expr v_switch(const Expr& fallback, std::vector<SwitchArm> cases) {
  std::vector<std::pair<Expr, Expr>> arms;
  arms.reserve(cases.size());
  for (auto& c : cases) arms.emplace_back(std::move(c.condition), std::move(c.value));
  return Expr::select(fallback, std::move(arms));
}

std::string ArgKey::to_string() const {
  std::string mode_s = mode == ArgMode::signal ? "signal " : mode == ArgMode::variable ? "variable " : "";
  if (cls) return mode_s + cls->name;
  return mode_s + type.to_string();
}

std::string MemberFunction::emitted_name() const {
  if (ordinal == 0) return member;
  return fmt::format("{}_{}", member, ordinal);
}

std::string MemberFunction::signature() const {
  std::string out = (owner ? owner->name : std::string("?")) + "." + member + "(";
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i) out += ", ";
    out += key[i].to_string();
  }
  return out + ")";
}

void for_each_expr(const Expr& e, const std::function<void(const Expr&)>& fn) {
  fn(e);
  for (const auto& o : e.operands()) for_each_expr(o, fn);
}

void for_each_stmt(const Block& block, const std::function<void(const Stmt&)>& fn) {
  for (const auto& s : block) {
    fn(s);
    if (const auto* br = std::get_if<Branch>(&s.node)) {
      for (const auto& [c, b] : br->arms) for_each_stmt(b, fn);
      for_each_stmt(br->otherwise, fn);
    }
  }
}

}  // namespace hdlkit
