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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hdlkit/types.hpp"

namespace hdlkit {

using NodeId = std::uint32_t;
using ObjectId = std::uint32_t;
using ProcessId = std::uint32_t;
using EntityId = std::uint32_t;

enum class Storage : std::uint8_t { signal, variable, constant };

class ClassDef;
struct MemberFunction;

/// Leaf reference inside a statement tree. `node` refers to a design node by
/// id; `member` to a slot of the enclosing handler (`self`); `param` to a
/// function parameter, optionally narrowed to one slot of an object argument.
struct Ref {
  enum class Kind : std::uint8_t { node, member, param };
  Kind kind = Kind::node;
  std::uint32_t index = 0;
  int slot = -1;

  static Ref node(NodeId id) { return {Kind::node, id, -1}; }
  static Ref member(int slot) { return {Kind::member, static_cast<std::uint32_t>(slot), -1}; }
  static Ref param(std::uint32_t i, int slot = -1) { return {Kind::param, i, slot}; }

  friend bool operator==(const Ref&, const Ref&) = default;
};

/// Reference to a whole class instance (handler, interface bundle, data object).
struct ObjRef {
  enum class Kind : std::uint8_t { object, param, self };
  Kind kind = Kind::object;
  std::uint32_t index = 0;

  static ObjRef object(ObjectId id) { return {Kind::object, id}; }
  static ObjRef param(std::uint32_t i) { return {Kind::param, i}; }
  static ObjRef self() { return {Kind::self, 0}; }

  friend bool operator==(const ObjRef&, const ObjRef&) = default;
};

enum class BinaryOp : std::uint8_t { add, sub, eq, ne, lt, le, gt, ge, logic_and, logic_or };

std::string_view to_string(BinaryOp op);

class Expr {
 public:
  enum class Kind : std::uint8_t { ref, constant, binary, negate, select, truthy };

  Expr() : Expr(std::int64_t{0}) {}
  Expr(std::int64_t literal);  // NOLINT(google-explicit-constructor)
  Expr(int literal) : Expr(static_cast<std::int64_t>(literal)) {}  // NOLINT

  static Expr ref(Ref r, Type type);
  static Expr constant(Value v);
  static Expr binary(BinaryOp op, const Expr& a, const Expr& b);
  static Expr negate(const Expr& e);
  /// operands: default, then (condition, value) pairs.
  static Expr select(const Expr& fallback, std::vector<std::pair<Expr, Expr>> cases);
  static Expr truthy(ObjRef obj, const ClassDef* cls, const MemberFunction* fn);

  Kind kind() const { return node_->kind; }
  const Type& type() const { return node_->type; }
  bool is_literal() const { return node_->literal; }
  const Ref& ref() const { return node_->ref; }
  const Value& value() const { return node_->value; }
  BinaryOp op() const { return node_->op; }
  const std::vector<Expr>& operands() const { return node_->operands; }
  const ObjRef& object() const { return node_->object; }
  const ClassDef* object_class() const { return node_->cls; }
  const MemberFunction* function() const { return node_->fn; }

  /// Same literal re-typed to `target` (range-checked). Non-literals must
  /// already have the target type.
  Expr coerce(const Type& target) const;

 private:
  struct Node {
    Kind kind = Kind::constant;
    Type type;
    bool literal = false;
    Ref ref;
    Value value;
    BinaryOp op = BinaryOp::add;
    std::vector<Expr> operands;
    ObjRef object;
    const ClassDef* cls = nullptr;
    const MemberFunction* fn = nullptr;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator==(const Expr& a, const Expr& b);
Expr operator!=(const Expr& a, const Expr& b);
Expr operator<(const Expr& a, const Expr& b);
Expr operator<=(const Expr& a, const Expr& b);
Expr operator>(const Expr& a, const Expr& b);
Expr operator>=(const Expr& a, const Expr& b);
Expr operator&&(const Expr& a, const Expr& b);
Expr operator||(const Expr& a, const Expr& b);
Expr operator!(const Expr& a);

struct SwitchArm {
  Expr condition;
  Expr value;
};

inline SwitchArm v_case(Expr condition, Expr value) {
  return {std::move(condition), std::move(value)};
}
Expr v_switch(const Expr& fallback, std::vector<SwitchArm> cases);

enum class ArgMode : std::uint8_t { value, signal, variable };

/// Argument signature entry used to key member specializations.
struct ArgKey {
  Type type;                     // leaf/value type; unused for objects
  const ClassDef* cls = nullptr;  // non-null for object arguments
  ArgMode mode = ArgMode::value;

  friend bool operator==(const ArgKey& a, const ArgKey& b) {
    return a.cls == b.cls && a.mode == b.mode && (a.cls != nullptr || a.type == b.type);
  }
  std::string to_string() const;
};

struct Operand {
  std::variant<Expr, ObjRef> v;
  const ClassDef* cls = nullptr;  // objects only
  ArgMode mode = ArgMode::value;  // storage of the operand's cells (objects, lvalue leaves)
  Type type;                      // leaf type (expressions)

  bool is_object() const { return std::holds_alternative<ObjRef>(v); }
  const Expr& expr() const { return std::get<Expr>(v); }
  const ObjRef& object() const { return std::get<ObjRef>(v); }
};

struct Target {
  std::variant<Ref, ObjRef> v;
  const ClassDef* cls = nullptr;
  Type type;

  bool is_object() const { return std::holds_alternative<ObjRef>(v); }
  const Ref& ref() const { return std::get<Ref>(v); }
  const ObjRef& object() const { return std::get<ObjRef>(v); }
};

struct Stmt;
using Block = std::vector<Stmt>;

/// target << source. Object targets dispatch to the class's assignment member
/// (e.g. send_data); object sources to its value member (e.g. read_data).
struct Drive {
  Target target;
  Operand source;
  const MemberFunction* assign_fn = nullptr;
  const MemberFunction* value_fn = nullptr;
  Type value_type;
};

struct Branch {
  std::vector<std::pair<Expr, Block>> arms;
  Block otherwise;
};

struct Call {
  ObjRef object;
  const ClassDef* cls = nullptr;
  std::string member;
  std::vector<Operand> args;
  const MemberFunction* fn = nullptr;
};

struct Stmt {
  std::variant<Drive, Branch, Call> node;
};

enum class ParamDir : std::uint8_t { in, out, inout };

struct Param {
  std::string name;
  ArgKey key;
  ParamDir dir = ParamDir::in;
  /// Interface-typed parameters carry the record side they use ("m2s"/"s2m").
  std::string link_side;
};

/// One specialization of a class member function, keyed by argument types.
struct MemberFunction {
  const ClassDef* owner = nullptr;
  std::string member;
  std::vector<ArgKey> key;
  std::vector<Param> params;
  Block body;
  std::optional<Expr> result;
  unsigned ordinal = 0;

  /// Emitted subprogram name: the member name for the first specialization,
  /// <member>_<n> for later ones.
  std::string emitted_name() const;
  std::string signature() const;
};

// ---------------------------------------------------------------------------
// Tree walking helpers shared by the simulator, elaboration checks and the
// converter.

void for_each_expr(const Expr& e, const std::function<void(const Expr&)>& fn);
void for_each_stmt(const Block& block, const std::function<void(const Stmt&)>& fn);

}  // namespace hdlkit
