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
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "hdlkit/design.hpp"
#include "hdlkit/ir.hpp"

namespace hdlkit {

/// Storage for statement execution. Reads and writes address net roots;
/// variables commit at once, signals collect a pending value.
class Store {
 public:
  explicit Store(Design& design) : design_(&design) {}

  const Value& read(NodeId root) const { return design_->node(root).current; }
  void write(NodeId root, Value v);

  /// Signal roots with a pending value, in first-write order.
  std::vector<NodeId>& dirty() { return dirty_; }
  Design& design() const { return *design_; }

 private:
  Design* design_;
  std::vector<NodeId> dirty_;
};

/// Argument binding of an executing member function.
struct Binding {
  enum class Kind : std::uint8_t { none, object, node, cell, value };
  Kind kind = Kind::none;
  std::uint32_t id = 0;  // object id or root node id
  Value* cell = nullptr;
  Value value;

  static Binding object(ObjectId id) { return {Kind::object, id, nullptr, {}}; }
  static Binding node(NodeId root) { return {Kind::node, root, nullptr, {}}; }
  static Binding local(Value* c) { return {Kind::cell, 0, c, {}}; }
  static Binding rvalue(Value v) { return {Kind::value, 0, nullptr, std::move(v)}; }
};

struct ExecFrame {
  Store* store = nullptr;
  std::optional<ObjectId> self;
  std::vector<Binding> params;
};

/// Tree-walking evaluator: the reference semantics of the statement IR.
class Interpreter {
 public:
  explicit Interpreter(Store& store) : store_(&store) {}

  void run(const Block& block, ExecFrame& frame);
  Value eval(const Expr& e, ExecFrame& frame);
  void call(const MemberFunction& fn, std::optional<ObjectId> self, std::vector<Binding> args);
  Value call_result(const MemberFunction& fn, std::optional<ObjectId> self);

 private:
  Store* store_;
};

/// Translates statement trees into nested closures with references resolved
/// ahead of time. Member bodies compile once and are shared by all callers.
class Compiler {
 public:
  using Fn = std::function<void(ExecFrame&)>;
  using ValueFn = std::function<Value(ExecFrame&)>;

  explicit Compiler(const Design& design) : design_(&design) {}

  Fn compile(const Block& block);
  ValueFn compile(const Expr& e);

  /// Runs a member function with a fresh frame.
  void invoke(const MemberFunction& fn, ExecFrame& caller, std::optional<ObjectId> self,
              std::vector<Binding> args);
  Value invoke_result(const MemberFunction& fn, ExecFrame& caller, std::optional<ObjectId> self);

 private:
  struct Compiled {
    Fn body;
    ValueFn result;
  };
  const Compiled& function(const MemberFunction& fn);

  const Design* design_;
  std::map<const MemberFunction*, std::unique_ptr<Compiled>> functions_;
};

// Shared helpers.
Value apply_binary(BinaryOp op, const Value& a, const Value& b);
NodeId resolve_ref(const Design& d, const Ref& r, const ExecFrame& f);
std::optional<ObjectId> resolve_object(const ObjRef& o, const ExecFrame& f);

}  // namespace hdlkit
