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
#include <span>
#include <string>
#include <vector>

#include "hdlkit/classes.hpp"
#include "hdlkit/ir.hpp"

namespace hdlkit {

class Design;
class Session;

/// Records statements into a Block. Used both for process bodies (where
/// targets are design nodes and objects) and for member functions (where
/// they are `self` members and parameters).
class BlockBuilder {
 public:
  struct Context {
    Session* session = nullptr;
    const ClassDef* self = nullptr;          // member functions
    const std::vector<Param>* params = nullptr;
    std::optional<EntityId> entity;          // process bodies
    std::function<void(ObjectId)> on_object_use;
  };

  BlockBuilder(Context ctx, Block& out);

  void drive(const Target& target, const Expr& source);
  void drive(const Target& target, const Operand& source);
  void reset(const Target& target);
  void call(const Operand& object, const std::string& member, std::vector<Operand> args = {});
  /// handler >> target
  void stream_out(const Operand& handler, const Target& target);

  class If {
   public:
    If& elif_(const Expr& cond, const std::function<void()>& then);
    void else_(const std::function<void()>& otherwise);

   private:
    friend class BlockBuilder;
    If(BlockBuilder& b, std::size_t index) : b_(&b), index_(index) {}
    BlockBuilder* b_;
    Block* parent_ = nullptr;
    std::size_t index_;
  };
  If if_(const Expr& cond, const std::function<void()>& then);

  Expr truthy(const Operand& object);

  // Member-function context.
  Expr self(std::string_view member) const;
  Target self_target(std::string_view member) const;
  Operand self_object() const;
  Expr arg(std::size_t i) const;
  Expr arg(std::size_t i, std::string_view member) const;
  Target arg_target(std::size_t i) const;
  Target arg_target(std::size_t i, std::string_view member) const;
  Operand arg_object(std::size_t i) const;

  /// Leaf of an object reference (design object, parameter, or self).
  Target leaf_target(const ObjRef& obj, const ClassDef& cls, std::string_view member) const;
  Expr leaf(const ObjRef& obj, const ClassDef& cls, std::string_view member) const;

  const Context& context() const { return ctx_; }
  Session& session() const;

  /// Operand that passes a leaf target (or object) by reference.
  Operand lvalue(const Target& target) const;
  static Operand value(const Expr& e);

 private:
  Block& current() { return *stack_.back(); }
  void capture(Block& into, const std::function<void()>& fn);
  void note_expr(const Expr& e);
  void check_writable(const Ref& ref) const;
  ArgMode ref_mode(const Ref& ref) const;
  ArgKey key_of(const Operand& op) const;
  const MemberFunction& request(const ClassDef& cls, const std::string& member,
                                std::vector<ArgKey> args) const;
  Context ctx_;
  std::vector<Block*> stack_;
};

/// Builds one member-function specialization.
class FunctionBuilder {
 public:
  FunctionBuilder(Session& session, const ClassDef& self, std::string member,
                  std::span<const ArgKey> args, std::vector<std::string> param_names);

  Param& param(std::size_t i) { return fn_.params.at(i); }
  BlockBuilder& body() { return body_; }
  void set_result(const Expr& e) { fn_.result = e; }
  MemberFunction finish() { return std::move(fn_); }

 private:
  MemberFunction fn_;
  BlockBuilder body_;
};

}  // namespace hdlkit
