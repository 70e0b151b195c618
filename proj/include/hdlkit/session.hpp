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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hdlkit/classes.hpp"
#include "hdlkit/design.hpp"

namespace hdlkit {

class Architecture;
class Entity;

/// Owns everything created while elaborating one design: the design graph,
/// concrete classes, member specializations, and the entity objects.
class Session {
 public:
  Session();
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  Design& design() { return design_; }
  const Design& design() const { return design_; }

  const ClassDef& monomorphize(const ClassTemplate& tmpl, std::vector<Type> args);
  /// Concrete classes in creation order.
  const std::vector<const ClassDef*>& classes() const { return class_order_; }
  const ClassDef* find_class(const std::string& name) const;

  const MemberFunction& specialize(const ClassDef& cls, const std::string& member,
                                   std::vector<ArgKey> args);
  const SpecializationCache& specializations() const { return specs_; }

  /// Constructs a top-level entity; its constructor usually elaborates it.
  template <class T, class... A>
  T& make_top(std::string name, A&&... args) {
    return create<T>(std::move(name), std::forward<A>(args)...);
  }

  /// Constructs an entity in the current architecture (or at top level).
  template <class T, class... A>
  T& create(std::string name, A&&... args) {
    auto owned = std::make_unique<T>(*this, std::move(name), std::forward<A>(args)...);
    T& ref = *owned;
    entities_.push_back(std::move(owned));
    return ref;
  }

  Entity& entity(EntityId id) const;
  std::optional<EntityId> top() const;

  std::optional<EntityId> current_entity() const;
  Architecture* current_architecture() const;

  /// Validates the hierarchy under `top` (architectures ended, single
  /// drivers, combinational captures) and freezes the graph. Idempotent.
  void freeze(EntityId top);
  bool frozen() const { return frozen_; }
  void require_mutable(const std::string& what) const;

  // Elaboration bookkeeping used by Entity / Architecture.
  void push_architecture(Architecture* arch);
  void pop_architecture(Architecture* arch);
  EntityId register_entity(Entity* object, std::string type_name, std::string instance_name);

 private:
  Design design_;
  std::map<std::pair<std::string, std::vector<Type>>, std::unique_ptr<ClassDef>> classes_;
  std::vector<const ClassDef*> class_order_;
  SpecializationCache specs_;
  std::vector<std::unique_ptr<Entity>> entities_;
  std::vector<Architecture*> arch_stack_;
  std::optional<EntityId> first_top_;
  bool frozen_ = false;
};

/// pull/push specialization of a bound handler (null if never created).
const MemberFunction* handler_hook(const Session& session, ObjectId handler, const char* which);

/// Nodes written by a process, including through handler copy-out and
/// by-reference call arguments. Returned as net roots, ascending.
std::vector<NodeId> process_writes(const Session& session, const ProcessBlock& proc);
/// Signal nets read by a process (member bodies expanded), ascending roots.
std::vector<NodeId> process_reads(const Session& session, const ProcessBlock& proc);

/// Single-driver check over the processes of `entities`; throws an
/// elaboration error naming both writers on conflict.
void check_single_driver(const Session& session, const std::vector<EntityId>& entities);

}  // namespace hdlkit
