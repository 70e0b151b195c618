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
#include <span>
#include <string>
#include <vector>

#include "hdlkit/ir.hpp"
#include "hdlkit/types.hpp"

namespace hdlkit {

class Architecture;
class BlockBuilder;
class Session;

namespace vhdl {
class ClassConverter;
}

enum class ClassKind : std::uint8_t { interface, handler, data };
enum class HandlerRole : std::uint8_t { primary, secondary, handle };

/// Storage class of a class member. `inherit` members (data containers) take
/// the storage of the instance; `free_type` members stay out of the records.
enum class MemberStorage : std::uint8_t { signal, variable, free_type, inherit };

/// Direction of an interface member, defined from the primary's perspective:
/// m2s flows primary to secondary (port_out), s2m flows back (port_in).
enum class Flow : std::uint8_t { m2s, s2m };

std::string_view to_string(Flow flow);

struct MemberSpec {
  std::string name;
  Type type;
  Value init;
  MemberStorage storage = MemberStorage::inherit;
  Flow flow = Flow::m2s;
  bool view = false;   // handler members mirroring the port view (tx_*, rx_*)
  int view_slot = -1;  // slot of the mirrored member in the view interface
};

/// Builds one specialization of a member. Generators may request further
/// specializations (callees) through the session.
using MemberGenerator = std::function<MemberFunction(Session& session, const ClassDef& self,
                                                     std::span<const ArgKey> args)>;

/// A concrete (monomorphized) class: interface, handler, or data container.
class ClassDef {
 public:
  std::string base_name;
  std::string name;  // emitted name, base_name + mangled type arguments
  std::vector<Type> type_args;
  ClassKind kind = ClassKind::data;
  HandlerRole role = HandlerRole::primary;
  std::vector<MemberSpec> members;

  // Handlers: the interface they mirror into variables, and its prefix.
  const ClassDef* view = nullptr;
  std::string view_prefix;

  std::map<std::string, MemberGenerator> functions;

  // Protocol hooks bound to language operations.
  std::string assign_fn;      // handler << value
  std::string value_fn;       // value << handler
  std::string truthy_fn;      // if handler:
  std::string stream_out_fn;  // handler >> target
  std::optional<Type> data_type;

  // Data containers: inline reset/assignment used when they are targets.
  std::function<void(BlockBuilder&, const ObjRef&, const ClassDef&)> reset_hook;
  std::function<void(BlockBuilder&, const ObjRef&, const ClassDef&, const Expr&)> assign_hook;

  /// Runs when a handler of this class is bound inside an architecture. It
  /// may add free_type bundles and combinational blocks and must return the
  /// bundle the handler's view mirrors.
  std::function<ObjectId(Architecture&, ObjectId handler, ObjectId port)> on_bind;

  // Interfaces: handler classes for each side.
  std::function<const ClassDef&(Session&, const ClassDef& iface)> primary_handler;
  std::function<const ClassDef&(Session&, const ClassDef& iface)> secondary_handler;

  std::shared_ptr<const vhdl::ClassConverter> converter;
  /// Predicate consulted by the converter's template registry; specializations
  /// it rejects never materialize and stall the requeue loop.
  std::function<bool(const MemberFunction&)> hdl_supported;

  int slot(std::string_view member) const;
  const MemberSpec& member(int slot) const { return members.at(static_cast<std::size_t>(slot)); }
  bool has_function(const std::string& fn) const { return functions.count(fn) != 0; }
  std::vector<int> slots_with_flow(Flow flow) const;
};

/// Generic class: builds concrete classes from type arguments.
struct ClassTemplate {
  std::string base_name;
  std::size_t arity = 1;
  std::function<ClassDef(Session&, std::span<const Type>)> build;
};

struct MemberKey {
  const ClassDef* cls = nullptr;
  std::string member;
  std::vector<ArgKey> args;

  friend bool operator==(const MemberKey& a, const MemberKey& b) {
    return a.cls == b.cls && a.member == b.member && a.args == b.args;
  }
};

/// Session-wide cache of member specializations (the simulation side). The
/// converter keeps its own emission registry on top of this one.
class SpecializationCache {
 public:
  const MemberFunction* find(const MemberKey& key) const;
  const MemberFunction& get_or_create(Session& session, const MemberKey& key);
  std::size_t size() const { return entries_.size(); }
  std::vector<const MemberFunction*> for_class(const ClassDef* cls) const;

 private:
  struct Entry {
    MemberKey key;
    std::unique_ptr<MemberFunction> fn;
  };
  std::vector<Entry> entries_;
  std::vector<MemberKey> in_progress_;
};

/// Appends the standard pull/push pair for a handler whose view mirrors an
/// interface: copy-in of incoming members then `_onPull`; `_onPush` then
/// copy-out of outgoing members.
void install_port_view_functions(ClassDef& handler);

/// Flow direction a handler of `role` receives through its view.
Flow incoming_flow(HandlerRole role);

}  // namespace hdlkit
