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

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "hdlkit/classes.hpp"
#include "hdlkit/session.hpp"
#include "hdlkit/vhdl/converters.hpp"

namespace hdlkit::vhdl {

/// The fixed block layout of an emitted file. Every converter may inject
/// text into any block; assembly order is the enum order.
enum class Section : std::uint8_t {
  libraries,
  package_declaration,
  package_body,
  entity_declaration,
  architecture_declarations,
  architecture_body,
};
constexpr std::size_t block_count = 6;

struct VhdlDocument {
  std::string unit;    // entity or package name
  std::string file;    // <unit>.vhd
  std::string kind;    // "entity" or "package"
  std::string source;  // hierarchy path or class name
  std::vector<std::string> sources;  // every object sharing this file
  std::array<std::vector<std::string>, block_count> blocks;

  void add(Section b, std::string text) { blocks[static_cast<std::size_t>(b)].push_back(std::move(text)); }
  const std::vector<std::string>& block(Section b) const { return blocks[static_cast<std::size_t>(b)]; }
  std::string render() const;
};

/// Legal VHDL basic identifier: [A-Za-z][A-Za-z0-9_]*, no double or trailing
/// underscore; reserved words get the suffix _r.
std::string legalize(const std::string& name);
bool is_legal_identifier(const std::string& name);
bool is_reserved(const std::string& name);

/// VHDL type mark for a type descriptor.
std::string type_mark(const Type& t);
/// Literal of `v` usable where a value of its own type is expected.
std::string literal(const Value& v);

class Converter;

/// A declared local of the current process or subprogram (LocalVar).
struct LocalVar {
  std::string name;
  std::string type;
  std::string init;
};

/// Lowering context of one scope: process, function, procedure, or the
/// concurrent part of an architecture.
class VisitorContext {
 public:
  enum class ScopeKind : std::uint8_t { architecture, process, function, procedure };

  VisitorContext(Converter& conv, ScopeKind kind, EntityId entity)
      : conv_(&conv), kind_(kind), entity_(entity) {}

  Converter& converter() const { return *conv_; }
  ScopeKind kind() const { return kind_; }
  EntityId entity() const { return entity_; }

  // Procedure/function scopes.
  const MemberFunction* function = nullptr;

  std::vector<LocalVar> locals;
  bool missing_template = false;

  const LocalVar* try_get_variable(const std::string& name) const;
  void add_local(LocalVar v) { locals.push_back(std::move(v)); }
  /// Queues a statement emitted right before the one being lowered.
  void add_statement_before(std::string stmt) { before_.push_back(std::move(stmt)); }
  std::vector<std::string> take_before();

  /// Call text for a specialization, or nothing when the emission registry
  /// does not hold it yet (the request is recorded for the end of the pass).
  std::optional<std::string> call_member_func(const MemberFunction& fn, const ObjRef& self,
                                              const std::vector<std::string>& args);

  // Naming within this scope.
  std::string ref_name(const Ref& r) const;
  bool ref_is_signal(const Ref& r) const;
  std::string object_name(const ObjRef& o) const;
  /// Actual used for an interface object argument on one record side.
  std::string interface_actual(const ObjRef& o, Flow side) const;
  const ClassDef* object_class(const ObjRef& o) const;

  /// Expression text; `expected` is the assignment target type when known.
  std::string expr(const Expr& e, const Type* expected = nullptr);
  /// Boolean condition text.
  std::string condition(const Expr& e);
  /// Lowers a statement list at the given indent level.
  std::vector<std::string> block(const Block& b, int indent);

 private:
  struct Lowered {
    std::string text;
    Type type;
    bool literal = false;
    std::uint64_t number = 0;  // payload of vector literals
  };
  Lowered lower(const Expr& e);
  std::string operand_numeric(const Lowered& l) const;
  void statement(const Stmt& st, int indent, std::vector<std::string>& out);
  std::string self_args(const ObjRef& self, const ClassDef& cls) const;

  Converter* conv_;
  ScopeKind kind_;
  EntityId entity_;
  std::vector<std::string> before_;
};

/// Per-class conversion hooks. The hook tables follow the class hierarchy:
/// the default implementation serves primitive-valued objects and the
/// protocol handlers override getValue/reassign.
class ClassConverter {
 public:
  virtual ~ClassConverter() = default;

  virtual std::string get_assignment_op(bool signal) const { return signal ? " <= " : " := "; }
  /// Target as seen by the assignment (identity for primitives).
  virtual Target reassign_type(const Target& t) const { return t; }
  /// Source value text; may declare locals and queue statements.
  virtual std::string get_value(VisitorContext& ctx, const Drive& d) const;
  /// Full assignment statement.
  virtual std::string reassign(VisitorContext& ctx, const Drive& d, const std::string& rhs) const;

  /// Package text for the class (records, constants, subprograms).
  virtual void emit_package(Converter& conv, const ClassDef& cls, VhdlDocument& doc) const;
  /// Extra text for any block of the package; default adds nothing.
  virtual void inject(const ClassDef& cls, VhdlDocument& doc) const;
};

class EntityConverter {
 public:
  virtual ~EntityConverter() = default;
  /// Fills `doc`; returns true when a specialization was missing.
  virtual bool emit(Converter& conv, EntityId entity, const std::string& unit,
                    VhdlDocument& doc) const;
  virtual void inject(EntityId entity, VhdlDocument& doc) const;
};

struct ConversionOptions {
  /// Safety bound on passes; the loop normally ends on a clean pass or a
  /// no-progress error long before this.
  unsigned max_passes = 64;
};

struct ConversionResult {
  std::string top;
  std::vector<VhdlDocument> documents;  // collection order
  unsigned passes = 0;
  std::vector<std::string> queue;       // initial queue, for diagnostics
  nlohmann::ordered_json manifest() const;
};

/// Drives the conversion: collection from the shadow register, the pass
/// loop with missing-template requeue, and document assembly.
class Converter {
 public:
  Converter(Session& session, EntityId top, ConversionOptions options = {});

  ConversionResult run();

  // Queries used by hooks and contexts.
  Session& session() const { return *session_; }
  const Design& design() const { return session_->design(); }
  bool available(const MemberFunction& fn) const { return registry_.count(&fn) != 0; }
  void request(const MemberFunction& fn);

  /// Emitted name of an entity instance (type name, suffixed per variant).
  std::string entity_unit(EntityId e);
  /// Emitted names of class-level units.
  static std::string package_name(const ClassDef& cls) { return legalize(cls.name + "_pkg"); }
  static std::string record_name(const ClassDef& cls, const std::string& suffix);

  /// Name an interface object (port, bundle, child port) has in `scope`.
  std::string interface_base(EntityId scope, ObjectId obj);
  /// Name a scalar node has in `scope`.
  std::string node_name(EntityId scope, NodeId node);

  /// Collected objects in queue order.
  struct Item {
    bool is_entity = false;
    EntityId entity = 0;
    const ClassDef* cls = nullptr;
  };
  const std::vector<Item>& collected() const { return items_; }
  std::vector<const ClassDef*> collected_classes() const;

  /// Packages a unit depends on (registration order).
  std::vector<std::string> entity_uses(EntityId e) const;
  std::vector<std::string> class_uses(const ClassDef& cls) const;

  /// Default entity rendering; returns true when a template was missing.
  bool render_entity(EntityId e, const std::string& unit, VhdlDocument& doc);

  /// Specializations of `cls` currently in the emission registry.
  std::vector<const MemberFunction*> emitted_functions(const ClassDef& cls) const;
  /// Marks the package being emitted as incomplete.
  void note_missing();

 private:
  struct ScopeNames {
    std::map<ObjectId, std::string> interfaces;
    std::map<NodeId, std::string> nodes;
    std::vector<std::pair<std::string, const ClassDef*>> interface_signals;  // intermediates
    std::vector<std::pair<std::string, Type>> scalar_signals;
    bool built = false;
  };
  void collect();
  ScopeNames& scope_names(EntityId scope);
  VhdlDocument convert_item(const Item& item, bool& missing);

  Session* session_;
  EntityId top_;
  ConversionOptions options_;
  std::vector<Item> items_;
  std::set<const MemberFunction*> registry_;
  std::vector<const MemberFunction*> pending_;
  std::map<EntityId, ScopeNames> scopes_;
  std::map<EntityId, std::string> units_;
  std::map<std::string, std::vector<std::string>> variants_;
  bool class_missing_ = false;  // type name -> rendered variants
};

/// Writes documents and manifest.json into `dir` (created if missing).
void write_output(const ConversionResult& result, const std::string& dir);

}  // namespace hdlkit::vhdl
