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

#include "hdlkit/vhdl/converter.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>

#include <fmt/format.h>

#include "hdlkit/entity.hpp"
#include "hdlkit/error.hpp"

namespace hdlkit::vhdl {

namespace {

constexpr std::array<std::string_view, 97> reserved_words{
    "abs",      "access",   "after",     "alias",     "all",       "and",      "architecture",
    "array",    "assert",   "attribute", "begin",     "block",     "body",     "buffer",
    "bus",      "case",     "component", "configuration", "constant", "disconnect", "downto",
    "else",     "elsif",    "end",       "entity",    "exit",      "file",     "for",
    "function", "generate", "generic",   "group",     "guarded",   "if",       "impure",
    "in",       "inertial", "inout",     "is",        "label",     "library",  "linkage",
    "literal",  "loop",     "map",       "mod",       "nand",      "new",      "next",
    "nor",      "not",      "null",      "of",        "on",        "open",     "or",
    "others",   "out",      "package",   "port",      "postponed", "procedure", "process",
    "pure",     "range",    "record",    "register",  "reject",    "rem",      "report",
    "return",   "rol",      "ror",       "select",    "severity",  "signal",   "shared",
    "sla",      "sll",      "sra",       "srl",       "subtype",   "then",     "to",
    "transport", "type",    "unaffected", "units",    "until",     "use",      "variable",
    "wait",     "when",     "while",     "with",      "xnor",      "xor"};

std::string ind(int n) { return std::string(static_cast<std::size_t>(n) * 4, ' '); }

std::string lower_case(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string bits(std::uint64_t v, unsigned width) {
  std::string s;
  for (unsigned i = width; i-- > 0;) s += ((v >> i) & 1U) != 0 ? '1' : '0';
  return s;
}

std::string_view relation(BinaryOp op) {
  switch (op) {
    case BinaryOp::eq: return "=";
    case BinaryOp::ne: return "/=";
    case BinaryOp::lt: return "<";
    case BinaryOp::le: return "<=";
    case BinaryOp::gt: return ">";
    case BinaryOp::ge: return ">=";
    default: return "?";
  }
}

std::string_view direction(ParamDir d) {
  switch (d) {
    case ParamDir::in: return "in";
    case ParamDir::out: return "out";
    case ParamDir::inout: return "inout";
  }
  return "in";
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i != 0) out += sep;
    out += parts[i];
  }
  return out;
}

bool has_flow(const ClassDef& cls, Flow f) { return !cls.slots_with_flow(f).empty(); }

/// Handler and data members split into the signal record, the variable
/// record, and the excluded free_type members.
std::vector<const MemberSpec*> record_members(const ClassDef& cls, bool signal) {
  std::vector<const MemberSpec*> out;
  for (const auto& m : cls.members) {
    if (m.storage == MemberStorage::free_type) continue;
    bool is_signal = m.storage == MemberStorage::signal;
    if (is_signal == signal) out.push_back(&m);
  }
  return out;
}

std::string record_decl(const std::string& name, const std::vector<const MemberSpec*>& members) {
  std::string s = fmt::format("{}type {} is record\n", ind(1), name);
  for (const auto* m : members) {
    s += fmt::format("{}{} : {};\n", ind(2), legalize(m->name), type_mark(m->type));
  }
  s += fmt::format("{}end record {};", ind(1), name);
  return s;
}

std::string null_decl(const std::string& name, const std::vector<const MemberSpec*>& members) {
  std::vector<std::string> parts;
  for (const auto* m : members) {
    parts.push_back(fmt::format("{} => {}", legalize(m->name), literal(Value::zero(m->type))));
  }
  return fmt::format("{}constant {}_null : {} := ({});", ind(1), name, name, join(parts, ", "));
}

const ClassConverter& default_converter() {
  static const ClassConverter c;
  return c;
}

const ClassConverter& converter_of(const ClassDef* cls) {
  if (cls && cls->converter) return *cls->converter;
  return default_converter();
}

bool is_function(const MemberFunction& fn) { return fn.result.has_value(); }

}  // namespace

// ---------------------------------------------------------------------------
// Identifiers, types, literals

bool is_reserved(const std::string& name) {
  std::string l = lower_case(name);
  return std::find(reserved_words.begin(), reserved_words.end(), l) != reserved_words.end();
}

bool is_legal_identifier(const std::string& name) {
  if (name.empty() || std::isalpha(static_cast<unsigned char>(name[0])) == 0) return false;
  if (name.back() == '_' || name.find("__") != std::string::npos) return false;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c)) == 0 && c != '_') return false;
  }
  return !is_reserved(name);
}

std::string legalize(const std::string& name) {
  std::string s;
  for (char c : name) {
    char x = std::isalnum(static_cast<unsigned char>(c)) != 0 ? c : '_';
    if (x == '_' && (s.empty() || s.back() == '_')) continue;
    s += x;
  }
  while (!s.empty() && s.back() == '_') s.pop_back();
  if (s.empty()) s = "n";
  if (std::isdigit(static_cast<unsigned char>(s[0])) != 0) s = "n_" + s;
  if (is_reserved(s)) s += "_r";
  return s;
}

std::string type_mark(const Type& t) {
  switch (t.kind()) {
    case Kind::logic: return "std_logic";
    case Kind::vector: return fmt::format("std_logic_vector({} downto 0)", t.width() - 1);
    case Kind::integer: return "integer";
    case Kind::boolean: return "boolean";
    case Kind::record: return legalize(t.name());
    case Kind::array: return legalize("arr" + t.mangle());
  }
  return "std_logic";
}

std::string literal(const Value& v) {
  switch (v.type().kind()) {
    case Kind::logic:
      switch (v.as_logic()) {
        case Logic::zero: return "'0'";
        case Logic::one: return "'1'";
        case Logic::undefined: return "'U'";
      }
      return "'U'";
    case Kind::vector: {
      std::uint64_t u = v.as_uint();
      unsigned w = v.type().width();
      if (u == 0) return "(others => '0')";
      if (u < (std::uint64_t{1} << 31)) return fmt::format("std_logic_vector(to_unsigned({}, {}))", u, w);
      return fmt::format("\"{}\"", bits(u, w));
    }
    case Kind::integer: return std::to_string(v.as_int());
    case Kind::boolean: return v.as_bool() ? "true" : "false";
    case Kind::record: {
      std::vector<std::string> parts;
      const auto& fields = v.type().fields();
      for (std::size_t i = 0; i < fields.size(); ++i) {
        parts.push_back(legalize(fields[i].name) + " => " + literal(v.elements()[i]));
      }
      return "(" + join(parts, ", ") + ")";
    }
    case Kind::array: {
      std::vector<std::string> parts;
      for (std::size_t i = 0; i < v.elements().size(); ++i) {
        parts.push_back(fmt::format("{} => {}", i, literal(v.elements()[i])));
      }
      return "(" + join(parts, ", ") + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Documents

std::string VhdlDocument::render() const {
  std::string out;
  auto section = [&](Section b) {
    for (const auto& t : block(b)) out += t + "\n";
  };
  section(Section::libraries);
  if (kind == "package") {
    out += fmt::format("\npackage {} is\n", unit);
    section(Section::package_declaration);
    out += fmt::format("end package {};\n", unit);
    if (!block(Section::package_body).empty()) {
      out += fmt::format("\npackage body {} is\n", unit);
      for (std::size_t i = 0; i < block(Section::package_body).size(); ++i) {
        if (i != 0) out += "\n";
        out += block(Section::package_body)[i] + "\n";
      }
      out += fmt::format("end package body {};\n", unit);
    }
    return out;
  }
  out += "\n";
  section(Section::entity_declaration);
  out += fmt::format("\narchitecture rtl of {} is\n", unit);
  section(Section::architecture_declarations);
  out += "begin\n";
  for (std::size_t i = 0; i < block(Section::architecture_body).size(); ++i) {
    if (i != 0) out += "\n";
    out += block(Section::architecture_body)[i] + "\n";
  }
  out += "end architecture rtl;\n";
  return out;
}

// ---------------------------------------------------------------------------
// VisitorContext

const LocalVar* VisitorContext::try_get_variable(const std::string& name) const {
  for (const auto& l : locals) {
    if (l.name == name) return &l;
  }
  return nullptr;
}

std::vector<std::string> VisitorContext::take_before() {
  std::vector<std::string> out;
  out.swap(before_);
  return out;
}

const ClassDef* VisitorContext::object_class(const ObjRef& o) const {
  switch (o.kind) {
    case ObjRef::Kind::object: return conv_->design().object(o.index).cls;
    case ObjRef::Kind::self: return function ? function->owner : nullptr;
    case ObjRef::Kind::param: return function ? function->params.at(o.index).key.cls : nullptr;
  }
  return nullptr;
}

std::string VisitorContext::object_name(const ObjRef& o) const {
  switch (o.kind) {
    case ObjRef::Kind::object: {
      const auto& obj = conv_->design().object(o.index);
      if (obj.cls->kind == ClassKind::interface) return conv_->interface_base(entity_, o.index);
      return legalize(obj.hdl_name);
    }
    case ObjRef::Kind::self: return "self";
    case ObjRef::Kind::param:
      if (!function) fail(ErrorKind::grammar, "parameter reference outside a member function");
      return legalize(function->params.at(o.index).name);
  }
  return "?";
}

std::string VisitorContext::interface_actual(const ObjRef& o, Flow side) const {
  if (o.kind == ObjRef::Kind::object) {
    return conv_->interface_base(entity_, o.index) + "_" + std::string(to_string(side));
  }
  return object_name(o);
}

std::string VisitorContext::self_args(const ObjRef& self, const ClassDef& cls) const {
  std::string base = object_name(self);
  std::vector<std::string> parts;
  if (!record_members(cls, true).empty()) parts.push_back(base + "_sig");
  if (cls.kind != ClassKind::handler || !record_members(cls, false).empty()) parts.push_back(base);
  return join(parts, ", ");
}

std::optional<std::string> VisitorContext::call_member_func(const MemberFunction& fn,
                                                            const ObjRef& self,
                                                            const std::vector<std::string>& args) {
  if (!conv_->available(fn)) {
    conv_->request(fn);
    missing_template = true;
    return std::nullopt;
  }
  std::vector<std::string> parts;
  std::string s = self_args(self, *fn.owner);
  if (!s.empty()) parts.push_back(s);
  parts.insert(parts.end(), args.begin(), args.end());
  return fmt::format("{}({})", legalize(fn.emitted_name()), join(parts, ", "));
}

std::string VisitorContext::ref_name(const Ref& r) const {
  switch (r.kind) {
    case Ref::Kind::node:
      if (kind_ == ScopeKind::procedure || kind_ == ScopeKind::function) {
        fail(ErrorKind::grammar, "design node referenced inside a member function");
      }
      return conv_->node_name(entity_, r.index);
    case Ref::Kind::member: {
      const auto& m = function->owner->member(static_cast<int>(r.index));
      std::string base = m.storage == MemberStorage::signal ? "self_sig" : "self";
      return base + "." + legalize(m.name);
    }
    case Ref::Kind::param: {
      const auto& p = function->params.at(r.index);
      std::string base = legalize(p.name);
      if (r.slot < 0) return base;
      return base + "." + legalize(p.key.cls->member(r.slot).name);
    }
  }
  return "?";
}

bool VisitorContext::ref_is_signal(const Ref& r) const {
  switch (r.kind) {
    case Ref::Kind::node: return conv_->design().node(r.index).storage == Storage::signal;
    case Ref::Kind::member:
      return function->owner->member(static_cast<int>(r.index)).storage == MemberStorage::signal;
    case Ref::Kind::param: {
      const auto& p = function->params.at(r.index);
      if (p.key.cls && p.key.cls->kind == ClassKind::interface) return true;
      return p.key.mode == ArgMode::signal;
    }
  }
  return false;
}

VisitorContext::Lowered VisitorContext::lower(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::ref: return {ref_name(e.ref()), e.type(), false, 0};
    case Expr::Kind::constant:
      return {literal(e.value()), e.type(), true, e.type().is_vector() ? e.value().as_uint() : 0};
    case Expr::Kind::truthy: {
      auto call = call_member_func(*e.function(), e.object(), {});
      return {call ? *call : "$$missing_template$$", Type::boolean(), false};
    }
    case Expr::Kind::negate: {
      Lowered a = lower(e.operands()[0]);
      if (e.type().kind() == Kind::boolean && a.type.is_logic()) {
        return {"(not (" + a.text + " = '1'))", e.type(), false};
      }
      return {"(not " + a.text + ")", e.type(), false};
    }
    case Expr::Kind::select:
      fail(ErrorKind::grammar, "v_switch is only convertible as the whole right-hand side of an assignment");
    case Expr::Kind::binary: {
      Lowered a = lower(e.operands()[0]);
      Lowered b = lower(e.operands()[1]);
      switch (e.op()) {
        case BinaryOp::add:
        case BinaryOp::sub: {
          std::string_view op = e.op() == BinaryOp::add ? "+" : "-";
          if (e.type().is_vector()) {
            return {fmt::format("std_logic_vector({} {} {})", operand_numeric(a), op, operand_numeric(b)),
                    e.type(), false};
          }
          return {fmt::format("({} {} {})", a.text, op, b.text), e.type(), false};
        }
        case BinaryOp::logic_and:
        case BinaryOp::logic_or: {
          std::string_view op = e.op() == BinaryOp::logic_and ? "and" : "or";
          if (e.type().is_logic()) return {fmt::format("({} {} {})", a.text, op, b.text), e.type(), false};
          auto cond = [](const Lowered& l) {
            return l.type.is_logic() ? "(" + l.text + " = '1')" : l.text;
          };
          return {fmt::format("({} {} {})", cond(a), op, cond(b)), e.type(), false};
        }
        default: {
          if (a.type.is_vector()) {
            return {fmt::format("{} {} {}", operand_numeric(a), relation(e.op()), operand_numeric(b)),
                    e.type(), false};
          }
          return {fmt::format("{} {} {}", a.text, relation(e.op()), b.text), e.type(), false};
        }
      }
    }
  }
  return {"?", e.type(), false};
}

std::string VisitorContext::operand_numeric(const Lowered& l) const {
  if (!l.type.is_vector()) return l.text;
  if (!l.literal) return "unsigned(" + l.text + ")";
  if (l.number < (std::uint64_t{1} << 31)) return std::to_string(l.number);
  return fmt::format("unsigned'(\"{}\")", bits(l.number, l.type.width()));
}

std::string VisitorContext::expr(const Expr& e, const Type* expected) {
  if (e.kind() == Expr::Kind::constant) {
    if (expected && e.is_literal()) return literal(assign_convert(*expected, e.value()));
    return literal(e.value());
  }
  return lower(e).text;
}

std::string VisitorContext::condition(const Expr& e) {
  Lowered l = lower(e);
  if (l.type.is_logic()) return l.text + " = '1'";
  return l.text;
}

std::vector<std::string> VisitorContext::block(const Block& b, int indent) {
  std::vector<std::string> out;
  for (const auto& st : b) statement(st, indent, out);
  return out;
}

void VisitorContext::statement(const Stmt& st, int indent, std::vector<std::string>& out) {
  std::vector<std::string> lines;
  if (const auto* d = std::get_if<Drive>(&st.node)) {
    const ClassConverter& tconv = converter_of(d->target.is_object() ? d->target.cls : nullptr);
    std::string rhs;
    if (d->source.is_object()) {
      rhs = converter_of(d->source.cls).get_value(*this, *d);
    } else if (d->source.expr().kind() == Expr::Kind::select && !d->target.is_object()) {
      const auto& ops = d->source.expr().operands();
      std::string name = ref_name(d->target.ref());
      std::string op = tconv.get_assignment_op(ref_is_signal(d->target.ref()));
      for (std::size_t i = 1; i + 1 < ops.size(); i += 2) {
        lines.push_back(fmt::format("{}{} {} then", ind(indent), i == 1 ? "if" : "elsif", condition(ops[i])));
        lines.push_back(fmt::format("{}{}{}{};", ind(indent + 1), name, op, expr(ops[i + 1], &d->target.type)));
      }
      lines.push_back(ind(indent) + "else");
      lines.push_back(fmt::format("{}{}{}{};", ind(indent + 1), name, op, expr(ops[0], &d->target.type)));
      lines.push_back(ind(indent) + "end if;");
    } else {
      rhs = converter_of(nullptr).get_value(*this, *d);
    }
    if (lines.empty()) lines.push_back(ind(indent) + tconv.reassign(*this, *d, rhs));
  } else if (const auto* br = std::get_if<Branch>(&st.node)) {
    for (std::size_t i = 0; i < br->arms.size(); ++i) {
      lines.push_back(fmt::format("{}{} {} then", ind(indent), i == 0 ? "if" : "elsif",
                                  condition(br->arms[i].first)));
      auto inner = block(br->arms[i].second, indent + 1);
      if (inner.empty()) inner.push_back(ind(indent + 1) + "null;");
      lines.insert(lines.end(), inner.begin(), inner.end());
    }
    if (!br->otherwise.empty()) {
      lines.push_back(ind(indent) + "else");
      auto inner = block(br->otherwise, indent + 1);
      lines.insert(lines.end(), inner.begin(), inner.end());
    }
    lines.push_back(ind(indent) + "end if;");
  } else {
    const auto& c = std::get<Call>(st.node);
    std::vector<std::string> args;
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      const auto& a = c.args[i];
      const auto& p = c.fn->params.at(i);
      if (a.is_object()) {
        if (a.cls->kind == ClassKind::interface) {
          args.push_back(interface_actual(a.object(), p.link_side == "s2m" ? Flow::s2m : Flow::m2s));
        } else {
          args.push_back(object_name(a.object()));
        }
      } else if (a.expr().kind() == Expr::Kind::ref && p.dir != ParamDir::in) {
        args.push_back(ref_name(a.expr().ref()));
      } else {
        args.push_back(expr(a.expr(), &p.key.type));
      }
    }
    auto call = call_member_func(*c.fn, c.object, args);
    lines.push_back(ind(indent) + (call ? *call + ";" : "-- $$missing_template$$"));
  }
  for (auto& s : take_before()) out.push_back(ind(indent) + s);
  out.insert(out.end(), lines.begin(), lines.end());
}

// ---------------------------------------------------------------------------
// Class hooks

std::string ClassConverter::get_value(VisitorContext& ctx, const Drive& d) const {
  if (d.source.is_object()) {
    fail(ErrorKind::grammar, "class " + d.source.cls->name + " cannot be read as a value");
  }
  const Type* expected = d.target.is_object() ? nullptr : &d.target.type;
  return ctx.expr(d.source.expr(), expected);
}

std::string ClassConverter::reassign(VisitorContext& ctx, const Drive& d, const std::string& rhs) const {
  if (d.target.is_object()) {
    fail(ErrorKind::grammar, "class " + d.target.cls->name + " cannot be assigned");
  }
  Target t = reassign_type(d.target);
  return ctx.ref_name(t.ref()) + get_assignment_op(ctx.ref_is_signal(t.ref())) + rhs + ";";
}

namespace {

std::string param_decl(const Param& p, bool function) {
  std::string name = legalize(p.name);
  std::string dir = function ? "" : std::string(direction(p.dir)) + " ";
  if (p.key.cls && p.key.cls->kind == ClassKind::interface) {
    std::string rec = Converter::record_name(*p.key.cls, p.link_side);
    return fmt::format("signal {} : {}{}", name, dir, rec);
  }
  std::string type = p.key.cls ? legalize(p.key.cls->name) : type_mark(p.key.type);
  std::string cls = p.key.mode == ArgMode::signal ? "signal " : "";
  return fmt::format("{}{} : {}{}", cls, name, dir, type);
}

}  // namespace

void ClassConverter::emit_package(Converter& conv, const ClassDef& cls, VhdlDocument& doc) const {
  if (cls.kind == ClassKind::interface) {
    for (Flow f : {Flow::m2s, Flow::s2m}) {
      if (!has_flow(cls, f)) continue;
      std::vector<const MemberSpec*> ms;
      for (int s : cls.slots_with_flow(f)) ms.push_back(&cls.member(s));
      std::string rec = Converter::record_name(cls, std::string(to_string(f)));
      doc.add(Section::package_declaration, record_decl(rec, ms));
      doc.add(Section::package_declaration, null_decl(rec, ms));
    }
    return;
  }
  if (cls.kind == ClassKind::data) {
    std::vector<const MemberSpec*> ms;
    for (const auto& m : cls.members) ms.push_back(&m);
    std::string rec = legalize(cls.name);
    doc.add(Section::package_declaration, record_decl(rec, ms));
    doc.add(Section::package_declaration, null_decl(rec, ms));
  } else {
    for (bool sig : {true, false}) {
      auto ms = record_members(cls, sig);
      if (ms.empty()) continue;
      std::string rec = Converter::record_name(cls, sig ? "sig" : "var");
      doc.add(Section::package_declaration, record_decl(rec, ms));
      doc.add(Section::package_declaration, null_decl(rec, ms));
    }
  }

  for (const MemberFunction* fn : conv.emitted_functions(cls)) {
    bool func = is_function(*fn);
    if (func && !fn->body.empty()) {
      fail(ErrorKind::grammar, fn->signature() + " both changes state and returns a value");
    }
    std::vector<std::string> params;
    std::string self_dir = func ? "" : "inout ";
    if (cls.kind == ClassKind::handler) {
      auto sig = record_members(cls, true);
      auto var = record_members(cls, false);
      if (!sig.empty()) {
        params.push_back(fmt::format("signal self_sig : {}{}", self_dir, Converter::record_name(cls, "sig")));
      }
      if (!var.empty()) {
        params.push_back(fmt::format("self : {}{}", self_dir, Converter::record_name(cls, "var")));
      }
    } else {
      params.push_back(fmt::format("self : {}{}", self_dir, legalize(cls.name)));
    }
    for (const auto& p : fn->params) params.push_back(param_decl(p, func));
    std::string name = legalize(fn->emitted_name());
    std::string head = func ? fmt::format("function {}({}) return boolean", name, join(params, "; "))
                            : fmt::format("procedure {}({})", name, join(params, "; "));
    doc.add(Section::package_declaration, ind(1) + head + ";");

    VisitorContext ctx(conv, func ? VisitorContext::ScopeKind::function
                                  : VisitorContext::ScopeKind::procedure, 0);
    ctx.function = fn;
    std::vector<std::string> body;
    if (func) {
      body.push_back(ind(2) + "return " + ctx.condition(*fn->result) + ";");
      for (auto& s : ctx.take_before()) body.insert(body.end() - 1, ind(2) + s);
    } else {
      body = ctx.block(fn->body, 2);
      if (body.empty()) body.push_back(ind(2) + "null;");
    }
    std::string text = ind(1) + head + " is\n";
    for (const auto& l : ctx.locals) {
      text += fmt::format("{}variable {} : {} := {};\n", ind(2), l.name, l.type, l.init);
    }
    text += ind(1) + "begin\n";
    for (const auto& l : body) text += l + "\n";
    text += fmt::format("{}end {} {};", ind(1), func ? "function" : "procedure", name);
    doc.add(Section::package_body, text);
    if (ctx.missing_template) conv.note_missing();
  }
}

void ClassConverter::inject(const ClassDef&, VhdlDocument&) const {}

bool EntityConverter::emit(Converter& conv, EntityId entity, const std::string& unit,
                           VhdlDocument& doc) const {
  return conv.render_entity(entity, unit, doc);
}

void EntityConverter::inject(EntityId, VhdlDocument&) const {}

// ---------------------------------------------------------------------------
// Converter

Converter::Converter(Session& session, EntityId top, ConversionOptions options)
    : session_(&session), top_(top), options_(options) {}

std::string Converter::record_name(const ClassDef& cls, const std::string& suffix) {
  return legalize(cls.name + "_" + suffix);
}

void Converter::request(const MemberFunction& fn) {
  if (registry_.count(&fn) != 0) return;
  if (std::find(pending_.begin(), pending_.end(), &fn) == pending_.end()) pending_.push_back(&fn);
}

std::vector<const MemberFunction*> Converter::emitted_functions(const ClassDef& cls) const {
  std::vector<const MemberFunction*> out;
  for (const auto* fn : session_->specializations().for_class(&cls)) {
    if (registry_.count(fn) != 0) out.push_back(fn);
  }
  return out;
}

std::vector<const ClassDef*> Converter::collected_classes() const {
  std::vector<const ClassDef*> out;
  for (const auto& it : items_) {
    if (!it.is_entity) out.push_back(it.cls);
  }
  return out;
}

void Converter::collect() {
  const Design& d = design();
  auto hier = d.hierarchy(top_);
  std::set<EntityId> in(hier.begin(), hier.end());
  std::set<const ClassDef*> used;
  for (EntityId e : hier) {
    for (ObjectId o : d.entity(e).objects) {
      const ClassDef* cls = d.object(o).cls;
      used.insert(cls);
      if (cls->view) used.insert(cls->view);
    }
  }
  for (const auto& entry : d.shadow_register()) {
    if (entry.kind == ShadowEntry::Kind::entity && in.count(entry.id) != 0) {
      items_.push_back({true, entry.id, nullptr});
    } else if (entry.kind == ShadowEntry::Kind::class_def && used.count(entry.cls) != 0) {
      items_.push_back({false, 0, entry.cls});
      used.erase(entry.cls);
    }
  }
}

std::vector<std::string> Converter::entity_uses(EntityId e) const {
  const Design& d = design();
  std::set<const ClassDef*> need;
  const auto& rec = d.entity(e);
  for (ObjectId o : rec.objects) need.insert(d.object(o).cls);
  for (EntityId c : rec.children) {
    for (const auto& p : d.entity(c).ports) {
      if (p.is_object) need.insert(d.object(p.id).cls);
    }
  }
  std::vector<std::string> out;
  for (const auto* cls : collected_classes()) {
    if (need.count(cls) != 0) out.push_back(package_name(*cls));
  }
  return out;
}

std::vector<std::string> Converter::class_uses(const ClassDef& cls) const {
  std::set<const ClassDef*> need;
  if (cls.view) need.insert(cls.view);
  for (const auto* fn : emitted_functions(cls)) {
    for (const auto& k : fn->key) {
      if (k.cls && k.cls != &cls) need.insert(k.cls);
    }
  }
  std::vector<std::string> out;
  for (const auto* c : collected_classes()) {
    if (need.erase(c) != 0) out.push_back(package_name(*c));
  }
  for (const auto* c : need) out.push_back(package_name(*c));
  return out;
}

Converter::ScopeNames& Converter::scope_names(EntityId scope) {
  ScopeNames& sn = scopes_[scope];
  if (sn.built) return sn;
  sn.built = true;
  const Design& d = design();
  const auto& rec = d.entity(scope);

  std::set<std::string> used;
  for (NodeId n : rec.nodes) used.insert(legalize(d.node(n).hdl_name));
  for (ObjectId o : rec.objects) used.insert(legalize(d.object(o).hdl_name));
  for (EntityId c : rec.children) used.insert(legalize(d.entity(c).hdl_name));
  for (ProcessId p : rec.processes) used.insert(legalize(d.process(p).hdl_name));
  auto claim = [&](std::string base) {
    std::string name = base;
    for (unsigned k = 1; used.count(name) != 0; ++k) name = fmt::format("{}_{}", base, k);
    used.insert(name);
    return name;
  };

  std::set<EntityId> children(rec.children.begin(), rec.children.end());
  auto visible_child_port = [&](NodeId n) {
    const auto& node = d.node(n);
    return node.port && !node.object && children.count(node.owner) != 0;
  };
  auto own_scalar = [&](NodeId n) {
    const auto& node = d.node(n);
    return node.owner == scope && !node.object && !node.process;
  };

  // Scalar child ports: group by structural links, name by the own node in
  // the group or by an intermediate signal.
  std::map<NodeId, NodeId> parent;
  std::function<NodeId(NodeId)> find = [&](NodeId x) {
    auto it = parent.find(x);
    if (it == parent.end() || it->second == x) return x;
    return it->second = find(it->second);
  };
  auto unite = [&](NodeId a, NodeId b) {
    NodeId ra = find(a);
    NodeId rb = find(b);
    if (ra != rb) parent[ra] = rb;
  };
  std::vector<NodeId> child_ports;
  for (EntityId c : rec.children) {
    for (const auto& p : d.entity(c).ports) {
      if (!p.is_object) child_ports.push_back(p.id);
    }
  }
  for (NodeId n : child_ports) {
    parent.emplace(n, n);
    if (auto drv = d.node(n).structural_driver; drv && (own_scalar(*drv) || visible_child_port(*drv))) {
      parent.emplace(*drv, *drv);
      unite(n, *drv);
    }
  }
  for (NodeId n : rec.nodes) {
    if (!own_scalar(n)) continue;
    if (auto drv = d.node(n).structural_driver; drv && visible_child_port(*drv)) {
      parent.emplace(n, n);
      unite(n, *drv);
    }
  }
  std::map<NodeId, std::vector<NodeId>> groups;
  for (const auto& [n, _] : parent) groups[find(n)].push_back(n);
  for (NodeId n : child_ports) {
    if (sn.nodes.count(n) != 0) continue;
    auto& members = groups[find(n)];
    std::optional<NodeId> own;
    std::optional<NodeId> head;
    for (NodeId m : members) {
      if (own_scalar(m) && (!own || !d.node(m).structural_driver)) own = m;
      auto drv = d.node(m).structural_driver;
      bool driven_inside = drv && std::find(members.begin(), members.end(), *drv) != members.end();
      if (!driven_inside && !head) head = m;
    }
    std::string name;
    if (own) {
      name = legalize(d.node(*own).hdl_name);
    } else {
      NodeId h = head.value_or(n);
      name = claim(legalize(d.entity(d.node(h).owner).hdl_name + "_" + d.node(h).hdl_name));
      sn.scalar_signals.emplace_back(name, d.node(h).type);
    }
    for (NodeId m : members) {
      if (!own_scalar(m)) sn.nodes[m] = name;
    }
  }

  // Interface child ports: own partner or a shared intermediate pair.
  for (EntityId c : rec.children) {
    for (const auto& p : d.entity(c).ports) {
      if (!p.is_object || sn.interfaces.count(p.id) != 0) continue;
      std::optional<ObjectId> partner;
      bool is_source = true;
      for (const auto& conn : rec.connections) {
        if (conn.source == p.id) partner = conn.sink;
        if (conn.sink == p.id) {
          partner = conn.source;
          is_source = false;
        }
        if (partner) break;
      }
      if (partner && d.object(*partner).owner == scope) {
        sn.interfaces[p.id] = legalize(d.object(*partner).hdl_name);
        continue;
      }
      ObjectId named = partner && !is_source ? *partner : p.id;
      const auto& o = d.object(named);
      std::string name = claim(legalize(d.entity(o.owner).hdl_name + "_" + o.hdl_name));
      sn.interface_signals.emplace_back(name, o.cls);
      sn.interfaces[p.id] = name;
      if (partner) sn.interfaces[*partner] = name;
    }
  }
  return sn;
}

std::string Converter::interface_base(EntityId scope, ObjectId obj) {
  const auto& o = design().object(obj);
  if (o.owner == scope) return legalize(o.hdl_name);
  auto& sn = scope_names(scope);
  auto it = sn.interfaces.find(obj);
  if (it == sn.interfaces.end()) {
    fail(ErrorKind::grammar, design().object_path(obj) + " is not visible from " + design().entity(scope).path);
  }
  return it->second;
}

std::string Converter::node_name(EntityId scope, NodeId id) {
  const Design& d = design();
  const auto& n = d.node(id);
  if (n.object) {
    const auto& o = d.object(*n.object);
    const auto& m = o.cls->member(n.slot);
    if (o.cls->kind == ClassKind::interface) {
      return fmt::format("{}_{}.{}", interface_base(scope, o.id), to_string(m.flow), legalize(m.name));
    }
    std::string base = legalize(o.hdl_name);
    if (o.cls->kind == ClassKind::handler && m.storage == MemberStorage::signal) base += "_sig";
    return base + "." + legalize(m.name);
  }
  if (n.owner == scope) {
    if (n.hdl_name.empty()) fail(ErrorKind::naming, "unnamed node reached the VHDL emitter");
    return legalize(n.hdl_name);
  }
  auto& sn = scope_names(scope);
  auto it = sn.nodes.find(id);
  if (it == sn.nodes.end()) {
    fail(ErrorKind::grammar, d.node_path(id) + " is not visible from " + d.entity(scope).path);
  }
  return it->second;
}

std::string Converter::entity_unit(EntityId e) {
  if (auto it = units_.find(e); it != units_.end()) return it->second;
  const auto& rec = design().entity(e);
  const std::string placeholder = "\x01unit\x01";
  VhdlDocument probe;
  probe.unit = placeholder;
  probe.kind = "entity";
  const EntityConverter& ec = rec.converter ? *rec.converter : *entity_converter();
  ec.emit(*this, e, placeholder, probe);
  std::string text = probe.render();
  auto& variants = variants_[rec.type_name];
  auto it = std::find(variants.begin(), variants.end(), text);
  std::size_t index = static_cast<std::size_t>(it - variants.begin());
  if (it == variants.end()) variants.push_back(text);
  std::string base = legalize(rec.type_name);
  std::string unit = index == 0 ? base : fmt::format("{}_{}", base, index);
  units_[e] = unit;
  return unit;
}

namespace {

void collect_sensitivity(VisitorContext& ctx, const Design& d, const Block& body,
                         std::vector<std::string>& out) {
  auto add_expr = [&](const Expr& e) {
    for_each_expr(e, [&](const Expr& x) {
      if (x.kind() != Expr::Kind::ref || x.ref().kind != Ref::Kind::node) return;
      if (d.node(x.ref().index).storage != Storage::signal) return;
      std::string name = ctx.ref_name(x.ref());
      name = name.substr(0, name.find('.'));
      if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    });
  };
  for_each_stmt(body, [&](const Stmt& st) {
    if (const auto* dr = std::get_if<Drive>(&st.node)) {
      if (!dr->source.is_object()) add_expr(dr->source.expr());
    } else if (const auto* br = std::get_if<Branch>(&st.node)) {
      for (const auto& arm : br->arms) add_expr(arm.first);
    } else {
      const auto& c = std::get<Call>(st.node);
      for (std::size_t i = 0; i < c.args.size(); ++i) {
        const auto& a = c.args[i];
        const auto& p = c.fn->params.at(i);
        if (!a.is_object()) {
          add_expr(a.expr());
        } else if (a.cls->kind == ClassKind::interface && p.dir == ParamDir::in) {
          std::string name = ctx.interface_actual(a.object(), p.link_side == "s2m" ? Flow::s2m : Flow::m2s);
          if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
        }
      }
    }
  });
}

bool concurrent_block(const Design& d, const Block& body) {
  for (const auto& st : body) {
    const auto* dr = std::get_if<Drive>(&st.node);
    if (!dr || dr->target.is_object() || dr->source.is_object()) return false;
    if (dr->target.ref().kind != Ref::Kind::node) return false;
    if (d.node(dr->target.ref().index).storage != Storage::signal) return false;
  }
  return !body.empty();
}

}  // namespace

bool Converter::render_entity(EntityId e, const std::string& unit, VhdlDocument& doc) {
  Design& d = session_->design();
  const auto& rec = d.entity(e);
  auto& sn = scope_names(e);
  bool missing = false;

  doc.add(Section::libraries, "library ieee;\nuse ieee.std_logic_1164.all;\nuse ieee.numeric_std.all;");
  for (const auto& pkg : entity_uses(e)) doc.add(Section::libraries, "use work." + pkg + ".all;");

  // Entity declaration.
  std::vector<std::string> ports;
  for (const auto& p : rec.ports) {
    if (!p.is_object) {
      const auto& n = d.node(p.id);
      ports.push_back(fmt::format("{} : {} {}", legalize(n.hdl_name),
                                  n.port->direction == PortDirection::in ? "in" : "out", type_mark(n.type)));
      continue;
    }
    const auto& o = d.object(p.id);
    bool primary = o.port->direction == PortDirection::out;
    for (Flow f : {Flow::m2s, Flow::s2m}) {
      if (!has_flow(*o.cls, f)) continue;
      bool out = (f == Flow::m2s) == primary;
      ports.push_back(fmt::format("{}_{} : {} {}", legalize(o.hdl_name), to_string(f), out ? "out" : "in",
                                  record_name(*o.cls, std::string(to_string(f)))));
    }
  }
  std::string ent = fmt::format("entity {} is\n", unit);
  if (!ports.empty()) {
    ent += ind(1) + "port (\n";
    for (std::size_t i = 0; i < ports.size(); ++i) {
      ent += ind(2) + ports[i] + (i + 1 < ports.size() ? ";\n" : "\n");
    }
    ent += ind(1) + ");\n";
  }
  ent += fmt::format("end entity {};", unit);
  doc.add(Section::entity_declaration, ent);

  // Architecture declarations.
  auto decl = [&](std::string text) { doc.add(Section::architecture_declarations, ind(1) + text); };
  for (const auto& [name, type] : sn.scalar_signals) decl(fmt::format("signal {} : {};", name, type_mark(type)));
  for (NodeId id : rec.nodes) {
    const auto& n = d.node(id);
    if (n.port || n.object || n.process) continue;
    std::string init = n.init.type().is_logic() && n.init.as_logic() == Logic::undefined
                           ? "" : " := " + literal(n.init);
    if (n.storage == Storage::constant) {
      decl(fmt::format("constant {} : {} := {};", legalize(n.hdl_name), type_mark(n.type), literal(n.init)));
    } else if (n.storage == Storage::signal) {
      decl(fmt::format("signal {} : {}{};", legalize(n.hdl_name), type_mark(n.type), init));
    } else {
      decl(fmt::format("shared variable {} : {}{};", legalize(n.hdl_name), type_mark(n.type), init));
    }
  }
  auto bundle_decl = [&](const std::string& name, const ClassDef& cls) {
    for (Flow f : {Flow::m2s, Flow::s2m}) {
      if (!has_flow(cls, f)) continue;
      decl(fmt::format("signal {}_{} : {};", name, to_string(f), record_name(cls, std::string(to_string(f)))));
    }
  };
  for (const auto& [name, cls] : sn.interface_signals) bundle_decl(name, *cls);
  for (ObjectId id : rec.objects) {
    const auto& o = d.object(id);
    if (o.port) continue;
    switch (o.cls->kind) {
      case ClassKind::interface: bundle_decl(legalize(o.hdl_name), *o.cls); break;
      case ClassKind::data:
        if (o.process) break;
        decl(fmt::format("signal {} : {} := {}_null;", legalize(o.hdl_name), legalize(o.cls->name),
                         legalize(o.cls->name)));
        break;
      case ClassKind::handler:
        if (!record_members(*o.cls, true).empty()) {
          std::string r = record_name(*o.cls, "sig");
          decl(fmt::format("signal {}_sig : {} := {}_null;", legalize(o.hdl_name), r, r));
        }
        break;
    }
  }

  // Child instances.
  for (EntityId c : rec.children) {
    const auto& cr = d.entity(c);
    std::vector<std::string> map;
    for (const auto& p : cr.ports) {
      if (!p.is_object) {
        map.push_back(fmt::format("{} => {}", legalize(d.node(p.id).hdl_name), node_name(e, p.id)));
        continue;
      }
      const auto& o = d.object(p.id);
      for (Flow f : {Flow::m2s, Flow::s2m}) {
        if (!has_flow(*o.cls, f)) continue;
        map.push_back(fmt::format("{}_{} => {}_{}", legalize(o.hdl_name), to_string(f),
                                  interface_base(e, p.id), to_string(f)));
      }
    }
    std::string text = fmt::format("{}{} : entity work.{}", ind(1), legalize(cr.hdl_name), entity_unit(c));
    if (!map.empty()) {
      text += fmt::format("\n{}port map (\n", ind(2));
      for (std::size_t i = 0; i < map.size(); ++i) {
        text += ind(3) + map[i] + (i + 1 < map.size() ? ",\n" : "\n");
      }
      text += ind(2) + ")";
    }
    doc.add(Section::architecture_body, text + ";");
  }

  // Structural links between objects of this architecture.
  std::vector<std::string> links;
  for (const auto& conn : rec.connections) {
    const auto& src = d.object(conn.source);
    const auto& snk = d.object(conn.sink);
    if (src.owner != e || snk.owner != e) continue;
    std::string a = legalize(src.hdl_name);
    std::string b = legalize(snk.hdl_name);
    if (has_flow(*src.cls, Flow::m2s)) links.push_back(fmt::format("{}{}_m2s <= {}_m2s;", ind(1), b, a));
    if (has_flow(*src.cls, Flow::s2m)) links.push_back(fmt::format("{}{}_s2m <= {}_s2m;", ind(1), a, b));
  }
  for (NodeId id : rec.nodes) {
    const auto& n = d.node(id);
    if (n.object || n.process || !n.structural_driver) continue;
    const auto& drv = d.node(*n.structural_driver);
    if (drv.owner != e || drv.object) continue;
    links.push_back(fmt::format("{}{} <= {};", ind(1), legalize(n.hdl_name), legalize(drv.hdl_name)));
  }
  if (!links.empty()) doc.add(Section::architecture_body, join(links, "\n"));

  // Processes.
  for (ProcessId pid : rec.processes) {
    const auto& p = d.process(pid);
    std::string pname = legalize(p.hdl_name);
    if (p.kind == ProcessKind::host) {
      fail(ErrorKind::grammar, fmt::format("{} is simulation-only (host process {})", rec.path, pname));
    }
    VisitorContext ctx(*this, VisitorContext::ScopeKind::process, e);
    if (p.kind == ProcessKind::combinational && p.handlers.empty() && concurrent_block(d, p.body)) {
      VisitorContext cctx(*this, VisitorContext::ScopeKind::architecture, e);
      std::vector<std::string> lines;
      for (const auto& st : p.body) {
        const auto& dr = std::get<Drive>(st.node);
        std::string target = cctx.ref_name(dr.target.ref());
        const Expr& src = dr.source.expr();
        if (src.kind() == Expr::Kind::select) {
          const auto& ops = src.operands();
          std::string text = fmt::format("{}{} <= ", ind(1), target);
          for (std::size_t i = 1; i + 1 < ops.size(); i += 2) {
            text += fmt::format("{} when {} else ", cctx.expr(ops[i + 1], &dr.target.type),
                                cctx.condition(ops[i]));
          }
          text += cctx.expr(ops[0], &dr.target.type) + ";";
          lines.push_back(text);
        } else {
          lines.push_back(fmt::format("{}{} <= {};", ind(1), target, cctx.expr(src, &dr.target.type)));
        }
      }
      missing = missing || cctx.missing_template;
      doc.add(Section::architecture_body, join(lines, "\n"));
      continue;
    }

    int depth = p.kind == ProcessKind::rising_edge ? 3 : 2;
    std::vector<std::string> body;
    auto hook = [&](ObjectId h, const char* which, std::vector<std::string>& into) {
      const MemberFunction* fn = handler_hook(*session_, h, which);
      const auto& inst = d.object(h);
      if (!fn || !inst.link) return;
      Flow side = fn->params.at(0).link_side == "s2m" ? Flow::s2m : Flow::m2s;
      auto call = ctx.call_member_func(*fn, ObjRef::object(h), {ctx.interface_actual(ObjRef::object(*inst.link), side)});
      into.push_back(ind(depth) + (call ? *call + ";" : "-- $$missing_template$$"));
    };
    for (ObjectId h : p.handlers) hook(h, "pull", body);
    auto inner = ctx.block(p.body, depth);
    body.insert(body.end(), inner.begin(), inner.end());
    for (ObjectId h : p.handlers) hook(h, "push", body);
    missing = missing || ctx.missing_template;

    std::vector<std::string> sens;
    if (p.kind == ProcessKind::rising_edge) {
      sens.push_back(node_name(e, *p.clock));
    } else {
      collect_sensitivity(ctx, d, p.body, sens);
    }
    std::string text = fmt::format("{}{} : process ({})\n", ind(1), pname, join(sens, ", "));
    for (NodeId id : p.locals) {
      const auto& n = d.node(id);
      if (n.object) continue;
      text += fmt::format("{}variable {} : {} := {};\n", ind(2), legalize(n.hdl_name), type_mark(n.type),
                          literal(n.init));
    }
    for (ObjectId id : rec.objects) {
      const auto& o = d.object(id);
      if (!o.process || *o.process != pid) continue;
      if (o.cls->kind == ClassKind::data) {
        text += fmt::format("{}variable {} : {} := {}_null;\n", ind(2), legalize(o.hdl_name),
                            legalize(o.cls->name), legalize(o.cls->name));
      } else if (o.cls->kind == ClassKind::handler && !record_members(*o.cls, false).empty()) {
        std::string r = record_name(*o.cls, "var");
        text += fmt::format("{}variable {} : {} := {}_null;\n", ind(2), legalize(o.hdl_name), r, r);
      }
    }
    for (const auto& l : ctx.locals) {
      text += fmt::format("{}variable {} : {} := {};\n", ind(2), l.name, l.type, l.init);
    }
    text += ind(1) + "begin\n";
    if (p.kind == ProcessKind::rising_edge) text += fmt::format("{}if rising_edge({}) then\n", ind(2), sens[0]);
    for (const auto& l : body) text += l + "\n";
    if (p.kind == ProcessKind::rising_edge) text += ind(2) + "end if;\n";
    text += fmt::format("{}end process {};", ind(1), pname);
    doc.add(Section::architecture_body, text);
  }
  return missing;
}

void Converter::note_missing() { class_missing_ = true; }

VhdlDocument Converter::convert_item(const Item& item, bool& missing) {
  VhdlDocument doc;
  if (item.is_entity) {
    const auto& rec = design().entity(item.entity);
    doc.kind = "entity";
    doc.unit = entity_unit(item.entity);
    doc.source = rec.path;
    const EntityConverter& ec = rec.converter ? *rec.converter : *entity_converter();
    missing = ec.emit(*this, item.entity, doc.unit, doc);
    ec.inject(item.entity, doc);
  } else {
    const ClassDef& cls = *item.cls;
    doc.kind = "package";
    doc.unit = package_name(cls);
    doc.source = cls.name;
    doc.add(Section::libraries, "library ieee;\nuse ieee.std_logic_1164.all;\nuse ieee.numeric_std.all;");
    for (const auto& pkg : class_uses(cls)) doc.add(Section::libraries, "use work." + pkg + ".all;");
    const ClassConverter& cc = converter_of(&cls);
    class_missing_ = false;
    cc.emit_package(*this, cls, doc);
    cc.inject(cls, doc);
    missing = class_missing_;
  }
  doc.file = doc.unit + ".vhd";
  return doc;
}

namespace {

void callees(const MemberFunction& fn, std::vector<const MemberFunction*>& out) {
  auto from_expr = [&](const Expr& e) {
    for_each_expr(e, [&](const Expr& x) {
      if (x.kind() == Expr::Kind::truthy) out.push_back(x.function());
    });
  };
  for_each_stmt(fn.body, [&](const Stmt& st) {
    if (const auto* d = std::get_if<Drive>(&st.node)) {
      if (d->assign_fn) out.push_back(d->assign_fn);
      if (d->value_fn) out.push_back(d->value_fn);
      if (!d->source.is_object()) from_expr(d->source.expr());
    } else if (const auto* b = std::get_if<Branch>(&st.node)) {
      for (const auto& arm : b->arms) from_expr(arm.first);
    } else {
      const auto& c = std::get<Call>(st.node);
      out.push_back(c.fn);
      for (const auto& a : c.args) {
        if (!a.is_object()) from_expr(a.expr());
      }
    }
  });
  if (fn.result) from_expr(*fn.result);
}

}  // namespace

ConversionResult Converter::run() {
  session_->freeze(top_);
  collect();
  ConversionResult result;
  result.top = design().entity(top_).hdl_name;
  for (const auto& it : items_) {
    result.queue.push_back(it.is_entity ? design().entity(it.entity).path : it.cls->name);
  }

  std::map<std::size_t, VhdlDocument> docs;
  std::vector<std::size_t> queue(items_.size());
  for (std::size_t i = 0; i < queue.size(); ++i) queue[i] = i;

  for (unsigned pass = 1;; ++pass) {
    if (pass > options_.max_passes) fail(ErrorKind::no_progress, "conversion exceeded the pass limit");
    result.passes = pass;
    pending_.clear();
    std::vector<std::size_t> requeue;
    for (std::size_t idx : queue) {
      bool missing = false;
      docs[idx] = convert_item(items_[idx], missing);
      if (missing && std::find(requeue.begin(), requeue.end(), idx) == requeue.end()) requeue.push_back(idx);
    }
    if (requeue.empty()) break;

    // Create the requested specializations and everything they call.
    std::vector<const MemberFunction*> created;
    std::vector<const MemberFunction*> rejected;
    std::vector<const MemberFunction*> work(pending_.rbegin(), pending_.rend());
    while (!work.empty()) {
      const MemberFunction* fn = work.back();
      work.pop_back();
      if (registry_.count(fn) != 0 || std::find(rejected.begin(), rejected.end(), fn) != rejected.end()) {
        continue;
      }
      if (fn->owner->hdl_supported && !fn->owner->hdl_supported(*fn)) {
        rejected.push_back(fn);
        continue;
      }
      registry_.insert(fn);
      created.push_back(fn);
      std::vector<const MemberFunction*> more;
      callees(*fn, more);
      work.insert(work.end(), more.rbegin(), more.rend());
    }
    if (created.empty()) {
      std::vector<std::string> sigs;
      for (const auto* fn : pending_) {
        if (registry_.count(fn) == 0) sigs.push_back(fn->signature());
      }
      fail(ErrorKind::no_progress,
           fmt::format("conversion made no progress in pass {}; missing specializations: {}", pass,
                       join(sigs, ", ")));
    }
    for (const auto* fn : created) {
      auto it = std::find_if(items_.begin(), items_.end(),
                             [&](const Item& i) { return !i.is_entity && i.cls == fn->owner; });
      std::size_t idx = static_cast<std::size_t>(it - items_.begin());
      if (it == items_.end()) {
        items_.push_back({false, 0, fn->owner});
        result.queue.push_back(fn->owner->name);
      }
      if (std::find(requeue.begin(), requeue.end(), idx) == requeue.end()) requeue.push_back(idx);
    }
    std::sort(requeue.begin(), requeue.end());
    queue = requeue;
  }

  std::map<std::string, std::size_t> by_file;
  for (auto& [idx, doc] : docs) {
    if (auto it = by_file.find(doc.file); it != by_file.end()) {
      result.documents[it->second].sources.push_back(doc.source);
      continue;
    }
    by_file[doc.file] = result.documents.size();
    doc.sources.push_back(doc.source);
    result.documents.push_back(std::move(doc));
  }
  return result;
}

nlohmann::ordered_json ConversionResult::manifest() const {
  nlohmann::ordered_json j;
  j["top"] = top;
  j["passes"] = passes;
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& d : documents) {
    j["files"].push_back({{"file", d.file}, {"unit", d.unit}, {"kind", d.kind}, {"sources", d.sources}});
  }
  return j;
}

void write_output(const ConversionResult& result, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, fmt::format("cannot create {}: {}", dir, ec.message()));
  auto write = [&](const std::string& name, const std::string& text) {
    fs::path p = fs::path(dir) / name;
    std::ofstream f(p, std::ios::binary);
    f << text;
    if (!f) fail(ErrorKind::io, "cannot write " + p.string());
  };
  for (const auto& d : result.documents) write(d.file, d.render());
  write("manifest.json", result.manifest().dump(2) + "\n");
}

}  // namespace hdlkit::vhdl
