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

#include "hdlkit/types.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>

#include "hdlkit/error.hpp"

namespace hdlkit {

struct Type::Rep {
  Kind kind = Kind::logic;
  unsigned width = 0;
  std::size_t length = 0;
  std::string name;
  std::vector<Field> fields;
  std::vector<Type> element;  // 0 or 1 entries
};

const std::shared_ptr<const Type::Rep>& Type::scalar_rep(Kind kind) {
  static const auto logic = [] {
    auto r = std::make_shared<Type::Rep>();
    r->kind = Kind::logic;
    return std::shared_ptr<const Type::Rep>(r);
  }();
  static const auto integer = [] {
    auto r = std::make_shared<Type::Rep>();
    r->kind = Kind::integer;
    return std::shared_ptr<const Type::Rep>(r);
  }();
  static const auto boolean = [] {
    auto r = std::make_shared<Type::Rep>();
    r->kind = Kind::boolean;
    return std::shared_ptr<const Type::Rep>(r);
  }();
  switch (kind) {
    case Kind::integer: return integer;
    case Kind::boolean: return boolean;
    default: return logic;
  }
}

Type::Type() : rep_(scalar_rep(Kind::logic)) {}

Type Type::logic() { return Type(scalar_rep(Kind::logic)); }
Type Type::integer() { return Type(scalar_rep(Kind::integer)); }
Type Type::boolean() { return Type(scalar_rep(Kind::boolean)); }

Type Type::vector(unsigned width) {
  if (width < 1 || width > 64) {
    fail(ErrorKind::range, fmt::format("vector width {} outside supported range 1..64", width));
  }
  auto r = std::make_shared<Rep>();
  r->kind = Kind::vector;
  r->width = width;
  return Type(std::move(r));
}

Type Type::record(std::string name, std::vector<Field> fields) {
  if (fields.empty()) fail(ErrorKind::type, "record '" + name + "' has no fields");
  std::set<std::string> seen;
  for (const auto& f : fields) {
    if (!seen.insert(f.name).second) {
      fail(ErrorKind::type, fmt::format("record '{}' declares field '{}' twice", name, f.name));
    }
  }
  auto r = std::make_shared<Rep>();
  r->kind = Kind::record;
  r->name = std::move(name);
  r->fields = std::move(fields);
  return Type(std::move(r));
}

Type Type::array(const Type& element, std::size_t length) {
  if (length < 1) fail(ErrorKind::type, "array length must be at least 1");
  auto r = std::make_shared<Rep>();
  r->kind = Kind::array;
  r->length = length;
  r->element.push_back(element);
  return Type(std::move(r));
}

Kind Type::kind() const { return rep_->kind; }
unsigned Type::width() const { return rep_->width; }
const Type& Type::element() const { return rep_->element.at(0); }
std::size_t Type::length() const { return rep_->length; }
const std::string& Type::name() const { return rep_->name; }
const std::vector<Field>& Type::fields() const { return rep_->fields; }

int Type::field_index(std::string_view name) const {
  for (std::size_t i = 0; i < rep_->fields.size(); ++i) {
    if (rep_->fields[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::string Type::mangle() const {
  switch (kind()) {
    case Kind::logic: return "_sl";
    case Kind::vector: return fmt::format("_{}", width());
    case Kind::integer: return "_int";
    case Kind::boolean: return "_bool";
    case Kind::record: return "_" + name();
    case Kind::array: return fmt::format("{}_x{}", element().mangle(), length());
  }
  return {};
}

std::string Type::to_string() const {
  switch (kind()) {
    case Kind::logic: return "logic";
    case Kind::vector: return fmt::format("vector({})", width());
    case Kind::integer: return "integer";
    case Kind::boolean: return "boolean";
    case Kind::record: return "record " + name();
    case Kind::array: return fmt::format("array({}, {})", element().to_string(), length());
  }
  return {};
}

bool operator==(const Type& a, const Type& b) {
  if (a.rep_ == b.rep_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Kind::logic:
    case Kind::integer:
    case Kind::boolean: return true;
    case Kind::vector: return a.width() == b.width();
    case Kind::array: return a.length() == b.length() && a.element() == b.element();
    case Kind::record: {
      if (a.name() != b.name() || a.fields().size() != b.fields().size()) return false;
      for (std::size_t i = 0; i < a.fields().size(); ++i) {
        if (a.fields()[i].name != b.fields()[i].name) return false;
        if (a.fields()[i].type != b.fields()[i].type) return false;
      }
      return true;
    }
  }
  return false;
}

bool operator<(const Type& a, const Type& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  return a.to_string() < b.to_string();
}

// ---------------------------------------------------------------------------

std::uint64_t width_mask(unsigned width) {
  return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

Value::Value() : type_(Type::logic()), data_(Logic::undefined) {}

Value Value::logic(Logic level) {
  Value v;
  v.data_ = level;
  return v;
}

Value Value::vector(unsigned width, std::uint64_t payload) {
  Value v;
  v.type_ = Type::vector(width);
  v.data_ = payload & width_mask(width);
  return v;
}

Value Value::integer(std::int64_t i) {
  Value v;
  v.type_ = Type::integer();
  v.data_ = i;
  return v;
}

Value Value::boolean(bool b) {
  Value v;
  v.type_ = Type::boolean();
  v.data_ = b;
  return v;
}

Value Value::aggregate(const Type& type, Elements elements) {
  if (type.kind() == Kind::record) {
    if (elements.size() != type.fields().size()) {
      fail(ErrorKind::type, "aggregate size does not match " + type.to_string());
    }
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (elements[i].type() != type.fields()[i].type) {
        fail(ErrorKind::type, fmt::format("field '{}' of {} expects {}", type.fields()[i].name,
                                          type.to_string(), type.fields()[i].type.to_string()));
      }
    }
  } else if (type.kind() == Kind::array) {
    if (elements.size() != type.length()) {
      fail(ErrorKind::type, "aggregate size does not match " + type.to_string());
    }
    for (const auto& e : elements) {
      if (e.type() != type.element()) fail(ErrorKind::type, "array element type mismatch");
    }
  } else {
    fail(ErrorKind::type, "aggregate of non-composite type " + type.to_string());
  }
  Value v;
  v.type_ = type;
  v.data_ = std::move(elements);
  return v;
}

namespace {

Value fill(const Type& type, bool power_on) {
  switch (type.kind()) {
    case Kind::logic: return Value::logic(power_on ? Logic::undefined : Logic::zero);
    case Kind::vector: return Value::vector(type.width(), 0);
    case Kind::integer: return Value::integer(0);
    case Kind::boolean: return Value::boolean(false);
    case Kind::record: {
      Value::Elements e;
      for (const auto& f : type.fields()) e.push_back(fill(f.type, power_on));
      return Value::aggregate(type, std::move(e));
    }
    case Kind::array: {
      Value::Elements e(type.length(), fill(type.element(), power_on));
      return Value::aggregate(type, std::move(e));
    }
  }
  return {};
}

}  // namespace

Value Value::zero(const Type& type) { return fill(type, false); }
Value Value::initial(const Type& type) { return fill(type, true); }

Logic Value::as_logic() const {
  if (type_.kind() == Kind::logic) return std::get<Logic>(data_);
  if (type_.kind() == Kind::boolean) return std::get<bool>(data_) ? Logic::one : Logic::zero;
  fail(ErrorKind::type, "expected logic, found " + type_.to_string());
}

std::uint64_t Value::as_uint() const {
  switch (type_.kind()) {
    case Kind::vector: return std::get<std::uint64_t>(data_);
    case Kind::integer: return static_cast<std::uint64_t>(std::get<std::int64_t>(data_));
    case Kind::logic: return std::get<Logic>(data_) == Logic::one ? 1 : 0;
    case Kind::boolean: return std::get<bool>(data_) ? 1 : 0;
    default: fail(ErrorKind::type, "expected a numeric value, found " + type_.to_string());
  }
}

std::int64_t Value::as_int() const {
  if (type_.kind() == Kind::integer) return std::get<std::int64_t>(data_);
  return static_cast<std::int64_t>(as_uint());
}

bool Value::as_bool() const {
  if (type_.kind() == Kind::boolean) return std::get<bool>(data_);
  fail(ErrorKind::type, "expected boolean, found " + type_.to_string());
}

const Value::Elements& Value::elements() const {
  if (auto* e = std::get_if<Elements>(&data_)) return *e;
  fail(ErrorKind::type, "expected aggregate, found " + type_.to_string());
}

bool Value::truthy() const {
  switch (type_.kind()) {
    case Kind::logic: return std::get<Logic>(data_) == Logic::one;
    case Kind::boolean: return std::get<bool>(data_);
    case Kind::vector: return std::get<std::uint64_t>(data_) != 0;
    case Kind::integer: return std::get<std::int64_t>(data_) != 0;
    default: fail(ErrorKind::type, "value of " + type_.to_string() + " used as a condition");
  }
}

std::string Value::to_string() const {
  switch (type_.kind()) {
    case Kind::logic: {
      auto l = std::get<Logic>(data_);
      return l == Logic::zero ? "0" : l == Logic::one ? "1" : "U";
    }
    case Kind::vector: return std::to_string(std::get<std::uint64_t>(data_));
    case Kind::integer: return std::to_string(std::get<std::int64_t>(data_));
    case Kind::boolean: return std::get<bool>(data_) ? "true" : "false";
    case Kind::record: {
      std::string out = "{";
      const auto& e = elements();
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (i) out += ", ";
        out += type_.fields()[i].name + ": " + e[i].to_string();
      }
      return out + "}";
    }
    case Kind::array: {
      std::string out = "[";
      const auto& e = elements();
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (i) out += ", ";
        out += e[i].to_string();
      }
      return out + "]";
    }
  }
  return {};
}

namespace {

void append_bits(const Value& v, std::string& out) {
  switch (v.type().kind()) {
    case Kind::logic: {
      auto l = v.as_logic();
      out += l == Logic::zero ? '0' : l == Logic::one ? '1' : 'x';
      break;
    }
    case Kind::boolean: out += v.as_bool() ? '1' : '0'; break;
    case Kind::vector:
    case Kind::integer: {
      unsigned w = v.type().is_vector() ? v.type().width() : 64;
      auto u = v.as_uint();
      for (int i = static_cast<int>(w) - 1; i >= 0; --i) out += ((u >> i) & 1) ? '1' : '0';
      break;
    }
    case Kind::record:
    case Kind::array:
      for (const auto& e : v.elements()) append_bits(e, out);
      break;
  }
}

}  // namespace

std::string Value::to_vcd() const {
  if (type_.kind() == Kind::logic || type_.kind() == Kind::boolean) {
    std::string s;
    append_bits(*this, s);
    return s;
  }
  std::string bits;
  append_bits(*this, bits);
  auto first = bits.find_first_not_of('0');
  if (first == std::string::npos) return "b0";
  return "b" + bits.substr(first);
}

bool operator==(const Value& a, const Value& b) {
  return a.type_ == b.type_ && a.data_ == b.data_;
}

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::eq: return "==";
    case Relation::ne: return "!=";
    case Relation::lt: return "<";
    case Relation::le: return "<=";
    case Relation::gt: return ">";
    case Relation::ge: return ">=";
  }
  return "?";
}

namespace {

std::uint64_t literal_for_width(std::int64_t literal, unsigned width) {
  if (literal < 0 || (width < 64 && static_cast<std::uint64_t>(literal) > width_mask(width))) {
    fail(ErrorKind::range,
         fmt::format("literal {} does not fit a {}-bit vector", literal, width));
  }
  return static_cast<std::uint64_t>(literal);
}

}  // namespace

bool assignable(const Type& target, const Type& source, bool source_is_literal) {
  if (target == source) return true;
  if (source_is_literal && source.kind() == Kind::integer) {
    return target.kind() == Kind::vector || target.kind() == Kind::logic ||
           target.kind() == Kind::boolean;
  }
  return false;
}

Value assign_convert(const Type& target, const Value& v) {
  if (v.type() == target) return v;
  if (v.type().kind() == Kind::integer) {
    auto lit = v.as_int();
    switch (target.kind()) {
      case Kind::vector: return Value::vector(target.width(), literal_for_width(lit, target.width()));
      case Kind::logic:
        if (lit == 0 || lit == 1) return Value::logic(lit ? Logic::one : Logic::zero);
        fail(ErrorKind::range, fmt::format("literal {} is not a logic level", lit));
      case Kind::boolean: return Value::boolean(lit != 0);
      default: break;
    }
  }
  fail(ErrorKind::type, fmt::format("cannot assign {} to {}", v.type().to_string(),
                                    target.to_string()));
}

namespace {

// Brings both operands of an arithmetic/compare op onto a common vector
// width; integer literals adopt the width of the vector operand.
std::pair<Value, Value> unify(const Value& a, const Value& b, std::string_view what) {
  const auto ka = a.type().kind();
  const auto kb = b.type().kind();
  if (ka == Kind::vector && kb == Kind::vector) {
    if (a.type().width() != b.type().width()) {
      fail(ErrorKind::type, fmt::format("{} of vectors with different widths ({} vs {})", what,
                                        a.type().width(), b.type().width()));
    }
    return {a, b};
  }
  if (ka == Kind::vector && kb == Kind::integer) return {a, assign_convert(a.type(), b)};
  if (ka == Kind::integer && kb == Kind::vector) return {assign_convert(b.type(), a), b};
  if (ka == Kind::integer && kb == Kind::integer) return {a, b};
  fail(ErrorKind::type, fmt::format("{} not defined for {} and {}", what, a.type().to_string(),
                                    b.type().to_string()));
}

}  // namespace

Value add(const Value& a, const Value& b) {
  auto [x, y] = unify(a, b, "addition");
  if (x.type().kind() == Kind::integer) return Value::integer(x.as_int() + y.as_int());
  return Value::vector(x.type().width(), x.as_uint() + y.as_uint());
}

Value sub(const Value& a, const Value& b) {
  auto [x, y] = unify(a, b, "subtraction");
  if (x.type().kind() == Kind::integer) return Value::integer(x.as_int() - y.as_int());
  return Value::vector(x.type().width(), x.as_uint() - y.as_uint());
}

namespace {

template <class T>
bool relate(const T& x, const T& y, Relation rel) {
  switch (rel) {
    case Relation::eq: return x == y;
    case Relation::ne: return x != y;
    case Relation::lt: return x < y;
    case Relation::le: return x <= y;
    case Relation::gt: return x > y;
    case Relation::ge: return x >= y;
  }
  return false;
}

}  // namespace

Value compare(const Value& a, const Value& b, Relation rel) {
  const auto ka = a.type().kind();
  const auto kb = b.type().kind();
  const bool equality = rel == Relation::eq || rel == Relation::ne;
  if (ka == Kind::logic || kb == Kind::logic) {
    Value x = ka == Kind::logic ? a : assign_convert(Type::logic(), a);
    Value y = kb == Kind::logic ? b : assign_convert(Type::logic(), b);
    if (!equality) fail(ErrorKind::type, "only == and != are defined on logic");
    return Value::boolean(relate(x.as_logic(), y.as_logic(), rel));
  }
  if (ka == Kind::boolean && kb == Kind::boolean) {
    if (!equality) fail(ErrorKind::type, "only == and != are defined on boolean");
    return Value::boolean(relate(a.as_bool(), b.as_bool(), rel));
  }
  if ((ka == Kind::record || ka == Kind::array) && a.type() == b.type()) {
    if (!equality) fail(ErrorKind::type, "only == and != are defined on aggregates");
    return Value::boolean(relate(a == b, true, rel));
  }
  if ((ka == Kind::vector || ka == Kind::integer) && (kb == Kind::vector || kb == Kind::integer)) {
    auto [x, y] = unify(a, b, "comparison");
    if (x.type().kind() == Kind::integer) return Value::boolean(relate(x.as_int(), y.as_int(), rel));
    return Value::boolean(relate(x.as_uint(), y.as_uint(), rel));
  }
  fail(ErrorKind::type, fmt::format("cannot compare {} with {}", a.type().to_string(),
                                    b.type().to_string()));
}

namespace {

bool is_condition_kind(Kind k) { return k == Kind::logic || k == Kind::boolean; }

}  // namespace

Value logical_and(const Value& a, const Value& b) {
  if (!is_condition_kind(a.type().kind()) || !is_condition_kind(b.type().kind())) {
    fail(ErrorKind::type, "'and' expects logic or boolean operands");
  }
  if (a.type().is_logic() && b.type().is_logic()) {
    auto x = a.as_logic(), y = b.as_logic();
    if (x == Logic::zero || y == Logic::zero) return Value::logic(Logic::zero);
    if (x == Logic::one && y == Logic::one) return Value::logic(Logic::one);
    return Value::logic(Logic::undefined);
  }
  return Value::boolean(a.truthy() && b.truthy());
}

Value logical_or(const Value& a, const Value& b) {
  if (!is_condition_kind(a.type().kind()) || !is_condition_kind(b.type().kind())) {
    fail(ErrorKind::type, "'or' expects logic or boolean operands");
  }
  if (a.type().is_logic() && b.type().is_logic()) {
    auto x = a.as_logic(), y = b.as_logic();
    if (x == Logic::one || y == Logic::one) return Value::logic(Logic::one);
    if (x == Logic::zero && y == Logic::zero) return Value::logic(Logic::zero);
    return Value::logic(Logic::undefined);
  }
  return Value::boolean(a.truthy() || b.truthy());
}

Value logical_not(const Value& a) {
  if (a.type().is_logic()) {
    auto x = a.as_logic();
    if (x == Logic::undefined) return a;
    return Value::logic(x == Logic::one ? Logic::zero : Logic::one);
  }
  if (a.type().kind() == Kind::boolean) return Value::boolean(!a.as_bool());
  fail(ErrorKind::type, "'not' expects a logic or boolean operand");
}

Value v_switch(const Value& fallback, std::span<const SwitchCase> cases) {
  for (const auto& c : cases) {
    if (c.value.type() != fallback.type()) {
      fail(ErrorKind::type, fmt::format("v_switch branch of {} does not match default {}",
                                        c.value.type().to_string(), fallback.type().to_string()));
    }
  }
  for (const auto& c : cases) {
    if (c.condition.truthy()) return c.value;
  }
  return fallback;
}

Value reset(const Value& v) { return Value::zero(v.type()); }

}  // namespace hdlkit
