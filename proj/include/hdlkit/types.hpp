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
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hdlkit {

enum class Logic : std::uint8_t { zero, one, undefined };

enum class Kind : std::uint8_t { logic, vector, integer, boolean, record, array };

class Type;

struct Field;

/// Structural type descriptor. Two descriptors compare equal iff their kinds
/// and all parameters are equal; this equality keys monomorphization.
class Type {
 public:
  static Type logic();
  static Type vector(unsigned width);
  static Type integer();
  static Type boolean();
  static Type record(std::string name, std::vector<Field> fields);
  static Type array(const Type& element, std::size_t length);

  Type();  // logic

  Kind kind() const;
  unsigned width() const;               // vector only
  const Type& element() const;          // array only
  std::size_t length() const;           // array only
  const std::string& name() const;      // record only
  const std::vector<Field>& fields() const;  // record only
  int field_index(std::string_view name) const;

  bool is_logic() const { return kind() == Kind::logic; }
  bool is_vector() const { return kind() == Kind::vector; }
  bool is_scalar() const { return kind() != Kind::record && kind() != Kind::array; }

  /// Suffix used when naming specializations: _32, _sl, _<record>, _<elem>_x<len>.
  std::string mangle() const;
  std::string to_string() const;

  friend bool operator==(const Type& a, const Type& b);
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }
  friend bool operator<(const Type& a, const Type& b);

 private:
  struct Rep;
  static const std::shared_ptr<const Rep>& scalar_rep(Kind kind);
  explicit Type(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

struct Field {
  std::string name;
  Type type;
};

/// Immutable value snapshot. Vector payloads are always reduced modulo 2^width.
class Value {
 public:
  using Elements = std::vector<Value>;

  Value();  // logic U

  static Value logic(Logic level);
  static Value vector(unsigned width, std::uint64_t payload);
  static Value integer(std::int64_t v);
  static Value boolean(bool v);
  static Value aggregate(const Type& type, Elements elements);

  /// All-zero value (the reset value) of a type; records recurse.
  static Value zero(const Type& type);
  /// Power-on value: single bits start at U, everything else at zero.
  static Value initial(const Type& type);

  const Type& type() const { return type_; }
  Logic as_logic() const;
  std::uint64_t as_uint() const;
  std::int64_t as_int() const;
  bool as_bool() const;
  const Elements& elements() const;

  /// Logic 1 and boolean true are truthy; vectors and integers when nonzero.
  bool truthy() const;

  std::string to_string() const;
  /// VCD payload without identifier: "0"/"1"/"x" for bits, "b101" for vectors.
  std::string to_vcd() const;

  friend bool operator==(const Value& a, const Value& b);
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

 private:
  Type type_;
  std::variant<Logic, std::uint64_t, std::int64_t, bool, Elements> data_;
};

std::uint64_t width_mask(unsigned width);

enum class Relation { eq, ne, lt, le, gt, ge };
std::string_view to_string(Relation r);

/// Converts `v` so it can be stored into a cell of `target`: identical types
/// pass through; integer literals adopt vector widths (range-checked) or map
/// 0/1 onto logic levels. Anything else is an assignment-type error.
Value assign_convert(const Type& target, const Value& v);

/// True if a value of type `source` (or an integer literal when
/// `source_is_literal`) may be assigned to `target`.
bool assignable(const Type& target, const Type& source, bool source_is_literal);

Value add(const Value& a, const Value& b);
Value sub(const Value& a, const Value& b);
Value compare(const Value& a, const Value& b, Relation rel);
Value logical_and(const Value& a, const Value& b);
Value logical_or(const Value& a, const Value& b);
Value logical_not(const Value& a);

struct SwitchCase {
  Value condition;
  Value value;
};

/// First case whose condition holds wins; otherwise the default. All branch
/// values must share one type.
Value v_switch(const Value& fallback, std::span<const SwitchCase> cases);

/// Reset value for a resettable scalar or record type (all zero).
Value reset(const Value& v);

}  // namespace hdlkit
