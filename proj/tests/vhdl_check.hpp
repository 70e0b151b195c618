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
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hdlkit/session.hpp"
#include "hdlkit/vhdl/converter.hpp"

namespace test {

/// Structural checks over emitted VHDL, written against the text rather
/// than the converter's internals.
struct StructureReport {
  std::vector<std::string> violations;
  std::size_t signal_assignments = 0;
  std::size_t variable_assignments = 0;
  std::size_t records = 0;
  std::size_t port_pairs = 0;
  std::size_t identifiers = 0;
};

namespace detail {

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(' ');
  if (b == std::string::npos) return "";
  return s.substr(b);
}

// Splits "a; b; c" at top-level semicolons.
inline std::vector<std::string> split_params(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ';' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

// record name -> field names, in order
inline std::map<std::string, std::vector<std::string>> records_of(const std::string& text) {
  std::map<std::string, std::vector<std::string>> out;
  static const std::regex head(R"(^\s*type (\w+) is record$)");
  static const std::regex field(R"(^\s*(\w+) : .+;$)");
  std::string current;
  for (const auto& l : lines_of(text)) {
    std::smatch m;
    if (std::regex_match(l, m, head)) {
      current = m[1];
      out[current];
    } else if (!current.empty() && trim(l).rfind("end record", 0) == 0) {
      current.clear();
    } else if (!current.empty() && std::regex_match(l, m, field)) {
      out[current].push_back(m[1]);
    }
  }
  return out;
}

}  // namespace detail

/// Assignment operators against declared storage, legal identifiers, no
/// requeue sentinel. Purely textual; works for any emitted document.
inline void check_document_text(const std::string& file, const std::string& text,
                                StructureReport& r) {
  using namespace detail;
  auto lines = lines_of(text);
  auto violation = [&](std::size_t i, const std::string& msg) {
    r.violations.push_back(file + ":" + std::to_string(i + 1) + ": " + msg);
  };
  if (text.find("$$missing_template$$") != std::string::npos) violation(0, "missing-template sentinel");

  static const std::regex port_line(R"(^\s*(\w+) : (in|out|inout) .+$)");
  static const std::regex signal_decl(R"(^\s*signal (\w+) : .+;$)");
  static const std::regex variable_decl(R"(^\s*variable (\w+) : .+;$)");
  static const std::regex subprogram(R"(^\s*(procedure|function) (\w+)\((.*)\)( return boolean)? is$)");
  static const std::regex process_head(R"(^\s*(\w+) : process.*$)");
  static const std::regex assignment(R"(^\s*(\w+)((?:\.\w+|\([^)]*\))*) (<=|:=) .+;$)");
  static const std::regex declared(
      R"(^\s*(?:entity|architecture \w+ of|package body|package|type|signal|variable|constant|procedure|function) (\w+)\b.*$)");
  static const std::regex label(R"(^\s*(\w+) : (?:process|entity)\b.*$)");

  std::set<std::string> file_signals;
  bool in_port = false;
  for (const auto& l : lines) {
    std::smatch m;
    if (trim(l) == "port (") in_port = true;
    else if (trim(l) == ");") in_port = false;
    else if (in_port && std::regex_match(l, m, port_line)) file_signals.insert(m[1]);
    if (std::regex_match(l, m, signal_decl)) file_signals.insert(m[1]);
  }

  std::set<std::string> scope_signals = file_signals;
  std::set<std::string> scope_variables;
  bool in_subprogram = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    std::smatch m;
    for (const auto* re : {&declared, &label}) {
      if (std::regex_match(l, m, *re)) {
        ++r.identifiers;
        if (!hdlkit::vhdl::is_legal_identifier(m[1])) violation(i, "illegal identifier " + m[1].str());
      }
    }
    if (std::regex_match(l, m, subprogram)) {
      in_subprogram = true;
      scope_signals.clear();
      scope_variables.clear();
      for (const auto& p : split_params(m[3])) {
        bool sig = p.rfind("signal ", 0) == 0;
        std::string name = sig ? p.substr(7) : p;
        name = name.substr(0, name.find(' '));
        if (!hdlkit::vhdl::is_legal_identifier(name)) violation(i, "illegal parameter " + name);
        (sig ? scope_signals : scope_variables).insert(name);
      }
      continue;
    }
    if (trim(l).rfind("end procedure", 0) == 0 || trim(l).rfind("end function", 0) == 0) {
      in_subprogram = false;
      scope_signals = file_signals;
      scope_variables.clear();
      continue;
    }
    if (!in_subprogram && std::regex_match(l, m, process_head)) {
      scope_variables.clear();
      continue;
    }
    if (trim(l).rfind("end process", 0) == 0) {
      scope_variables.clear();
      continue;
    }
    if (std::regex_match(l, m, variable_decl)) {
      scope_variables.insert(m[1]);
      continue;
    }
    std::string t = trim(l);
    if (t.rfind("signal ", 0) == 0 || t.rfind("constant ", 0) == 0 || t.rfind("if ", 0) == 0 ||
        t.rfind("elsif ", 0) == 0 || t.rfind("return ", 0) == 0) {
      continue;
    }
    if (!std::regex_match(l, m, assignment)) continue;
    std::string base = m[1];
    std::string op = m[3];
    if (scope_variables.count(base)) {
      ++r.variable_assignments;
      if (op != ":=") violation(i, "variable " + base + " assigned with " + op);
    } else if (scope_signals.count(base)) {
      ++r.signal_assignments;
      if (op != "<=") violation(i, "signal " + base + " assigned with " + op);
    } else {
      violation(i, "assignment to undeclared " + base);
    }
  }
}

/// Record partition of every converted class and m2s/s2m port pairs of
/// every converted entity, checked against the elaborated design.
inline void check_design_structure(const hdlkit::Session& s, const hdlkit::vhdl::ConversionResult& result,
                                   StructureReport& r) {
  using namespace hdlkit;
  using hdlkit::vhdl::legalize;
  const Design& d = s.design();
  std::map<std::string, const vhdl::VhdlDocument*> by_source;
  for (const auto& doc : result.documents) {
    for (const auto& src : doc.sources) by_source[src] = &doc;
  }

  for (const ClassDef* cls : s.classes()) {
    auto it = by_source.find(cls->name);
    if (it == by_source.end()) continue;
    auto recs = detail::records_of(it->second->render());
    std::map<std::string, std::vector<std::string>> expected;
    auto names_of = [&](auto pred) {
      std::vector<std::string> out;
      for (const auto& m : cls->members) {
        if (pred(m)) out.push_back(legalize(m.name));
      }
      return out;
    };
    std::size_t excluded = 0;
    switch (cls->kind) {
      case ClassKind::interface:
        expected[legalize(cls->name + "_m2s")] = names_of([](const MemberSpec& m) { return m.flow == Flow::m2s; });
        expected[legalize(cls->name + "_s2m")] = names_of([](const MemberSpec& m) { return m.flow == Flow::s2m; });
        break;
      case ClassKind::data:
        expected[legalize(cls->name)] = names_of([](const MemberSpec&) { return true; });
        break;
      case ClassKind::handler:
        expected[legalize(cls->name + "_sig")] =
            names_of([](const MemberSpec& m) { return m.storage == MemberStorage::signal; });
        expected[legalize(cls->name + "_var")] = names_of([](const MemberSpec& m) {
          return m.storage == MemberStorage::variable || m.storage == MemberStorage::inherit;
        });
        for (const auto& m : cls->members) excluded += m.storage == MemberStorage::free_type;
        break;
    }
    std::size_t placed = 0;
    for (const auto& [name, fields] : expected) {
      auto found = recs.find(name);
      if (fields.empty()) {
        // Empty records are illegal VHDL and must be elided.
        if (found != recs.end()) r.violations.push_back(cls->name + ": empty record " + name + " emitted");
        continue;
      }
      if (found == recs.end()) {
        r.violations.push_back(cls->name + ": record " + name + " missing");
        continue;
      }
      ++r.records;
      if (found->second != fields) r.violations.push_back(cls->name + ": record " + name + " fields differ");
      placed += fields.size();
    }
    // Partition: every member lands in exactly one record or is excluded.
    if (cls->kind != ClassKind::interface && placed + excluded != cls->members.size()) {
      r.violations.push_back(cls->name + ": member partition is not exact");
    }
  }

  for (std::size_t e = 0; e < d.entity_count(); ++e) {
    const auto& rec = d.entity(static_cast<EntityId>(e));
    auto it = by_source.find(rec.path);
    if (it == by_source.end()) continue;
    std::string text = it->second->render();
    for (const auto& p : rec.ports) {
      if (!p.is_object) continue;
      const auto& o = d.object(p.id);
      bool primary = o.port->direction == PortDirection::out;
      std::string base = legalize(o.hdl_name);
      for (Flow f : {Flow::m2s, Flow::s2m}) {
        if (o.cls->slots_with_flow(f).empty()) continue;
        bool out = (f == Flow::m2s) == primary;
        std::string side(to_string(f));
        std::string line = "        " + base + "_" + side + " : " + (out ? "out " : "in ") +
                           legalize(o.cls->name + "_" + side);
        if (text.find(line + ";\n") == std::string::npos && text.find(line + "\n") == std::string::npos) {
          r.violations.push_back(rec.path + ": port " + base + "_" + side + " missing or wrong direction");
        } else {
          ++r.port_pairs;
        }
      }
    }
  }
}

}  // namespace test
