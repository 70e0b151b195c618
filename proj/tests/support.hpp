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

#include <cctype>
#include <cstdint>
#include <cstring>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hdlkit/designs.hpp"
#include "hdlkit/entity.hpp"
#include "hdlkit/error.hpp"

namespace test {

/// Entity elaborated by a lambda; exposes the port helpers to tests.
class Fixture : public hdlkit::Entity {
 public:
  using Body = std::function<void(Fixture&, hdlkit::Architecture&)>;
  using Ports = std::function<void(Fixture&)>;

  Fixture(hdlkit::Session& s, std::string name, const Body& body, const Ports& ports = {})
      : Entity(s, "fixture", std::move(name)) {
    if (ports) ports(*this);
    auto a = begin_architecture();
    body(*this, a);
    a.end();
  }

  using Entity::bind_input;
  using Entity::pipeline_in;
  using Entity::pipeline_out;
  using Entity::port_in;
  using Entity::port_out;
  using Entity::port_primary;
  using Entity::port_secondary;
  using Entity::set_sim_only;
};

/// Runs `fn` and returns the ErrorKind it threw; fails the check otherwise.
inline std::optional<hdlkit::ErrorKind> error_kind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const hdlkit::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

/// Minimal independent VCD reader. It checks the header grammar, variable
/// declarations, monotonically increasing timestamps, and that every value
/// change refers to a declared identifier with a payload fitting its width.
struct VcdCheck {
  bool ok = false;
  std::string error;
  std::map<std::string, unsigned> widths;  // id -> width
  std::map<std::string, std::string> names;
  std::size_t initial_values = 0;  // inside $dumpvars
  std::size_t changes = 0;         // after $dumpvars
  std::vector<std::uint64_t> times;
  /// id -> (time, payload) sequence, dumpvars included
  std::map<std::string, std::vector<std::pair<std::uint64_t, std::string>>> trace;
};

inline VcdCheck check_vcd(const std::string& text) {
  VcdCheck r;
  std::istringstream in(text);
  std::vector<std::string> tok;
  for (std::string t; in >> t;) tok.push_back(t);
  std::size_t i = 0;
  auto bad = [&](const std::string& msg) {
    r.error = msg + " at token " + std::to_string(i);
    return r;
  };
  auto skip_to_end = [&]() {
    while (i < tok.size() && tok[i] != "$end") ++i;
    if (i == tok.size()) return false;
    ++i;
    return true;
  };
  int depth = 0;
  bool seen_timescale = false;
  while (true) {
    if (i >= tok.size()) return bad("missing $enddefinitions");
    const std::string& t = tok[i++];
    if (t == "$date" || t == "$version" || t == "$comment") {
      if (!skip_to_end()) return bad("unterminated " + t);
    } else if (t == "$timescale") {
      if (i + 1 >= tok.size() || tok[i + 1] != "$end") return bad("bad $timescale");
      const std::string& ts = tok[i];
      std::size_t k = 0;
      while (k < ts.size() && std::isdigit(static_cast<unsigned char>(ts[k]))) ++k;
      std::string num = ts.substr(0, k), unit = ts.substr(k);
      if ((num != "1" && num != "10" && num != "100") ||
          !std::set<std::string>{"s", "ms", "us", "ns", "ps", "fs"}.count(unit)) {
        return bad("bad timescale value " + ts);
      }
      seen_timescale = true;
      i += 2;
    } else if (t == "$scope") {
      if (i + 2 >= tok.size() || tok[i + 2] != "$end") return bad("bad $scope");
      i += 3;
      ++depth;
    } else if (t == "$upscope") {
      if (i >= tok.size() || tok[i] != "$end" || depth == 0) return bad("bad $upscope");
      ++i;
      --depth;
    } else if (t == "$var") {
      if (i + 4 >= tok.size() || tok[i + 4] != "$end") return bad("bad $var");
      if (depth == 0) return bad("$var outside a scope");
      static const std::set<std::string> kinds = {"wire", "reg", "integer", "real"};
      if (!kinds.count(tok[i])) return bad("bad var kind " + tok[i]);
      unsigned width = static_cast<unsigned>(std::stoul(tok[i + 1]));
      if (width == 0) return bad("zero width");
      const std::string& id = tok[i + 2];
      for (char c : id) {
        if (c < 33 || c > 126) return bad("bad identifier");
      }
      // Aliases may share an identifier; the width must then agree.
      auto known = r.widths.find(id);
      if (known != r.widths.end()) {
        if (known->second != width) return bad("identifier " + id + " redeclared with another width");
      } else {
        r.widths[id] = width;
        r.names[id] = tok[i + 3];
      }
      i += 5;
    } else if (t == "$enddefinitions") {
      if (i >= tok.size() || tok[i] != "$end") return bad("bad $enddefinitions");
      ++i;
      break;
    } else {
      return bad("unexpected header token " + t);
    }
  }
  if (depth != 0) return bad("unbalanced scopes");
  if (!seen_timescale) return bad("missing $timescale");

  bool in_dump = false;
  bool have_time = false;
  std::uint64_t now = 0;
  auto value_change = [&](const std::string& payload, const std::string& id) -> bool {
    auto w = r.widths.find(id);
    if (w == r.widths.end()) return false;
    if (payload.size() > 1 && (payload[0] == 'b' || payload[0] == 'B')) {
      std::string bits = payload.substr(1);
      if (bits.empty() || bits.size() > w->second) return false;
      for (char c : bits) {
        if (!std::strchr("01xXzZ", c)) return false;
      }
    } else {
      if (payload.size() != 1 || !std::strchr("01xXzZ", payload[0]) || w->second != 1) return false;
    }
    r.trace[id].push_back({now, payload});
    (in_dump ? r.initial_values : r.changes)++;
    return true;
  };
  while (i < tok.size()) {
    const std::string& t = tok[i++];
    if (t[0] == '#') {
      std::uint64_t when = std::stoull(t.substr(1));
      if (have_time && when <= now) return bad("non-increasing time " + t);
      now = when;
      have_time = true;
      r.times.push_back(when);
    } else if (t == "$dumpvars") {
      if (!have_time) return bad("$dumpvars before a timestamp");
      in_dump = true;
    } else if (t == "$end") {
      if (!in_dump) return bad("stray $end");
      in_dump = false;
    } else if (t[0] == 'b' || t[0] == 'B') {
      if (i >= tok.size()) return bad("vector change without identifier");
      if (!have_time) return bad("change before a timestamp");
      if (!value_change(t, tok[i++])) return bad("bad vector change " + t);
    } else {
      if (!have_time) return bad("change before a timestamp");
      if (!value_change(t.substr(0, 1), t.substr(1))) return bad("bad scalar change " + t);
    }
  }
  if (in_dump) return bad("unterminated $dumpvars");
  r.ok = true;
  return r;
}

}  // namespace test
