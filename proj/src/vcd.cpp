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

#include "hdlkit/vcd.hpp"

#include <fmt/format.h>

#include <functional>
#include <set>

#include "hdlkit/error.hpp"

namespace hdlkit {

VcdWriter::VcdWriter(std::ostream& out, std::string timescale)
    : out_(&out), timescale_(std::move(timescale)) {}

std::string VcdWriter::identifier(std::size_t n) {
  std::string id;
  do {
    id += static_cast<char>('!' + n % 94);
    n /= 94;
  } while (n-- > 0);
  return id;
}

namespace {

unsigned vcd_width(const Type& t) {
  switch (t.kind()) {
    case Kind::vector: return t.width();
    case Kind::integer: return 64;
    default: return 1;
  }
}

std::string vcd_line(const std::string& bits, const std::string& id) {
  return bits.front() == 'b' ? bits + " " + id : bits + id;
}

}  // namespace

void VcdWriter::begin(const Design& d, EntityId top, const std::vector<NodeId>& traced) {
  std::set<NodeId> wanted(traced.begin(), traced.end());
  std::map<EntityId, std::vector<NodeId>> by_entity;
  for (auto n : traced) by_entity[d.node(n).owner].push_back(n);

  auto& o = *out_;
  o << "$date\n    hdlkit simulation\n$end\n";
  o << "$version\n    hdlkit\n$end\n";
  o << "$timescale " << timescale_ << " $end\n";

  // Declaration order follows the hierarchy so identifiers are stable.
  std::vector<std::pair<NodeId, std::string>> order;
  auto declare = [&](NodeId n, int depth) {
    const auto& node = d.node(n);
    if (node.hdl_name.empty()) {
      fail(ErrorKind::naming, "traced node " + d.node_path(n) + " has no name");
    }
    NodeId root = d.root(n);
    auto it = ids_.find(root);
    if (it == ids_.end()) {
      it = ids_.emplace(root, Net{identifier(ids_.size()), ""}).first;
      order.emplace_back(root, it->second.id);
    }
    const char* kind = node.type.kind() == Kind::integer ? "integer"
                       : node.storage == Storage::variable ? "reg"
                                                           : "wire";
    o << std::string(static_cast<std::size_t>(depth) * 2, ' ')
      << fmt::format("$var {} {} {} {} $end\n", kind, vcd_width(node.type), it->second.id,
                     node.hdl_name);
  };
  std::function<void(EntityId, int)> scope = [&](EntityId e, int depth) {
    const auto& rec = d.entity(e);
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    o << pad << "$scope module " << rec.hdl_name << " $end\n";
    std::map<ProcessId, std::vector<NodeId>> locals;
    for (auto n : by_entity[e]) {
      if (d.node(n).process) {
        locals[*d.node(n).process].push_back(n);
      } else {
        declare(n, depth + 1);
      }
    }
    for (const auto& [pid, nodes] : locals) {
      o << pad << "  $scope begin " << d.process(pid).hdl_name << " $end\n";
      for (auto n : nodes) declare(n, depth + 2);
      o << pad << "  $upscope $end\n";
    }
    for (auto c : rec.children) scope(c, depth + 1);
    o << pad << "$upscope $end\n";
  };
  scope(top, 0);
  o << "$enddefinitions $end\n";
  o << "#0\n$dumpvars\n";
  for (const auto& [root, id] : order) {
    auto& net = ids_.at(root);
    net.last = d.node(root).current.to_vcd();
    o << vcd_line(net.last, id) << "\n";
  }
  o << "$end\n";
  time_ = 0;
  time_open_ = true;
}

void VcdWriter::change(std::uint64_t time, NodeId root, const Value& v) {
  auto it = ids_.find(root);
  if (it == ids_.end()) return;
  std::string bits = v.to_vcd();
  if (bits == it->second.last) return;
  if (!time_open_ || time != time_) {
    *out_ << "#" << time << "\n";
    time_ = time;
    time_open_ = true;
  }
  *out_ << vcd_line(bits, it->second.id) << "\n";
  it->second.last = std::move(bits);
  ++changes_;
}

void VcdWriter::finish(std::uint64_t time) {
  if (!time_open_ || time != time_) *out_ << "#" << time << "\n";
  time_ = time;
  time_open_ = true;
  out_->flush();
}

}  // namespace hdlkit
