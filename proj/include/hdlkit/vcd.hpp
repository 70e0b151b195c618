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
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "hdlkit/design.hpp"

namespace hdlkit {

/// Streams an IEEE 1364 value change dump. Aliased nodes (connected through
/// structural drivers) share the identifier of their net root.
class VcdWriter {
 public:
  explicit VcdWriter(std::ostream& out, std::string timescale = "1ns");

  /// Writes the header for `traced` and the initial $dumpvars block at #0.
  void begin(const Design& design, EntityId top, const std::vector<NodeId>& traced);
  /// Records a committed value of a traced net root; repeated values are dropped.
  void change(std::uint64_t time, NodeId root, const Value& v);
  /// Closes the document with a final timestamp.
  void finish(std::uint64_t time);

  bool traces(NodeId root) const { return ids_.count(root) != 0; }
  std::uint64_t change_count() const { return changes_; }

  /// Short printable identifier for the n-th net (base 94 from '!').
  static std::string identifier(std::size_t n);

 private:
  struct Net {
    std::string id;
    std::string last;
  };
  std::ostream* out_;
  std::string timescale_;
  std::map<NodeId, Net> ids_;
  std::uint64_t changes_ = 0;
  std::uint64_t time_ = 0;
  bool time_open_ = false;
};

}  // namespace hdlkit
