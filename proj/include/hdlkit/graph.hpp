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

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hdlkit/design.hpp"

namespace hdlkit {

/// Static connection diagram of an elaborated hierarchy.
struct ConnectionGraph {
  struct Node {
    std::string id;    // hierarchy path
    std::string kind;  // entity, port, signal
    std::string name;
    std::string type;  // entity type or data type / class name
    std::string direction;  // ports only: in, out
    std::optional<std::string> parent;
  };
  struct Edge {
    std::string from;
    std::string to;
    std::string kind;  // driver (scalar) or connection (interface)
  };
  std::string top;
  std::vector<Node> nodes;
  std::vector<Edge> edges;

  std::string to_dot() const;
  nlohmann::ordered_json to_json() const;
};

ConnectionGraph connection_graph(const Design& design, EntityId top);

}  // namespace hdlkit
