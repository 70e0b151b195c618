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

#include "hdlkit/error.hpp"

namespace hdlkit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::range: return "range";
    case ErrorKind::type: return "type";
    case ErrorKind::storage: return "storage";
    case ErrorKind::elaboration: return "elaboration";
    case ErrorKind::connection: return "connection";
    case ErrorKind::pipeline: return "pipeline";
    case ErrorKind::template_: return "template";
    case ErrorKind::no_progress: return "no-progress";
    case ErrorKind::grammar: return "grammar";
    case ErrorKind::naming: return "naming";
    case ErrorKind::oscillation: return "oscillation";
    case ErrorKind::truthiness: return "truthiness";
    case ErrorKind::state: return "state";
    case ErrorKind::io: return "io";
    case ErrorKind::config: return "config";
    case ErrorKind::cosim: return "cosim";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace hdlkit
