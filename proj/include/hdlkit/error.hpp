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

#include <stdexcept>
#include <string>
#include <string_view>

namespace hdlkit {

enum class ErrorKind {
  range,          // literal or init value outside the type's domain
  type,           // assignment, comparison, or connection type mismatch
  storage,        // writing a constant or an input port from inside its entity
  elaboration,    // naming, single-driver, missing end_architecture, ...
  connection,     // direction conflicts, self loops
  pipeline,       // missing or duplicate stream ports
  template_,      // arity mismatch, unsupported specialization
  no_progress,    // requeue loop stalled
  grammar,        // construct outside the convertible statement grammar
  naming,         // unnamed object reached the emitter or VCD writer
  oscillation,    // delta limit exceeded
  truthiness,     // handler without a truthiness predicate
  state,          // API used in the wrong lifecycle phase
  io,
  config,
  cosim,          // co-simulation bridge setup or session
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace hdlkit
