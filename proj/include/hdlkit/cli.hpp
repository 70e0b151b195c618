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
#include <iosfwd>
#include <string>
#include <vector>

#include "hdlkit/error.hpp"

namespace hdlkit::cli {

/// Flat key=value project file. Flags override it; it overrides defaults.
struct ProjectConfig {
  std::string top;
  std::string out_dir = "gen";
  std::uint64_t cycles = 1000;
  std::string vcd;
  std::vector<std::string> trace;
  std::uint64_t seed = 0;
};

ProjectConfig parse_config(std::istream& in, const std::string& origin);
ProjectConfig load_config(const std::string& path);

enum ExitCode : int {
  ok = 0,
  usage = 1,
  no_progress = 2,
  elaboration = 3,
  oscillation = 4,
  io = 5,
  grammar = 6,
  cosim = 7,
};

int exit_code(ErrorKind kind);

/// Runs the command line; diagnostics start with "error[<kind>]: ".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hdlkit::cli
