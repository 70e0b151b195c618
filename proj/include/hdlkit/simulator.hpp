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
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "hdlkit/entity.hpp"
#include "hdlkit/exec.hpp"
#include "hdlkit/vcd.hpp"

namespace hdlkit {

enum class Engine : std::uint8_t { compiled, interpreted };

struct SimOptions {
  unsigned delta_limit = 1000;
  Engine engine = Engine::compiled;
  /// Path globs selecting traced nets; empty traces every named signal.
  std::vector<std::string> trace;
  bool trace_variables = false;
};

struct SimulationReport {
  std::uint64_t ticks = 0;
  std::uint64_t cycles = 0;
  std::map<std::string, std::string> final_values;
  std::map<std::string, std::uint64_t> activations;
  std::uint64_t deltas_total = 0;
  unsigned max_deltas_per_tick = 0;
  std::uint64_t committed_changes = 0;
  std::uint64_t traced_changes = 0;

  nlohmann::ordered_json to_json() const;
};

/// Event-driven delta-cycle scheduler over a frozen design.
///
/// Each tick: clock sources drive their level, then deltas repeat until no
/// signal is pending and no process is queued. A delta commits pending
/// values, wakes subscribers of the nets that changed (clocked processes only
/// on a literal 0 to 1 edge), and runs them in ascending process id.
class Simulator {
 public:
  Simulator(Session& session, EntityId top, SimOptions options = {});
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Streams a VCD for the traced nets from the current state on.
  void attach_vcd(std::ostream& out);

  void run(std::uint64_t ticks);
  /// Runs `cycles` periods of the first clock source (2 ticks when none).
  void run_cycles(std::uint64_t cycles);
  void tick();

  /// One commit-and-activate round; returns the net roots whose committed
  /// value changed, ascending.
  std::vector<NodeId> step_delta();
  /// Queues every combinational process and settles; the changed roots
  /// (expected empty) are returned.
  std::vector<NodeId> recheck();

  /// Schedules `v` on the net of `node`; it commits in the next delta.
  void poke(NodeId node, const Value& v);
  void poke(Signal s, const Value& v) { poke(s.id(), v); }

  /// Called after every completed tick.
  void add_observer(std::function<void(Simulator&)> fn) { observers_.push_back(std::move(fn)); }

  std::uint64_t now() const { return now_; }
  /// Ticks completed so far.
  std::uint64_t ticks() const { return ticks_; }
  Value value(Signal s) const { return s.value(); }
  Value value(NodeId node) const;
  std::uint64_t activations(ProcessId pid) const;
  std::uint64_t committed_changes() const { return committed_changes_; }
  unsigned last_tick_deltas() const { return last_deltas_; }
  const std::vector<NodeId>& traced() const { return traced_; }
  Session& session() const { return *session_; }
  Store& store() { return store_; }

  SimulationReport report() const;
  void finish();

 private:
  class Host;
  struct Hook {
    bool pull = true;
    const MemberFunction* fn = nullptr;
    ObjectId handler = 0;
    ObjectId link = 0;
  };
  void run_process(ProcessId pid);
  void call(const MemberFunction& fn, ExecFrame& frame, ObjectId self, std::vector<Binding> args);
  Value call_result(const MemberFunction& fn, ExecFrame& frame, ObjectId self);
  void settle();
  std::vector<NodeId> commit(std::map<NodeId, Value>& previous);

  Session* session_;
  Design* design_;
  EntityId top_;
  SimOptions options_;
  Store store_;
  Compiler compiler_;
  Interpreter interpreter_;
  std::vector<Compiler::Fn> compiled_;
  std::map<NodeId, std::vector<ProcessId>> subscribers_;
  std::map<ProcessId, std::vector<Hook>> hooks_;
  std::vector<ClockSource> clocks_;
  std::set<ProcessId> queue_;
  std::vector<std::uint64_t> activations_;
  std::vector<NodeId> traced_;
  std::vector<NodeId> traced_variables_;
  std::deque<std::vector<NodeId>> recent_;
  std::vector<std::function<void(Simulator&)>> observers_;
  std::unique_ptr<VcdWriter> vcd_;
  std::uint64_t now_ = 0;
  std::uint64_t ticks_ = 0;
  std::uint64_t deltas_total_ = 0;
  unsigned max_deltas_ = 0;
  unsigned last_deltas_ = 0;
  std::uint64_t committed_changes_ = 0;
  std::uint64_t edges_ = 0;
  bool started_ = false;
};

}  // namespace hdlkit
