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

#include "hdlkit/simulator.hpp"

#include <fmt/format.h>
#include <fnmatch.h>

#include <algorithm>

#include "hdlkit/error.hpp"

namespace hdlkit {

nlohmann::ordered_json SimulationReport::to_json() const {
  nlohmann::ordered_json j;
  j["ticks"] = ticks;
  j["cycles"] = cycles;
  j["deltas"] = {{"total", deltas_total}, {"max_per_tick", max_deltas_per_tick}};
  j["committed_changes"] = committed_changes;
  j["traced_changes"] = traced_changes;
  j["activations"] = activations;
  j["final_values"] = final_values;
  return j;
}

/// HostContext over the running simulator; the frame is the host process's.
class Simulator::Host : public HostContext {
 public:
  Host(Simulator& sim, ExecFrame& frame) : sim_(sim), frame_(frame) {}

  std::uint64_t tick() const override { return sim_.now_; }

  Value read(Signal s) const override { return sim_.value(s.id()); }

  void write(Signal s, const Value& v) override {
    const auto& n = sim_.design_->node(s.id());
    sim_.store_.write(sim_.design_->root(s.id()), assign_convert(n.type, v));
  }

  bool truthy(const Object& h) override {
    const ClassDef& cls = h.cls();
    if (cls.truthy_fn.empty()) {
      fail(ErrorKind::truthiness, fmt::format("handler {} ({}) has no truthiness predicate",
                                              h.path(), cls.name));
    }
    const auto& fn = sim_.session_->specialize(cls, cls.truthy_fn, {});
    return sim_.call_result(fn, frame_, h.id()).truthy();
  }

  void send(const Object& h, const Value& v) override {
    const ClassDef& cls = h.cls();
    if (cls.assign_fn.empty()) fail(ErrorKind::type, "handler " + h.path() + " cannot be assigned");
    const auto& fn =
        sim_.session_->specialize(cls, cls.assign_fn, {ArgKey{v.type(), nullptr, ArgMode::value}});
    sim_.call(fn, frame_, h.id(), {Binding::rvalue(v)});
  }

  Value receive(const Object& h) override {
    const ClassDef& cls = h.cls();
    if (cls.value_fn.empty() || !cls.data_type) {
      fail(ErrorKind::type, "handler " + h.path() + " does not produce values");
    }
    const auto& fn = sim_.session_->specialize(
        cls, cls.value_fn, {ArgKey{*cls.data_type, nullptr, ArgMode::variable}});
    Value cell = Value::zero(*cls.data_type);
    sim_.call(fn, frame_, h.id(), {Binding::local(&cell)});
    return cell;
  }

 private:
  Simulator& sim_;
  ExecFrame& frame_;
};

namespace {

bool matches(const std::vector<std::string>& globs, const std::string& path) {
  if (globs.empty()) return true;
  return std::any_of(globs.begin(), globs.end(), [&](const std::string& g) {
    return fnmatch(g.c_str(), path.c_str(), 0) == 0;
  });
}

}  // namespace

Simulator::Simulator(Session& session, EntityId top, SimOptions options)
    : session_(&session),
      design_(&session.design()),
      top_(top),
      options_(std::move(options)),
      store_(session.design()),
      compiler_(session.design()),
      interpreter_(store_) {
  session.freeze(top);
  const Design& d = *design_;
  activations_.assign(d.process_count(), 0);
  compiled_.resize(d.process_count());
  for (auto e : d.hierarchy(top)) {
    const auto& rec = d.entity(e);
    if (rec.clock_source) clocks_.push_back(*rec.clock_source);
    for (auto pid : rec.processes) {
      const auto& p = d.process(pid);
      switch (p.kind) {
        case ProcessKind::rising_edge:
        case ProcessKind::host: subscribers_[d.root(*p.clock)].push_back(pid); break;
        case ProcessKind::combinational:
          for (auto n : p.captured) subscribers_[n].push_back(pid);
          break;
      }
      if (p.kind != ProcessKind::host && options_.engine == Engine::compiled) {
        compiled_[pid] = compiler_.compile(p.body);
      }
      for (auto h : p.handlers) {
        for (const char* which : {"pull", "push"}) {
          if (const auto* fn = handler_hook(session, h, which)) {
            hooks_[pid].push_back(Hook{std::string_view(which) == "pull", fn, h,
                                       *d.object(h).link});
          }
        }
      }
    }
    for (auto n : rec.nodes) {
      const auto& node = d.node(n);
      if (!node.type.is_scalar() || node.storage == Storage::constant) continue;
      bool variable = node.storage == Storage::variable;
      if (variable && !options_.trace_variables && !node.traced) continue;
      if (!matches(options_.trace, d.node_path(n))) continue;
      traced_.push_back(n);
      if (variable) traced_variables_.push_back(n);
    }
  }
  for (auto& [node, subs] : subscribers_) {
    std::sort(subs.begin(), subs.end());
    subs.erase(std::unique(subs.begin(), subs.end()), subs.end());
  }
}

Simulator::~Simulator() = default;

void Simulator::attach_vcd(std::ostream& out) {
  vcd_ = std::make_unique<VcdWriter>(out);
  vcd_->begin(*design_, top_, traced_);
}

Value Simulator::value(NodeId node) const { return design_->node(design_->root(node)).current; }

std::uint64_t Simulator::activations(ProcessId pid) const { return activations_.at(pid); }

void Simulator::call(const MemberFunction& fn, ExecFrame& frame, ObjectId self,
                     std::vector<Binding> args) {
  if (options_.engine == Engine::compiled) {
    compiler_.invoke(fn, frame, self, std::move(args));
  } else {
    interpreter_.call(fn, self, std::move(args));
  }
}

Value Simulator::call_result(const MemberFunction& fn, ExecFrame& frame, ObjectId self) {
  if (options_.engine == Engine::compiled) return compiler_.invoke_result(fn, frame, self);
  return interpreter_.call_result(fn, self);
}

void Simulator::run_process(ProcessId pid) {
  const auto& p = design_->process(pid);
  ++activations_[pid];
  ExecFrame frame{&store_, std::nullopt, {}};
  auto hooks = hooks_.find(pid);
  auto run_hooks = [&](bool pull) {
    if (hooks == hooks_.end()) return;
    for (const auto& h : hooks->second) {
      if (h.pull == pull) call(*h.fn, frame, h.handler, {Binding::object(h.link)});
    }
  };
  run_hooks(true);
  if (p.kind == ProcessKind::host) {
    Host host(*this, frame);
    p.host(host);
  } else if (options_.engine == Engine::compiled) {
    compiled_[pid](frame);
  } else {
    interpreter_.run(p.body, frame);
  }
  run_hooks(false);
}

std::vector<NodeId> Simulator::commit(std::map<NodeId, Value>& previous) {
  std::vector<NodeId> changed;
  auto dirty = std::move(store_.dirty());
  store_.dirty().clear();
  for (auto root : dirty) {
    auto& n = design_->node(root);
    if (!n.pending) continue;
    Value v = std::move(*n.pending);
    n.pending.reset();
    if (v == n.current) continue;
    previous.emplace(root, n.current);
    n.current = std::move(v);
    changed.push_back(root);
    ++committed_changes_;
    if (vcd_) vcd_->change(now_, root, n.current);
  }
  std::sort(changed.begin(), changed.end());
  return changed;
}

std::vector<NodeId> Simulator::step_delta() {
  std::map<NodeId, Value> previous;
  auto changed = commit(previous);
  const Value zero = Value::logic(Logic::zero);
  const Value one = Value::logic(Logic::one);
  for (auto root : changed) {
    auto it = subscribers_.find(root);
    if (it == subscribers_.end()) continue;
    bool rising = previous.at(root) == zero && design_->node(root).current == one;
    for (auto pid : it->second) {
      if (design_->process(pid).kind == ProcessKind::combinational || rising) queue_.insert(pid);
    }
  }
  if (!clocks_.empty()) {
    NodeId clk = design_->root(clocks_.front().node);
    auto it = previous.find(clk);
    if (it != previous.end() && it->second == zero && design_->node(clk).current == one) ++edges_;
  }
  auto run = std::move(queue_);
  queue_.clear();
  for (auto pid : run) run_process(pid);
  if (vcd_) {
    for (auto n : traced_variables_) vcd_->change(now_, design_->root(n), value(n));
  }
  recent_.push_back(changed);
  if (recent_.size() > 3) recent_.pop_front();
  return changed;
}

void Simulator::settle() {
  unsigned deltas = 0;
  recent_.clear();
  while (!store_.dirty().empty() || !queue_.empty()) {
    if (deltas >= options_.delta_limit) {
      std::set<std::string> nodes;
      for (const auto& set : recent_) {
        for (auto n : set) nodes.insert(design_->node_path(n));
      }
      std::string list;
      for (const auto& n : nodes) list += (list.empty() ? "" : ", ") + n;
      fail(ErrorKind::oscillation,
           fmt::format("no quiescence after {} deltas at tick {}; cycling nodes: {}",
                       options_.delta_limit, now_, list));
    }
    step_delta();
    ++deltas;
  }
  last_deltas_ = deltas;
  deltas_total_ += deltas;
  max_deltas_ = std::max(max_deltas_, deltas);
}

void Simulator::tick() {
  if (!started_) {
    started_ = true;
    // Combinational blocks evaluate once at time zero to establish outputs.
    for (auto e : design_->hierarchy(top_)) {
      for (auto pid : design_->entity(e).processes) {
        if (design_->process(pid).kind == ProcessKind::combinational) queue_.insert(pid);
      }
    }
  }
  for (const auto& c : clocks_) {
    bool high = (now_ % c.period) >= c.period / 2;
    store_.write(design_->root(c.node), Value::logic(high ? Logic::one : Logic::zero));
  }
  settle();
  ++ticks_;
  for (auto& fn : observers_) fn(*this);
  ++now_;
}

void Simulator::poke(NodeId node, const Value& v) {
  NodeId root = design_->root(node);
  store_.write(root, assign_convert(design_->node(root).type, v));
}

void Simulator::run(std::uint64_t ticks) {
  for (std::uint64_t i = 0; i < ticks; ++i) tick();
}

void Simulator::run_cycles(std::uint64_t cycles) {
  unsigned period = clocks_.empty() ? 2 : clocks_.front().period;
  run(cycles * period);
}

std::vector<NodeId> Simulator::recheck() {
  for (auto e : design_->hierarchy(top_)) {
    for (auto pid : design_->entity(e).processes) {
      if (design_->process(pid).kind == ProcessKind::combinational) queue_.insert(pid);
    }
  }
  std::set<NodeId> changed;
  std::vector<std::uint64_t> saved = activations_;
  while (!store_.dirty().empty() || !queue_.empty()) {
    for (auto n : step_delta()) changed.insert(n);
  }
  activations_ = std::move(saved);
  return {changed.begin(), changed.end()};
}

SimulationReport Simulator::report() const {
  const Design& d = *design_;
  SimulationReport r;
  r.ticks = ticks_;
  r.cycles = edges_;
  r.deltas_total = deltas_total_;
  r.max_deltas_per_tick = max_deltas_;
  r.committed_changes = committed_changes_;
  r.traced_changes = vcd_ ? vcd_->change_count() : 0;
  for (auto e : d.hierarchy(top_)) {
    for (auto n : d.entity(e).nodes) {
      const auto& node = d.node(n);
      if (node.hdl_name.empty() || !node.type.is_scalar()) continue;
      r.final_values[d.node_path(n)] = value(n).to_string();
    }
    for (auto pid : d.entity(e).processes) r.activations[d.process_path(pid)] = activations_[pid];
  }
  return r;
}

void Simulator::finish() {
  if (vcd_) vcd_->finish(now_);
}

}  // namespace hdlkit
