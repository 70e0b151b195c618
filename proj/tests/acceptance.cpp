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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "hdlkit/cli.hpp"
#include "hdlkit/cosim.hpp"
#include "hdlkit/designs.hpp"
#include "hdlkit/simulator.hpp"
#include "hdlkit/vhdl/converter.hpp"
#include "support.hpp"
#include "vhdl_check.hpp"

using namespace hdlkit;
using namespace hdlkit::designs;
namespace fs = std::filesystem;

namespace {

// A criterion returns an empty string on success, otherwise the reason.
using Criterion = std::function<std::string()>;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool high(const Simulator& sim, Signal s) { return sim.value(s).as_logic() == Logic::one; }

const std::vector<std::string> corpus = {"my_first_test_bench", "counter_tb", "input_delay",
                                         "stream_delay_one",    "fifo_reader", "optional_tb"};

vhdl::ConversionResult convert(Session& s, const std::string& name) {
  Entity& top = find_design(name)->make(s, {});
  return vhdl::Converter(s, top.id()).run();
}

std::string counter_wrap() {
  auto t0 = Clock::now();
  Session s;
  auto& tb = s.make_top<MyFirstTestBench>("my_first_test_bench");
  Simulator sim(s, tb.id());
  std::uint64_t max_seen = 0;
  for (std::uint64_t n = 1; n <= 700; ++n) {
    sim.run_cycles(1);
    auto v = sim.value(tb.counter).as_uint();
    // Counts up; the edge that sees 300 loads 0.
    if (v != n % 301) return "counter " + std::to_string(v) + " after " + std::to_string(n) + " edges";
    max_seen = std::max(max_seen, v);
  }
  if (max_seen != 300) return "maximum " + std::to_string(max_seen);
  double t = seconds_since(t0);
  if (t >= 5.0) return "took " + std::to_string(t) + " s";
  return "";
}

std::string backpressure() {
  Session s;
  auto& tb = s.make_top<BackpressureTb>("backpressure_tb", 1234, 0.5);
  Simulator sim(s, tb.id());
  sim.run_cycles(10000);
  const auto& log = tb.log->entries;
  if (log.size() < 1000) return "only " + std::to_string(log.size()) + " words";
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (log[i].word != i) return "word " + std::to_string(i) + " is " + std::to_string(log[i].word);
  }
  return "";
}

std::string input_delay_latency() {
  Session s;
  auto& h = s.make_top<StreamHarness>(
      "h", [](Architecture& a, Signal clk) -> Entity& { return a.instantiate<InputDelay>("dut", clk); });
  auto& dut = static_cast<InputDelay&>(*h.dut);
  std::mt19937 rng(77);
  std::vector<std::uint64_t> words(100);
  for (auto& w : words) w = rng();
  for (auto w : words) h.input->push_back(w);

  Simulator sim(s, h.id());
  Signal in_valid = dut.D_In.member("valid"), in_ready = dut.D_In.member("ready"),
         in_data = dut.D_In.member("data");
  Signal out_valid = dut.D_Out.member("valid"), out_ready = dut.D_Out.member("ready"),
         out_data = dut.D_Out.member("data");
  std::deque<std::pair<std::uint64_t, std::uint64_t>> in_flight;  // (word, entry step)
  std::size_t exited = 0;
  for (std::uint64_t step = 0; step < 1000 && exited < words.size(); ++step) {
    sim.run(1);  // low phase
    bool enter = high(sim, in_valid) && high(sim, in_ready);
    bool leave = high(sim, out_valid) && high(sim, out_ready);
    auto entering = sim.value(in_data).as_uint();
    auto leaving = sim.value(out_data).as_uint();
    sim.run(1);  // rising edge: handshakes sampled above complete here
    if (enter) in_flight.emplace_back(entering, step);
    if (leave) {
      if (in_flight.empty()) return "word left before entering";
      auto [word, entry] = in_flight.front();
      in_flight.pop_front();
      if (word != leaving) return "word order or value changed";
      if (step - entry != 2) return "latency " + std::to_string(step - entry) + " handshake steps";
      ++exited;
    }
  }
  if (exited != words.size()) return std::to_string(exited) + " of 100 words left the design";
  return "";
}

std::string optional_trace() {
  Session s;
  auto& tb = s.make_top<OptionalTb>("optional_tb");
  Simulator sim(s, tb.id());
  Signal valid = tb.opt_data.member("valid"), data = tb.opt_data.member("data");
  std::uint64_t held = 0, transfers = 0;
  bool prev_valid = false;
  for (int c = 0; c < 200; ++c) {
    sim.run_cycles(1);
    bool v = high(sim, valid);
    auto d = sim.value(data).as_uint();
    if (v) {
      if (prev_valid) return "valid held for two cycles";
      if (sim.value(tb.data).as_uint() != d) return "vector and optional_t disagree";
      ++transfers;
      held = d;
    } else if (d != held) {
      return "data changed while valid was low";
    }
    prev_valid = v;
  }
  if (transfers < 18) return "only " + std::to_string(transfers) + " transfers";
  return "";
}

std::string fifo_gating() {
  Session s;
  auto& tb = s.make_top<FifoGateTb>("fifo_gate_tb");
  Simulator sim(s, tb.id());
  Signal empty = tb.link.member("empty"), enable = tb.link.member("enable");
  std::mt19937 rng(5);
  std::size_t requests = 0;
  for (int t = 0; t < 1000; ++t) {
    bool e = rng() % 2 == 0;
    sim.poke(empty, Value::logic(e ? Logic::one : Logic::zero));
    sim.tick();
    bool en = high(sim, enable);
    if (e && en) return "enable high while empty at tick " + std::to_string(t);
    requests += en;
  }
  if (requests == 0) return "the reader never requested a word";
  return "";
}

std::string conversion_bound() {
  const fs::path golden = fs::path(HDLKIT_SOURCE_DIR) / "tests" / "golden";
  for (const auto& name : corpus) {
    Session s1, s2;
    auto r1 = convert(s1, name);
    auto r2 = convert(s2, name);
    if (r1.passes > 3) return name + ": " + std::to_string(r1.passes) + " passes";
    if (r1.documents.size() != r2.documents.size()) return name + ": file count differs between runs";
    for (std::size_t i = 0; i < r1.documents.size(); ++i) {
      auto text = r1.documents[i].render();
      if (text.find("$$missing_template$$") != std::string::npos) return name + ": sentinel in output";
      if (text != r2.documents[i].render()) return name + ": " + r1.documents[i].file + " differs between runs";
      if (text != read_file(golden / name / r1.documents[i].file)) {
        return name + ": " + r1.documents[i].file + " differs from the reference output";
      }
    }
  }
  return "";
}

std::string structure() {
  for (const auto& name : corpus) {
    Session s;
    auto r = convert(s, name);
    test::StructureReport report;
    for (const auto& d : r.documents) test::check_document_text(d.file, d.render(), report);
    test::check_design_structure(s, r, report);
    if (!report.violations.empty()) return name + ": " + report.violations.front();
    if (report.signal_assignments + report.variable_assignments == 0) return name + ": no assignments checked";
  }
  return "";
}

std::string vcd_grammar() {
  std::vector<std::function<Entity&(Session&)>> designs = {
      [](Session& s) -> Entity& { return s.make_top<MyFirstTestBench>("t"); },
      [](Session& s) -> Entity& { return s.make_top<CounterTb>("tb"); },
      [](Session& s) -> Entity& { return s.make_top<OptionalTb>("optional_tb"); },
      [](Session& s) -> Entity& { return s.make_top<BackpressureTb>("bp", 3, 0.5); },
      [](Session& s) -> Entity& { return s.make_top<FifoTb>("fifo_tb", 1); },
  };
  for (std::size_t i = 0; i < designs.size(); ++i) {
    Session s;
    Entity& top = designs[i](s);
    Simulator sim(s, top.id());
    std::ostringstream out;
    sim.attach_vcd(out);
    sim.run_cycles(500);
    sim.finish();
    auto check = test::check_vcd(out.str());
    if (!check.ok) return top.path() + ": " + check.error;
    if (check.changes != sim.committed_changes()) {
      return top.path() + ": " + std::to_string(check.changes) + " value changes, " +
             std::to_string(sim.committed_changes()) + " committed";
    }
  }
  return "";
}

std::string cosim_tcp() {
  auto t0 = Clock::now();
  std::mt19937 rng(2024);
  std::vector<std::uint32_t> words(1000);
  for (auto& w : words) w = static_cast<std::uint32_t>(rng());

  const auto* info = find_design("stream_delay_one");
  Session ref_session;
  cosim::Bridge reference(ref_session, ref_session.make_top<StreamHarness>("ref", info->stream));
  auto expected = reference.drive_words(words);
  if (expected != words) return "direct reference does not reproduce the input";

  Session s;
  cosim::Bridge bridge(s, s.make_top<StreamHarness>("cosim", info->stream));
  bridge.listen(0);
  std::thread server([&] { bridge.serve_client(); });
  std::vector<std::uint32_t> got;
  std::string err;
  try {
    cosim::Client client("127.0.0.1", bridge.port());
    got = client.exchange(words);
  } catch (const std::exception& e) {
    err = e.what();
  }
  server.join();
  if (!err.empty()) return err;
  if (got != expected) return "TCP output differs from the direct reference";
  double t = seconds_since(t0);
  if (t >= 10.0) return "took " + std::to_string(t) + " s";
  return "";
}

std::string determinism() {
  auto artifacts = [](const fs::path& dir) {
    fs::remove_all(dir);
    bool ok = true;
    auto cmd = [&](std::vector<std::string> args) {
      std::ostringstream out, err;
      ok = ok && cli::run(args, out, err) == 0;
    };
    for (const std::string top : {"counter_tb", "optional_tb", "backpressure_tb"}) {
      std::string d = (dir / top).string();
      if (top != "backpressure_tb") cmd({"build", "--top", top, "--out-dir", d});
      cmd({"sim", "--top", top, "--cycles", "300", "--seed", "9", "--out-dir", d});
      cmd({"graph", "--top", top, "--format", "json", "--out-dir", d});
      cmd({"graph", "--top", top, "--out-dir", d});
    }
    if (!ok) return std::map<std::string, std::string>{};
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_file(e.path());
    }
    fs::remove_all(dir);
    return files;
  };
  auto base = fs::temp_directory_path();
  auto a = artifacts(base / "hdlkit_acceptance_a");
  auto b = artifacts(base / "hdlkit_acceptance_b");
  if (a.empty()) return "a command failed";
  if (a.size() != b.size()) return "artifact sets differ";
  for (const auto& [file, text] : a) {
    auto it = b.find(file);
    if (it == b.end() || it->second != text) return file + " differs between runs";
  }
  return "";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Criterion>> criteria = {
      {"counter wraps at 300 over 700 cycles in under 5 s", counter_wrap},
      {"backpressured stream delivers 0..N-1 over 10^4 cycles", backpressure},
      {"InputDelay preserves 100 words with latency of 2 handshake steps", input_delay_latency},
      {"optional_t valid pulses with data held between transfers", optional_trace},
      {"native FIFO enable stays low whenever empty is high", fifo_gating},
      {"corpus converts in at most 3 passes, without sentinel, reproducibly", conversion_bound},
      {"emitted VHDL passes the structural checks", structure},
      {"VCD output is well formed and counts every committed change", vcd_grammar},
      {"1000 words over TCP match the direct reference within 10 s", cosim_tcp},
      {"build, sim and graph artifacts are byte-identical across runs", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string why;
    try {
      why = criteria[i].second();
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    std::cout << (why.empty() ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first;
    if (!why.empty()) std::cout << ": " << why;
    std::cout << "\n";
    failed += !why.empty();
  }
  return failed == 0 ? 0 : 1;
}
