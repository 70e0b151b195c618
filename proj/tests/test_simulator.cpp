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

#include <random>
#include <set>
#include <sstream>

#include "doctest.h"

#include "hdlkit/designs.hpp"
#include "hdlkit/simulator.hpp"
#include "hdlkit/vcd.hpp"
#include "support.hpp"

using namespace hdlkit;
using namespace hdlkit::designs;
using test::check_vcd;
using test::error_kind;
using test::Fixture;

namespace {

// Closed form of the wrapping counter after n rising edges: it counts up
// and the edge that sees counter >= 300 loads zero.
std::uint64_t counter_oracle(std::uint64_t n) { return n % 301; }

std::string simulate_vcd(const std::function<Entity&(Session&)>& make, std::uint64_t cycles,
                         SimOptions options = {}) {
  Session s;
  Entity& top = make(s);
  Simulator sim(s, top.id(), options);
  std::ostringstream out;
  sim.attach_vcd(out);
  sim.run_cycles(cycles);
  sim.finish();
  return out.str();
}

}  // namespace

TEST_CASE("counter wraps at max_cnt") {
  Session s;
  auto& tb = s.make_top<MyFirstTestBench>("my_first_test_bench");
  Simulator sim(s, tb.id());
  std::uint64_t edges = 0, max_seen = 0;
  for (int c = 0; c < 700; ++c) {
    sim.run_cycles(1);
    ++edges;
    auto v = sim.value(tb.counter).as_uint();
    REQUIRE(v == counter_oracle(edges));
    max_seen = std::max(max_seen, v);
  }
  CHECK(max_seen == 300);
}

TEST_CASE("zero ticks: initial values and no activations") {
  Session s;
  auto& tb = s.make_top<MyFirstTestBench>("my_first_test_bench");
  Simulator sim(s, tb.id());
  sim.run(0);
  auto r = sim.report();
  CHECK(r.ticks == 0);
  CHECK(r.final_values.at("my_first_test_bench/counter") == "0");
  CHECK(r.final_values.at("my_first_test_bench/max_cnt") == "300");
  CHECK(r.activations.at("my_first_test_bench/proc") == 0);
}

TEST_CASE("step_delta") {
  Session s;
  Signal a, b, c;
  auto& top = s.make_top<Fixture>("top", [&](Fixture&, Architecture& arch) {
    a = arch.vector("a", 8);
    b = arch.vector("b", 8);
    c = arch.vector("c", 8);
    arch.combinational("ab", [&](ProcessBuilder& p) { p.drive(b, a + 1); });
    arch.combinational("bc", [&](ProcessBuilder& p) { p.drive(c, b + 1); });
  });
  Simulator sim(s, top.id());
  sim.tick();  // establish outputs: b = 1, c = 2
  CHECK(sim.value(c).as_uint() == 2);

  CHECK(sim.step_delta().empty());  // nothing pending

  sim.poke(a, Value::vector(8, 0));  // same value: no change, no wakeup
  CHECK(sim.step_delta().empty());
  CHECK(sim.step_delta().empty());

  // Chain a -> b -> c: the poke commits, then one delta per stage.
  sim.poke(a, Value::vector(8, 10));
  CHECK(sim.step_delta() == std::vector<NodeId>{a.id()});
  CHECK(sim.step_delta() == std::vector<NodeId>{b.id()});
  CHECK(sim.step_delta() == std::vector<NodeId>{c.id()});
  CHECK(sim.step_delta().empty());
  CHECK(sim.value(c).as_uint() == 12);

  // Within a tick the chain settles after the input delta plus two.
  sim.poke(a, Value::vector(8, 20));
  sim.tick();
  CHECK(sim.last_tick_deltas() == 3);
  CHECK(sim.value(c).as_uint() == 22);
}

TEST_CASE("combinational loops that never settle raise an oscillation error") {
  Session s;
  auto& top = s.make_top<Fixture>("top", [&](Fixture&, Architecture& arch) {
    auto x = arch.vector("x", 8);
    auto y = arch.vector("y", 8);
    arch.combinational("inc", [&](ProcessBuilder& p) { p.drive(x, y + 1); });
    arch.combinational("copy", [&](ProcessBuilder& p) { p.drive(y, x); });
  });
  SimOptions opt;
  opt.delta_limit = 50;
  Simulator sim(s, top.id(), opt);
  try {
    sim.tick();
    FAIL("expected oscillation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::oscillation);
    std::string msg = e.what();
    CHECK(msg.find("top/x") != std::string::npos);
    CHECK(msg.find("top/y") != std::string::npos);
  }
}

TEST_CASE("activations equal clock edges and ticks stay quiescent") {
  Session s;
  auto& tb = s.make_top<CounterTb>("tb");
  Simulator sim(s, tb.id());
  for (int block = 0; block < 10; ++block) {
    sim.run_cycles(100);
    CHECK(sim.recheck().empty());
  }
  auto r = sim.report();
  CHECK(r.cycles == 1000);
  CHECK(r.activations.at("tb/cnt/proc") == 1000);
  CHECK(r.activations.at("tb/axPrint/proc") == 1000);
}

TEST_CASE("Counter to AxiPrint delivers 0, 1, 2, ...") {
  Session s;
  auto& tb = s.make_top<CounterTb>("tb");
  Simulator sim(s, tb.id());
  std::vector<std::uint64_t> printed;
  sim.add_observer([&](Simulator& sm) {
    if (sm.value(tb.clkgen->clk).as_logic() == Logic::one &&
        sm.value(tb.axPrint->strobe).as_logic() == Logic::one) {
      printed.push_back(sm.value(tb.axPrint->data).as_uint());
    }
  });
  sim.run_cycles(200);
  REQUIRE(printed.size() > 50);
  for (std::size_t i = 0; i < printed.size(); ++i) REQUIRE(printed[i] == i);
}

TEST_CASE("compiled closures and the interpreter agree") {
  std::vector<std::pair<std::string, std::function<Entity&(Session&)>>> designs = {
      {"counter", [](Session& s) -> Entity& { return s.make_top<MyFirstTestBench>("t"); }},
      {"chain", [](Session& s) -> Entity& { return s.make_top<CounterTb>("tb"); }},
      {"optional", [](Session& s) -> Entity& { return s.make_top<OptionalTb>("optional_tb"); }},
      {"backpressure",
       [](Session& s) -> Entity& { return s.make_top<BackpressureTb>("bp", 9, 0.4); }},
      {"fifo", [](Session& s) -> Entity& { return s.make_top<FifoTb>("fifo_tb", 4); }},
  };
  for (const auto& [name, make] : designs) {
    CAPTURE(name);
    SimOptions compiled, interpreted;
    interpreted.engine = Engine::interpreted;
    compiled.trace_variables = interpreted.trace_variables = true;
    auto a = simulate_vcd(make, 400, compiled);
    auto b = simulate_vcd(make, 400, interpreted);
    CHECK(a.size() > 500);
    CHECK(a == b);
  }
}

TEST_CASE("VCD output") {
  SUBCASE("clock shape") {
    auto vcd = simulate_vcd(
        [](Session& s) -> Entity& {
          return s.make_top<Fixture>("top", [](Fixture&, Architecture& a) {
            a.instantiate<ClockGenerator>("clkgen");
          });
        },
        2);
    CHECK(vcd.find("$var wire 1 ! clk $end") != std::string::npos);
    CHECK(vcd.find("#0\n$dumpvars\n0!\n$end\n#1\n1!\n#2\n0!\n#3\n1!\n#4\n") != std::string::npos);
  }

  SUBCASE("vector encoding drops leading zeros") {
    CHECK(Value::vector(32, 6).to_vcd() == "b110");
    CHECK(Value::vector(32, 0).to_vcd() == "b0");
    CHECK(Value::logic(Logic::undefined).to_vcd() == "x");
    auto vcd = simulate_vcd([](Session& s) -> Entity& { return s.make_top<MyFirstTestBench>("t"); }, 6);
    CHECK(vcd.find("b101 !\n") != std::string::npos);
    CHECK(vcd.find("b110 !\n") != std::string::npos);
  }

  SUBCASE("identifiers are printable and unique") {
    std::set<std::string> ids;
    for (std::size_t n = 0; n < 20000; ++n) {
      auto id = VcdWriter::identifier(n);
      for (char c : id) REQUIRE((c >= 33 && c <= 126));
      ids.insert(id);
    }
    CHECK(ids.size() == 20000);
    CHECK(VcdWriter::identifier(0) == "!");
    CHECK(VcdWriter::identifier(93) == "~");
  }

  SUBCASE("grammar and change counts") {
    for (auto make : std::vector<std::function<Entity&(Session&)>>{
             [](Session& s) -> Entity& { return s.make_top<MyFirstTestBench>("t"); },
             [](Session& s) -> Entity& { return s.make_top<CounterTb>("tb"); },
             [](Session& s) -> Entity& { return s.make_top<OptionalTb>("optional_tb"); },
             [](Session& s) -> Entity& { return s.make_top<FifoTb>("fifo_tb", 2); }}) {
      Session s;
      Entity& top = make(s);
      Simulator sim(s, top.id());
      std::ostringstream out;
      sim.attach_vcd(out);
      sim.run_cycles(300);
      sim.finish();
      auto check = check_vcd(out.str());
      REQUIRE_MESSAGE(check.ok, check.error);
      CHECK(check.changes == sim.committed_changes());
      CHECK(check.changes == sim.report().traced_changes);
      CHECK(check.initial_values == check.widths.size());
    }
  }

  SUBCASE("optional_t trace: data persists while valid pulses") {
    Session s;
    auto& tb = s.make_top<OptionalTb>("optional_tb");
    Simulator sim(s, tb.id());
    std::ostringstream out;
    sim.attach_vcd(out);
    sim.run_cycles(100);
    sim.finish();
    auto check = check_vcd(out.str());
    REQUIRE(check.ok);
    std::string valid_id, data_id;
    for (const auto& [id, name] : check.names) {
      if (name == "opt_data_valid") valid_id = id;
      if (name == "opt_data_data") data_id = id;
    }
    REQUIRE(!valid_id.empty());
    REQUIRE(!data_id.empty());
    const auto& valid = check.trace.at(valid_id);
    const auto& data = check.trace.at(data_id);
    // valid rises and falls once per transfer (every 10 cycles = 20 ticks)
    // and each pulse lasts one cycle.
    std::size_t rises = 0;
    for (std::size_t i = 1; i < valid.size(); ++i) {
      if (valid[i].second == "1") {
        ++rises;
        REQUIRE(i + 1 < valid.size());
        CHECK(valid[i + 1].second == "0");
        CHECK(valid[i + 1].first - valid[i].first == 2);
      }
    }
    CHECK(rises >= 8);
    // data changes only when valid rises, never back to zero.
    for (std::size_t i = 1; i < data.size(); ++i) {
      CHECK(data[i].second != "b0");
    }
    CHECK(data.size() >= rises);
  }

  SUBCASE("trace filter and zero cycles") {
    SimOptions opt;
    opt.trace = {"*/counter"};
    auto vcd = simulate_vcd([](Session& s) -> Entity& { return s.make_top<MyFirstTestBench>("t"); }, 0,
                            opt);
    auto check = check_vcd(vcd);
    REQUIRE(check.ok);
    CHECK(check.widths.size() == 1);
    CHECK(check.changes == 0);
  }
}

TEST_CASE("determinism: identical runs give identical VCDs") {
  auto make = [](Session& s) -> Entity& { return s.make_top<BackpressureTb>("bp", 42, 0.5); };
  CHECK(simulate_vcd(make, 500) == simulate_vcd(make, 500));
}

TEST_CASE("report serializes to JSON") {
  Session s;
  auto& tb = s.make_top<MyFirstTestBench>("my_first_test_bench");
  Simulator sim(s, tb.id());
  sim.run_cycles(700);
  auto j = sim.report().to_json();
  CHECK(j["cycles"] == 700);
  CHECK(j["ticks"] == 1400);
  CHECK(j["final_values"]["my_first_test_bench/counter"] == std::to_string(counter_oracle(700)));
  CHECK(j["activations"]["my_first_test_bench/proc"] == 700);
}
