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

#include "hdlkit/designs.hpp"

#include <random>

#include "hdlkit/error.hpp"
#include "hdlkit/vhdl/converters.hpp"

namespace hdlkit::designs {

using protocols::axi_stream;

ClockGenerator::ClockGenerator(Session& s, std::string name, unsigned period)
    : Entity(s, "clk_generator", std::move(name)) {
  clk = port_out("clk", Type::logic());
  s.design().entity(id()).converter = vhdl::clock_generator_converter();
  auto a = begin_architecture();
  a.clock_source(clk, period);
  a.end();
}

MyFirstTestBench::MyFirstTestBench(Session& s, std::string name)
    : Entity(s, "my_first_test_bench", std::move(name)) {
  auto a = begin_architecture();
  auto& clkgen = a.instantiate<ClockGenerator>("clkgen");
  counter = a.vector("counter", 32);
  max_cnt = a.vector("max_cnt", 32, 300);
  proc = a.on_rising_edge(clkgen.clk, "proc", [&](ProcessBuilder& p) {
    p.drive(counter, counter + 1);
    p.if_(counter >= max_cnt, [&] { p.drive(counter, 0); });
  });
  a.end();
}

Counter::Counter(Session& s, std::string name, Signal clk, unsigned width)
    : ClockedEntity(s, "Counter", std::move(name), clk) {
  Dout = port_primary("Dout", axi_stream(s, Type::vector(width)));
  auto a = begin_architecture();
  data = a.vector("data", width);
  auto data_out = a.get_handle(Dout, "data_out");
  a.on_rising_edge(this->clk, "proc", [&](ProcessBuilder& p) {
    p.if_(p.truthy(data_out), [&] {
      p.drive(data_out, data);
      p.drive(data, data + 1);
    });
  });
  a.end();
}

AxiPrint::AxiPrint(Session& s, std::string name, Signal clk, unsigned width)
    : ClockedEntity(s, "AxiPrint", std::move(name), clk) {
  D_in = port_secondary("D_in", axi_stream(s, Type::vector(width)));
  auto a = begin_architecture();
  data = a.vector("data", width);
  strobe = a.logic("strobe");
  auto data_in = a.get_handle(D_in, "data_in");
  a.on_rising_edge(this->clk, "proc", [&](ProcessBuilder& p) {
    p.if_(p.truthy(data_in), [&] {
       p.stream_out(data_in, data);
       p.drive(strobe, 1);
     }).else_([&] { p.drive(strobe, 0); });
  });
  a.end();
}

StreamDelayOne::StreamDelayOne(Session& s, std::string name, Signal clk, unsigned width)
    : ClockedEntity(s, "stream_delay_one", std::move(name), clk) {
  const auto& iface = axi_stream(s, Type::vector(width));
  Axi_in = pipeline_in("Axi_in", iface);
  Axi_out = pipeline_out("Axi_out", iface);
  auto a = begin_architecture();
  auto axiSalve = a.get_handle(Axi_in, "axiSalve");
  auto axPrimary = a.get_handle(Axi_out, "axPrimary");
  a.on_rising_edge(this->clk, "proc", [&](ProcessBuilder& p) {
    p.if_(p.truthy(axiSalve) && p.truthy(axPrimary), [&] { p.drive(axPrimary, axiSalve); });
  });
  a.end();
}

InputDelay::InputDelay(Session& s, std::string name, Signal clk, unsigned stages, unsigned width)
    : ClockedEntity(s, "InputDelay", std::move(name), clk) {
  const auto& iface = axi_stream(s, Type::vector(width));
  D_In = pipeline_in("D_In", iface);
  D_Out = pipeline_out("D_Out", iface);
  auto a = begin_architecture();
  Endpoint chain = D_In;
  for (unsigned i = 0; i < stages; ++i) {
    chain = chain | a.instantiate<StreamDelayOne>("delay", this->clk, width);
  }
  chain | D_Out;
  a.end();
}

Throttle::Throttle(Session& s, std::string name, Signal clk, unsigned period, unsigned width)
    : ClockedEntity(s, "Throttle", std::move(name), clk) {
  const auto& iface = axi_stream(s, Type::vector(width));
  In = pipeline_in("In", iface);
  Out = pipeline_out("Out", iface);
  auto a = begin_architecture();
  auto pace = a.vector("pace", 16);
  auto rx = a.get_handle(In, "rx");
  auto tx = a.get_handle(Out, "tx");
  a.on_rising_edge(this->clk, "proc", [&](ProcessBuilder& p) {
    p.if_(pace >= static_cast<std::int64_t>(period - 1), [&] {
       p.drive(pace, 0);
       p.if_(p.truthy(rx) && p.truthy(tx), [&] { p.drive(tx, rx); });
     }).else_([&] { p.drive(pace, pace + 1); });
  });
  a.end();
}

CounterTb::CounterTb(Session& s, std::string name) : Entity(s, "tb", std::move(name)) {
  auto a = begin_architecture();
  clkgen = &a.instantiate<ClockGenerator>("clkgen");
  cnt = &a.instantiate<Counter>("cnt", clkgen->clk);
  axPrint = &a.instantiate<AxiPrint>("axPrint", clkgen->clk);
  a.connect(axPrint->D_in, cnt->Dout);
  a.end();
}

OptionalTb::OptionalTb(Session& s, std::string name, unsigned period)
    : Entity(s, "optional_tb", std::move(name)) {
  auto a = begin_architecture();
  clkgen = &a.instantiate<ClockGenerator>("clkgen");
  cnt = &a.instantiate<Counter>("cnt", clkgen->clk);
  thr = &a.instantiate<Throttle>("thr", clkgen->clk, period);
  a.connect(thr->In, cnt->Dout);
  cnt_out = a.get_handle(thr->Out, "cnt_out");
  data = a.vector("data", 32);
  opt_data = a.data("opt_data", protocols::optional(s, Type::vector(32)));
  a.on_rising_edge(clkgen->clk, "proc", [&](ProcessBuilder& p) {
    p.stream_out(cnt_out, data);
    p.stream_out(cnt_out, opt_data);
  });
  a.end();
}

FifoReader::FifoReader(Session& s, std::string name, Signal clk, unsigned width)
    : ClockedEntity(s, "FifoReader", std::move(name), clk) {
  fifo = port_secondary("fifo", protocols::native_fifo(s, Type::vector(width)));
  auto a = begin_architecture();
  data = a.vector("data", width);
  strobe = a.logic("strobe");
  rx = a.get_handle(fifo, "rx");
  a.on_rising_edge(this->clk, "proc", [&](ProcessBuilder& p) {
    p.if_(p.truthy(rx), [&] {
       p.stream_out(rx, data);
       p.drive(strobe, 1);
     }).else_([&] { p.drive(strobe, 0); });
  });
  a.end();
}

// ---------------------------------------------------------------------------
// Host-process stimulus

WordSource::WordSource(Session& s, std::string name, Signal clk, std::shared_ptr<WordQueue> q,
                       unsigned width)
    : ClockedEntity(s, "WordSource", std::move(name), clk), queue(std::move(q)) {
  Dout = pipeline_out("Dout", axi_stream(s, Type::vector(width)));
  auto a = begin_architecture();
  auto tx = a.get_handle(Dout, "tx");
  a.host_process(
      this->clk, "feed",
      [tx, queue = queue, width](HostContext& host) {
        if (queue->empty() || !host.truthy(tx)) return;
        host.send(tx, Value::vector(width, queue->front()));
        queue->pop_front();
      },
      {}, {tx});
  a.end();
}

WordSink::WordSink(Session& s, std::string name, Signal clk, std::shared_ptr<WordLog> l,
                   unsigned width, double ready_probability, std::uint64_t seed)
    : ClockedEntity(s, "WordSink", std::move(name), clk), log(std::move(l)) {
  D_in = pipeline_in("D_in", axi_stream(s, Type::vector(width)));
  auto a = begin_architecture();
  auto rx = a.get_handle(D_in, "rx");
  auto rng = std::make_shared<std::mt19937_64>(seed);
  a.host_process(
      this->clk, "drain",
      [rx, log = log, rng, ready_probability](HostContext& host) {
        if (ready_probability < 1.0) {
          if (std::uniform_real_distribution<double>(0.0, 1.0)(*rng) >= ready_probability) return;
        }
        if (!host.truthy(rx)) return;
        log->entries.push_back({host.tick(), host.receive(rx).as_uint()});
      },
      {}, {rx});
  a.end();
}

FifoSource::FifoSource(Session& s, std::string name, Signal clk, std::uint64_t seed,
                       unsigned width)
    : ClockedEntity(s, "FifoSource", std::move(name), clk) {
  fifo = port_primary("fifo", protocols::native_fifo(s, Type::vector(width)));
  auto a = begin_architecture();
  Signal data = fifo.member("data");
  Signal empty = fifo.member("empty");
  Signal enable = fifo.member("enable");
  auto rng = std::make_shared<std::mt19937_64>(seed);
  auto next = std::make_shared<std::uint64_t>(0);
  a.host_process(
      this->clk, "model",
      [=](HostContext& host) {
        bool was_empty = host.read(empty).as_logic() != Logic::zero;
        if (!was_empty && host.read(enable).as_logic() == Logic::one) ++*next;
        bool now_empty = ((*rng)() & 1) != 0;
        host.write(empty, Value::logic(now_empty ? Logic::one : Logic::zero));
        host.write(data, Value::vector(width, *next));
      },
      {data, empty});
  a.end();
}

BackpressureTb::BackpressureTb(Session& s, std::string name, std::uint64_t seed, double ready)
    : Entity(s, "backpressure_tb", std::move(name)), log(std::make_shared<WordLog>()) {
  auto a = begin_architecture();
  clkgen = &a.instantiate<ClockGenerator>("clkgen");
  cnt = &a.instantiate<Counter>("cnt", clkgen->clk);
  sink = &a.instantiate<WordSink>("sink", clkgen->clk, log, 32, ready, seed);
  a.connect(sink->D_in, cnt->Dout);
  a.end();
}

StreamHarness::StreamHarness(Session& s, std::string name, const DutFactory& factory)
    : Entity(s, "stream_harness", std::move(name)),
      input(std::make_shared<WordQueue>()),
      output(std::make_shared<WordLog>()) {
  auto a = begin_architecture();
  clkgen = &a.instantiate<ClockGenerator>("clkgen");
  dut = &factory(a, clkgen->clk);
  width = stream_width(s, *dut);
  if (width == 0) fail(ErrorKind::pipeline, dut->path() + " has no pipeline_in stream with vector data");
  source = &a.instantiate<WordSource>("source", clkgen->clk, input, width);
  sink = &a.instantiate<WordSink>("sink", clkgen->clk, output, width);
  *source | *dut | *sink;
  a.end();
}

FifoTb::FifoTb(Session& s, std::string name, std::uint64_t seed)
    : Entity(s, "fifo_tb", std::move(name)) {
  auto a = begin_architecture();
  clkgen = &a.instantiate<ClockGenerator>("clkgen");
  source = &a.instantiate<FifoSource>("source", clkgen->clk, seed);
  reader = &a.instantiate<FifoReader>("reader", clkgen->clk);
  a.connect(reader->fifo, source->fifo);
  a.end();
}

FifoGateTb::FifoGateTb(Session& s, std::string name) : Entity(s, "fifo_gate_tb", std::move(name)) {
  auto a = begin_architecture();
  clkgen = &a.instantiate<ClockGenerator>("clkgen");
  reader = &a.instantiate<FifoReader>("reader", clkgen->clk);
  link = a.bundle("link", protocols::native_fifo(s, Type::vector(32)));
  a.connect(reader->fifo, link);
  a.end();
}

// ---------------------------------------------------------------------------
// Registry

unsigned stream_width(const Session& s, const Entity& e) {
  const Design& d = s.design();
  for (const auto& p : d.entity(e.id()).ports) {
    if (!p.is_object) continue;
    const auto& o = d.object(p.id);
    if (o.port && o.port->stream == StreamRole::pipeline_in && o.cls->data_type &&
        o.cls->data_type->is_vector()) {
      return o.cls->data_type->width();
    }
  }
  return 0;
}

const std::vector<DesignInfo>& registry() {
  static const std::vector<DesignInfo> designs = {
      {"my_first_test_bench", "counter counting to 300 and wrapping",
       [](Session& s, const DesignOptions&) -> Entity& {
         return s.make_top<MyFirstTestBench>("my_first_test_bench");
       },
       {}},
      {"counter_tb", "Counter streaming into AxiPrint",
       [](Session& s, const DesignOptions&) -> Entity& { return s.make_top<CounterTb>("tb"); },
       {}},
      {"input_delay", "two-stage stream delay built with the pipe operator",
       [](Session& s, const DesignOptions&) -> Entity& {
         return s.make_top<InputDelay>("InputDelay", Signal());
       },
       [](Architecture& a, Signal clk) -> Entity& { return a.instantiate<InputDelay>("dut", clk); }},
      {"stream_delay_one", "single-stage stream delay",
       [](Session& s, const DesignOptions&) -> Entity& {
         return s.make_top<StreamDelayOne>("stream_delay_one", Signal());
       },
       [](Architecture& a, Signal clk) -> Entity& { return a.instantiate<StreamDelayOne>("dut", clk); }},
      {"optional_tb", "throttled counter read into a vector and an optional_t",
       [](Session& s, const DesignOptions&) -> Entity& {
         return s.make_top<OptionalTb>("optional_tb");
       },
       {}},
      {"fifo_reader", "native FIFO reader with combinational enable gating",
       [](Session& s, const DesignOptions&) -> Entity& {
         return s.make_top<FifoReader>("FifoReader", Signal());
       },
       {}},
      {"fifo_tb", "FIFO model feeding the native FIFO reader (simulation only)",
       [](Session& s, const DesignOptions& o) -> Entity& {
         return s.make_top<FifoTb>("fifo_tb", o.seed);
       },
       {}},
      {"backpressure_tb", "Counter into a randomly stalling sink (simulation only)",
       [](Session& s, const DesignOptions& o) -> Entity& {
         return s.make_top<BackpressureTb>("backpressure_tb", o.seed);
       },
       {}},
  };
  return designs;
}

const DesignInfo* find_design(const std::string& name) {
  for (const auto& d : registry()) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

}  // namespace hdlkit::designs
