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
#include <string>
#include <vector>

#include "hdlkit/entity.hpp"
#include "hdlkit/protocols.hpp"

/// Reference designs: the example entities and testbenches shipped with the
/// library. All of them elaborate inside their constructors.
namespace hdlkit::designs {

/// Free-running clock: 0 for period/2 ticks, then 1.
class ClockGenerator : public Entity {
 public:
  ClockGenerator(Session& s, std::string name, unsigned period = 2);
  Signal clk;
};

/// Counts to max_cnt (300) and wraps to zero.
class MyFirstTestBench : public Entity {
 public:
  MyFirstTestBench(Session& s, std::string name);
  Signal counter;
  Signal max_cnt;
  ProcessId proc = 0;
};

/// Sends 0, 1, 2, ... through an axiStream port whenever the link is free.
class Counter : public ClockedEntity {
 public:
  Counter(Session& s, std::string name, Signal clk, unsigned width = 32);
  Object Dout;
  Signal data;
};

/// Consumes every word; `data` holds the word and `strobe` is 1 in the
/// cycle after each transfer.
class AxiPrint : public ClockedEntity {
 public:
  AxiPrint(Session& s, std::string name, Signal clk, unsigned width = 32);
  Object D_in;
  Signal data;
  Signal strobe;
};

/// Forwards a stream with one register stage.
class StreamDelayOne : public ClockedEntity {
 public:
  StreamDelayOne(Session& s, std::string name, Signal clk, unsigned width = 32);
  Object Axi_in;
  Object Axi_out;
};

/// Chain of `stages` StreamDelayOne instances built with the pipe operator.
class InputDelay : public ClockedEntity {
 public:
  InputDelay(Session& s, std::string name, Signal clk, unsigned stages = 2, unsigned width = 32);
  Object D_In;
  Object D_Out;
};

/// Passes at most one word every `period` cycles.
class Throttle : public ClockedEntity {
 public:
  Throttle(Session& s, std::string name, Signal clk, unsigned period = 10, unsigned width = 32);
  Object In;
  Object Out;
};

/// Counter feeding AxiPrint.
class CounterTb : public Entity {
 public:
  CounterTb(Session& s, std::string name);
  ClockGenerator* clkgen = nullptr;
  Counter* cnt = nullptr;
  AxiPrint* axPrint = nullptr;
};

/// Reads a throttled counter stream into a plain vector and an optional_t.
class OptionalTb : public Entity {
 public:
  OptionalTb(Session& s, std::string name, unsigned period = 10);
  ClockGenerator* clkgen = nullptr;
  Counter* cnt = nullptr;
  Throttle* thr = nullptr;
  Object cnt_out;
  Signal data;
  Object opt_data;
};

/// Reads a native FIFO port through the gating handler.
class FifoReader : public ClockedEntity {
 public:
  FifoReader(Session& s, std::string name, Signal clk, unsigned width = 32);
  Object fifo;
  Object rx;
  Signal data;
  Signal strobe;
};

// ---------------------------------------------------------------------------
// Simulation-only stimulus and monitors (host processes).

struct WordLog {
  struct Entry {
    std::uint64_t tick;
    std::uint64_t word;
  };
  std::vector<Entry> entries;
};

using WordQueue = std::deque<std::uint64_t>;

/// Sends queued words as fast as the link accepts them.
class WordSource : public ClockedEntity {
 public:
  WordSource(Session& s, std::string name, Signal clk, std::shared_ptr<WordQueue> queue,
             unsigned width = 32);
  Object Dout;
  std::shared_ptr<WordQueue> queue;
};

/// Reads words into a log. With ready_probability < 1 it skips reads at
/// random (seeded), which backpressures the link.
class WordSink : public ClockedEntity {
 public:
  WordSink(Session& s, std::string name, Signal clk, std::shared_ptr<WordLog> log,
           unsigned width = 32, double ready_probability = 1.0, std::uint64_t seed = 0);
  Object D_in;
  std::shared_ptr<WordLog> log;
};

/// Native FIFO model: pops on enable, and is randomly empty (seeded).
class FifoSource : public ClockedEntity {
 public:
  FifoSource(Session& s, std::string name, Signal clk, std::uint64_t seed, unsigned width = 32);
  Object fifo;
};

/// Counter into a randomly backpressuring sink.
class BackpressureTb : public Entity {
 public:
  BackpressureTb(Session& s, std::string name, std::uint64_t seed = 0, double ready = 0.5);
  ClockGenerator* clkgen = nullptr;
  Counter* cnt = nullptr;
  WordSink* sink = nullptr;
  std::shared_ptr<WordLog> log;
};

/// Host-driven source and sink around a pipeline design (`dut` factory).
class StreamHarness : public Entity {
 public:
  using DutFactory = std::function<Entity&(Architecture&, Signal clk)>;
  StreamHarness(Session& s, std::string name, const DutFactory& dut);
  ClockGenerator* clkgen = nullptr;
  WordSource* source = nullptr;
  Entity* dut = nullptr;
  WordSink* sink = nullptr;
  std::shared_ptr<WordQueue> input;
  std::shared_ptr<WordLog> output;
  unsigned width = 32;  // data width of the design's stream ports
};

/// Data width of an entity's pipeline_in stream (0 when it has none).
unsigned stream_width(const Session& s, const Entity& e);

/// FIFO model feeding a FifoReader.
class FifoTb : public Entity {
 public:
  FifoTb(Session& s, std::string name, std::uint64_t seed = 0);
  ClockGenerator* clkgen = nullptr;
  FifoSource* source = nullptr;
  FifoReader* reader = nullptr;
};

/// FifoReader on an undriven local bundle, for stimulus from the test harness.
class FifoGateTb : public Entity {
 public:
  FifoGateTb(Session& s, std::string name);
  ClockGenerator* clkgen = nullptr;
  FifoReader* reader = nullptr;
  Object link;
};

// ---------------------------------------------------------------------------
// Registry used by the command line tool.

struct DesignOptions {
  std::uint64_t seed = 0;
};

struct DesignInfo {
  std::string name;
  std::string description;
  std::function<Entity&(Session&, const DesignOptions&)> make;
  /// Stream designs only: instantiates the design inside a harness.
  StreamHarness::DutFactory stream;
};

const std::vector<DesignInfo>& registry();
const DesignInfo* find_design(const std::string& name);

}  // namespace hdlkit::designs
