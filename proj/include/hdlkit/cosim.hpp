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
#include <optional>
#include <string>
#include <vector>

#include "hdlkit/designs.hpp"
#include "hdlkit/simulator.hpp"

namespace hdlkit::cosim {

/// Batch framing: u32 little-endian word count, then that many u32
/// little-endian words. A count of 0 is a keep-alive.
std::vector<std::uint8_t> encode_batch(const std::vector<std::uint32_t>& words);

/// Reassembles batches from arbitrary byte chunks.
class FrameDecoder {
 public:
  void feed(const std::uint8_t* data, std::size_t size);
  std::optional<std::vector<std::uint32_t>> next();
  std::size_t buffered() const { return buffer_.size(); }

 private:
  std::vector<std::uint8_t> buffer_;
};

struct BridgeOptions {
  /// Cycles without new output, after the input drained, that end a batch.
  unsigned settle_cycles = 16;
  /// Cycles without any input or output progress before giving up on a batch.
  unsigned stall_cycles = 1000;
  SimOptions sim;
};

/// Stands in for an FPGA: words from a client enter the harnessed design's
/// stream input; words leaving its stream output go back in batches.
class Bridge {
 public:
  Bridge(Session& session, designs::StreamHarness& harness, BridgeOptions options = {});
  ~Bridge();
  Bridge(const Bridge&) = delete;
  Bridge& operator=(const Bridge&) = delete;

  /// Injects a batch and advances until it is consumed and the output
  /// settles; returns the words that left the design meanwhile.
  std::vector<std::uint32_t> drive_words(const std::vector<std::uint32_t>& words);

  /// Binds 127.0.0.1:`port` (0 picks a free port).
  void listen(std::uint16_t port);
  std::uint16_t port() const { return port_; }
  /// Serves one client until it disconnects. Further connection attempts
  /// meanwhile are accepted and closed at once.
  void serve_client();

  void stop();
  bool running() const { return running_; }
  Simulator& simulator() { return sim_; }

 private:
  designs::StreamHarness* harness_;
  BridgeOptions options_;
  Simulator sim_;
  std::size_t delivered_ = 0;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  bool running_ = true;
};

/// Blocking client used by tests and scripts.
class Client {
 public:
  Client(const std::string& host, std::uint16_t port);
  ~Client();
  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  std::vector<std::uint32_t> exchange(const std::vector<std::uint32_t>& words);
  /// True when the server closed the connection.
  bool closed();

 private:
  int fd_ = -1;
};

}  // namespace hdlkit::cosim
