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
#include <thread>

#include "doctest.h"

#include "hdlkit/cosim.hpp"
#include "hdlkit/designs.hpp"
#include "support.hpp"

using namespace hdlkit;
using namespace hdlkit::cosim;
using namespace hdlkit::designs;
using test::error_kind;

namespace {

// Little-endian encoding written out byte by byte.
std::vector<std::uint8_t> le_oracle(const std::vector<std::uint32_t>& words) {
  std::vector<std::uint8_t> out;
  auto put = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  put(static_cast<std::uint32_t>(words.size()));
  for (auto w : words) put(w);
  return out;
}

StreamHarness& harness(Session& s, const std::string& design) {
  const auto* info = find_design(design);
  REQUIRE(info != nullptr);
  REQUIRE(info->stream);
  return s.make_top<StreamHarness>("cosim", info->stream);
}

std::vector<std::uint32_t> random_words(std::size_t n, std::uint64_t seed) {
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  std::vector<std::uint32_t> out(n);
  for (auto& w : out) w = static_cast<std::uint32_t>(rng());
  return out;
}

}  // namespace

TEST_CASE("framing") {
  CHECK(encode_batch({}) == std::vector<std::uint8_t>{0, 0, 0, 0});
  CHECK(encode_batch({0xDEADBEEF}) == std::vector<std::uint8_t>{1, 0, 0, 0, 0xEF, 0xBE, 0xAD, 0xDE});
  auto words = random_words(300, 5);
  CHECK(encode_batch(words) == le_oracle(words));

  // Arbitrary chunking reassembles the same batches, keep-alives included.
  std::vector<std::vector<std::uint32_t>> batches = {{1, 2, 3}, {}, random_words(50, 6), {0xFFFFFFFF}};
  std::vector<std::uint8_t> stream;
  for (const auto& b : batches) {
    auto e = le_oracle(b);
    stream.insert(stream.end(), e.begin(), e.end());
  }
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    FrameDecoder d;
    std::vector<std::vector<std::uint32_t>> got;
    std::size_t pos = 0;
    while (pos < stream.size()) {
      std::size_t n = std::min<std::size_t>(stream.size() - pos, 1 + rng() % 9);
      d.feed(stream.data() + pos, n);
      pos += n;
      while (auto b = d.next()) got.push_back(*b);
    }
    REQUIRE(got == batches);
    CHECK(d.buffered() == 0);
  }

  FrameDecoder partial;
  auto e = le_oracle({7, 8});
  partial.feed(e.data(), 6);
  CHECK_FALSE(partial.next().has_value());
  CHECK(partial.buffered() == 6);
  partial.feed(e.data() + 6, e.size() - 6);
  CHECK(partial.next() == std::vector<std::uint32_t>{7, 8});
}

TEST_CASE("drive_words through stream_delay_one is the identity") {
  Session s;
  Bridge bridge(s, harness(s, "stream_delay_one"));
  CHECK(bridge.drive_words({}).empty());
  CHECK(bridge.drive_words({0xDEADBEEF}) == std::vector<std::uint32_t>{0xDEADBEEF});
  auto words = random_words(1000, 1);
  CHECK(bridge.drive_words(words) == words);
  // Batches keep their order across calls.
  CHECK(bridge.drive_words({5}) == std::vector<std::uint32_t>{5});
  CHECK(bridge.drive_words({6}) == std::vector<std::uint32_t>{6});
}

TEST_CASE("drive_words through input_delay leaves words unchanged") {
  Session s;
  Bridge bridge(s, harness(s, "input_delay"));
  for (std::uint64_t seed : {2u, 3u}) {
    auto words = random_words(100, seed);
    CHECK(bridge.drive_words(words) == words);
  }
}

TEST_CASE("bridge errors") {
  Session s;
  auto& narrow = s.make_top<StreamHarness>(
      "narrow", [](Architecture& a, Signal clk) -> Entity& { return a.instantiate<StreamDelayOne>("dut", clk, 8); });
  CHECK(narrow.width == 8);
  CHECK(error_kind([&] { Bridge b(s, narrow); }) == ErrorKind::cosim);

  Session s2;
  Bridge bridge(s2, harness(s2, "stream_delay_one"));
  CHECK(error_kind([&] { bridge.serve_client(); }) == ErrorKind::state);
  bridge.stop();
  CHECK_FALSE(bridge.running());
  CHECK(error_kind([&] { bridge.drive_words({1}); }) == ErrorKind::state);

  CHECK(error_kind([] { Client c("not-an-address", 1); }) == ErrorKind::cosim);
}

TEST_CASE("TCP session") {
  Session s;
  Bridge bridge(s, harness(s, "stream_delay_one"));
  bridge.listen(0);
  REQUIRE(bridge.port() != 0);
  std::thread server([&] { bridge.serve_client(); });
  {
    Client c("127.0.0.1", bridge.port());
    CHECK(c.exchange({}).empty());  // keep-alive
    CHECK(c.exchange({5}) == std::vector<std::uint32_t>{5});
    CHECK(c.exchange({6}) == std::vector<std::uint32_t>{6});

    // A second client is accepted and closed while the first is served.
    Client other("127.0.0.1", bridge.port());
    CHECK(other.closed());

    auto words = random_words(1000, 9);
    CHECK(c.exchange(words) == words);
  }
  server.join();
  CHECK(bridge.simulator().now() > 0);
}
