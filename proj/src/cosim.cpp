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

#include "hdlkit/cosim.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include <fmt/format.h>

#include "hdlkit/error.hpp"

namespace hdlkit::cosim {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

bool send_all(int fd, const std::vector<std::uint8_t>& bytes) {
  std::size_t off = 0;
  while (off < bytes.size()) {
    ssize_t n = ::send(fd, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    off += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

std::vector<std::uint8_t> encode_batch(const std::vector<std::uint32_t>& words) {
  std::vector<std::uint8_t> out;
  out.reserve(4 + words.size() * 4);
  put_u32(out, static_cast<std::uint32_t>(words.size()));
  for (auto w : words) put_u32(out, w);
  return out;
}

void FrameDecoder::feed(const std::uint8_t* data, std::size_t size) {
  buffer_.insert(buffer_.end(), data, data + size);
}

std::optional<std::vector<std::uint32_t>> FrameDecoder::next() {
  if (buffer_.size() < 4) return std::nullopt;
  std::size_t count = get_u32(buffer_.data());
  std::size_t total = 4 + count * 4;
  if (buffer_.size() < total) return std::nullopt;
  std::vector<std::uint32_t> words(count);
  for (std::size_t i = 0; i < count; ++i) words[i] = get_u32(buffer_.data() + 4 + i * 4);
  buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(total));
  return words;
}

Bridge::Bridge(Session& session, designs::StreamHarness& harness, BridgeOptions options)
    : harness_(&harness), options_(options), sim_(session, harness.id(), options.sim) {
  if (harness.width != 32) {
    fail(ErrorKind::cosim, fmt::format("{} streams {}-bit words; the bridge carries 32-bit words",
                                       harness.dut->path(), harness.width));
  }
}

Bridge::~Bridge() { stop(); }

std::vector<std::uint32_t> Bridge::drive_words(const std::vector<std::uint32_t>& words) {
  if (!running_) fail(ErrorKind::state, "bridge is stopped");
  std::vector<std::uint32_t> out;
  if (words.empty()) return out;
  auto& input = *harness_->input;
  const auto& log = harness_->output->entries;
  for (auto w : words) input.push_back(w);

  unsigned quiet = 0;
  unsigned stalled = 0;
  while (true) {
    std::size_t before_in = input.size();
    std::size_t before_out = log.size();
    sim_.run_cycles(1);
    bool progress = input.size() != before_in || log.size() != before_out;
    stalled = progress ? 0 : stalled + 1;
    if (input.empty()) {
      quiet = log.size() != before_out ? 0 : quiet + 1;
      if (quiet >= options_.settle_cycles) break;
    }
    if (stalled >= options_.stall_cycles) break;
  }
  for (; delivered_ < log.size(); ++delivered_) out.push_back(static_cast<std::uint32_t>(log[delivered_].word));
  return out;
}

void Bridge::listen(std::uint16_t port) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) fail(ErrorKind::cosim, std::string("socket: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
      ::listen(listen_fd_, 4) != 0) {
    std::string why = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    fail(ErrorKind::cosim, fmt::format("cannot listen on port {}: {}", port, why));
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

void Bridge::serve_client() {
  if (listen_fd_ < 0) fail(ErrorKind::state, "bridge is not listening");
  int client = ::accept(listen_fd_, nullptr, nullptr);
  if (client < 0) fail(ErrorKind::cosim, std::string("accept: ") + std::strerror(errno));
  FrameDecoder decoder;
  std::uint8_t buf[4096];
  bool open = true;
  while (open && running_) {
    pollfd fds[2] = {{client, POLLIN, 0}, {listen_fd_, POLLIN, 0}};
    if (::poll(fds, 2, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if ((fds[1].revents & POLLIN) != 0) {
      // One client at a time: refuse the newcomer.
      int extra = ::accept(listen_fd_, nullptr, nullptr);
      if (extra >= 0) ::close(extra);
    }
    if ((fds[0].revents & (POLLIN | POLLHUP | POLLERR)) == 0) continue;
    ssize_t n = ::recv(client, buf, sizeof buf, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    decoder.feed(buf, static_cast<std::size_t>(n));
    while (auto batch = decoder.next()) {
      if (!send_all(client, encode_batch(drive_words(*batch)))) {
        open = false;
        break;
      }
    }
  }
  ::close(client);
}

void Bridge::stop() {
  running_ = false;
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
}

Client::Client(const std::string& host, std::uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) fail(ErrorKind::cosim, std::string("socket: ") + std::strerror(errno));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    fail(ErrorKind::cosim, "bad address " + host);
  }
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    std::string why = std::strerror(errno);
    ::close(fd_);
    fd_ = -1;
    fail(ErrorKind::cosim, fmt::format("cannot connect to {}:{}: {}", host, port, why));
  }
}

Client::~Client() {
  if (fd_ >= 0) ::close(fd_);
}

std::vector<std::uint32_t> Client::exchange(const std::vector<std::uint32_t>& words) {
  if (!send_all(fd_, encode_batch(words))) fail(ErrorKind::cosim, "connection closed while sending");
  FrameDecoder decoder;
  std::uint8_t buf[4096];
  while (true) {
    if (auto batch = decoder.next()) return *batch;
    ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) fail(ErrorKind::cosim, "connection closed while waiting for a reply");
    decoder.feed(buf, static_cast<std::size_t>(n));
  }
}

bool Client::closed() {
  std::uint8_t b = 0;
  pollfd p{fd_, POLLIN, 0};
  if (::poll(&p, 1, 2000) <= 0) return false;
  return ::recv(fd_, &b, 1, MSG_PEEK) == 0;
}

}  // namespace hdlkit::cosim
