// Copyright 2026 The ZipPIR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ZIPPIR_SERVICE_TRANSPORT_H_
#define ZIPPIR_SERVICE_TRANSPORT_H_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace zippir {

// Frame layout: u32 little-endian length of what follows, u8 frame type,
// body. Protocol messages travel unchanged inside the body.
enum class FrameType : uint8_t {
  kParamsRequest = 1,  // empty body
  kParams = 2,         // u64 db_version, serialized ProtocolConfig
  kHintRequest = 3,    // HintRequest message
  kHintAck = 4,        // 16-byte client id
  kQuery = 5,          // u8 response mode, Query message
  kResponse = 6,       // Response message
  kHintFetch = 7,      // 16-byte client id, u64 query index
  kHintTransfer = 8,   // HintTransfer message
  kHintPending = 9,    // u64 query index; retry later
  kError = 10,         // u8 kind, u8 status code, u8 tag, message
};

inline constexpr size_t kFrameHeaderBytes = 5;
inline constexpr size_t kMaxFrameBytes = size_t{64} << 20;

struct Frame {
  FrameType type = FrameType::kError;
  std::vector<uint8_t> body;
};

// Byte totals including frame headers. May be shared by many connections.
struct TrafficCounters {
  std::atomic<uint64_t> bytes_sent{0};
  std::atomic<uint64_t> bytes_received{0};
  std::atomic<uint64_t> frames_sent{0};
  std::atomic<uint64_t> frames_received{0};
};

std::vector<uint8_t> EncodeErrorBody(const absl::Status& status);
absl::Status DecodeErrorBody(std::span<const uint8_t> body);

// "host:port". Port 0 asks the kernel for a free port when listening.
absl::StatusOr<std::pair<std::string, uint16_t>> ParseAddress(
    const std::string& address);

// Blocking TCP stream carrying frames.
class Connection {
 public:
  static absl::StatusOr<std::unique_ptr<Connection>> Dial(
      const std::string& address);
  explicit Connection(int fd) : fd_(fd) {}
  ~Connection();
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;

  // Counters also updated by this connection, besides its own.
  void ShareCounters(std::shared_ptr<TrafficCounters> shared) {
    shared_ = std::move(shared);
  }

  absl::Status Send(const Frame& frame);
  // Protocol error on a malformed or oversized frame, state error when the
  // peer closed the stream.
  absl::StatusOr<Frame> Receive();
  // Send followed by Receive; error frames become their status.
  absl::StatusOr<Frame> Call(const Frame& request);

  // Unblocks a Receive pending on another thread.
  void Shutdown();

  const TrafficCounters& counters() const { return own_; }

 private:
  void Count(bool sent, size_t bytes);

  int fd_;
  TrafficCounters own_;
  std::shared_ptr<TrafficCounters> shared_;
};

class Listener {
 public:
  static absl::StatusOr<std::unique_ptr<Listener>> Bind(
      const std::string& address);
  ~Listener();
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;

  uint16_t port() const { return port_; }
  // Returns a state error once Shutdown was called.
  absl::StatusOr<std::unique_ptr<Connection>> Accept();
  void Shutdown();

 private:
  Listener(int fd, uint16_t port) : fd_(fd), port_(port) {}

  std::atomic<int> fd_;
  uint16_t port_;
};

}  // namespace zippir

#endif  // ZIPPIR_SERVICE_TRANSPORT_H_
