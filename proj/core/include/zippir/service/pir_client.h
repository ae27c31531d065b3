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

#ifndef ZIPPIR_SERVICE_PIR_CLIENT_H_
#define ZIPPIR_SERVICE_PIR_CLIENT_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "zippir/protocol/client.h"
#include "zippir/protocol/messages.h"
#include "zippir/protocol/params.h"
#include "zippir/service/transport.h"

namespace zippir {

// Byte accounting of one exchange. Payload bytes follow the protocol's
// communication formulas; overhead covers message headers and framing.
struct ExchangeStats {
  size_t up_payload_bytes = 0;
  size_t up_overhead_bytes = 0;
  size_t down_payload_bytes = 0;
  size_t down_overhead_bytes = 0;
  uint64_t wall_ns = 0;
  // Number of hint-pending replies before the answer.
  size_t pending_replies = 0;
};

struct RetryPolicy {
  std::chrono::milliseconds initial_delay{20};
  std::chrono::milliseconds max_delay{1000};
  std::chrono::milliseconds deadline{std::chrono::minutes(10)};
};

// One connection to a PirServer.
class RemoteSession {
 public:
  static absl::StatusOr<std::unique_ptr<RemoteSession>> Connect(
      const std::string& address);

  struct ServerInfo {
    ProtocolConfig config;
    uint64_t db_version = 0;
  };
  absl::StatusOr<ServerInfo> FetchInfo();

  // Registers the client and returns once the server acknowledged.
  absl::StatusOr<ExchangeStats> Register(const ProtocolParams& params,
                                         const HintRequest& request);

  // Sends the query and waits through hint-pending replies.
  absl::StatusOr<ResponseMessage> Query(const ProtocolParams& params,
                                        const PaillierPublicKey& pk,
                                        const QueryMessage& query,
                                        ResponseMode mode,
                                        const RetryPolicy& retry = {},
                                        ExchangeStats* stats = nullptr);

  // Downloads the hint of one query index for client-storage mode.
  absl::StatusOr<ClientHint> FetchHint(const ProtocolParams& params,
                                       const PaillierPublicKey& pk,
                                       const ClientId& id, uint64_t query_index,
                                       const RetryPolicy& retry = {},
                                       ExchangeStats* stats = nullptr);

  const TrafficCounters& traffic() const { return connection_->counters(); }

 private:
  explicit RemoteSession(std::unique_ptr<Connection> connection)
      : connection_(std::move(connection)) {}

  // Repeats `request` while the server answers hint-pending.
  absl::StatusOr<Frame> CallWithRetry(const Frame& request,
                                      const RetryPolicy& retry,
                                      size_t* pending_replies);

  std::unique_ptr<Connection> connection_;
};

// Client files in one directory: config.bin (server configuration),
// state.bin (long-term state) and hints/<query_index>.hint for hints held in
// client-storage mode. Every write is atomic.
class ClientWorkspace {
 public:
  explicit ClientWorkspace(std::string dir) : dir_(std::move(dir)) {}

  const std::string& dir() const { return dir_; }
  bool Exists() const;

  absl::Status Save(const ProtocolConfig& config,
                    const ClientLongTermState& state) const;
  absl::Status SaveState(const ClientLongTermState& state) const;
  absl::StatusOr<ProtocolConfig> LoadConfig() const;
  absl::StatusOr<ClientLongTermState> LoadState() const;

  absl::Status SaveHint(const ProtocolParams& params,
                        const PaillierPublicKey& pk,
                        const ClientHint& hint) const;
  absl::StatusOr<std::optional<ClientHint>> LoadHint(
      const ProtocolParams& params, const PaillierPublicKey& pk,
      uint64_t query_index) const;
  absl::Status RemoveHint(uint64_t query_index) const;

 private:
  std::string Path(const std::string& name) const;
  std::string HintPath(uint64_t query_index) const;

  std::string dir_;
};

}  // namespace zippir

#endif  // ZIPPIR_SERVICE_PIR_CLIENT_H_
