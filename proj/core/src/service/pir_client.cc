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

#include "zippir/service/pir_client.h"

#include <filesystem>
#include <thread>

#include "absl/strings/str_cat.h"
#include "zippir/common/errors.h"
#include "zippir/common/status_macros.h"
#include "zippir/common/wire.h"
#include "zippir/service/database_file.h"

namespace zippir {
namespace fs = std::filesystem;
namespace {

uint64_t NowNs() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

absl::Status Unexpected(const Frame& frame, absl::string_view wanted) {
  return ProtocolError(absl::StrCat("expected ", wanted, ", got frame type ",
                                    static_cast<int>(frame.type)));
}

}  // namespace

absl::StatusOr<std::unique_ptr<RemoteSession>> RemoteSession::Connect(
    const std::string& address) {
  ZIPPIR_ASSIGN_OR_RETURN(auto connection, Connection::Dial(address));
  return std::unique_ptr<RemoteSession>(
      new RemoteSession(std::move(connection)));
}

absl::StatusOr<RemoteSession::ServerInfo> RemoteSession::FetchInfo() {
  ZIPPIR_ASSIGN_OR_RETURN(Frame reply,
                          connection_->Call({FrameType::kParamsRequest, {}}));
  if (reply.type != FrameType::kParams) return Unexpected(reply, "params");
  WireReader r(reply.body);
  auto version = r.GetU64();
  if (!version.ok()) return ProtocolError("malformed params frame");
  ServerInfo info;
  info.db_version = *version;
  ZIPPIR_ASSIGN_OR_RETURN(
      info.config,
      DeserializeConfig(std::span<const uint8_t>(reply.body).subspan(8)));
  return info;
}

absl::StatusOr<ExchangeStats> RemoteSession::Register(
    const ProtocolParams& params, const HintRequest& request) {
  const uint64_t start = NowNs();
  EncodedMessage encoded = EncodeHintRequest(params, request);
  ZIPPIR_ASSIGN_OR_RETURN(
      Frame reply, connection_->Call({FrameType::kHintRequest, encoded.bytes}));
  if (reply.type != FrameType::kHintAck) return Unexpected(reply, "hint ack");
  const ClientId id = ClientIdFor(request.pk);
  if (reply.body.size() != id.size() ||
      !std::equal(id.begin(), id.end(), reply.body.begin())) {
    return ProtocolError("hint ack names a different client");
  }
  ExchangeStats stats;
  stats.up_payload_bytes = encoded.payload_bytes;
  stats.up_overhead_bytes = encoded.overhead_bytes + kFrameHeaderBytes;
  stats.down_overhead_bytes = reply.body.size() + kFrameHeaderBytes;
  stats.wall_ns = NowNs() - start;
  return stats;
}

absl::StatusOr<Frame> RemoteSession::CallWithRetry(const Frame& request,
                                                   const RetryPolicy& retry,
                                                   size_t* pending_replies) {
  const auto deadline = std::chrono::steady_clock::now() + retry.deadline;
  auto delay = retry.initial_delay;
  for (;;) {
    ZIPPIR_ASSIGN_OR_RETURN(Frame reply, connection_->Call(request));
    if (reply.type != FrameType::kHintPending) return reply;
    ++*pending_replies;
    if (std::chrono::steady_clock::now() + delay > deadline) {
      return StateError(
          "hint-pending: the server is still generating the "
          "hint for this query; retry later");
    }
    std::this_thread::sleep_for(delay);
    delay = std::min(delay * 2, retry.max_delay);
  }
}

absl::StatusOr<ResponseMessage> RemoteSession::Query(
    const ProtocolParams& params, const PaillierPublicKey& pk,
    const QueryMessage& query, ResponseMode mode, const RetryPolicy& retry,
    ExchangeStats* stats) {
  const uint64_t start = NowNs();
  EncodedMessage encoded = EncodeQuery(params, pk, query);
  Frame request{FrameType::kQuery, {static_cast<uint8_t>(mode)}};
  request.body.insert(request.body.end(), encoded.bytes.begin(),
                      encoded.bytes.end());
  size_t pending = 0;
  ZIPPIR_ASSIGN_OR_RETURN(Frame reply, CallWithRetry(request, retry, &pending));
  if (reply.type != FrameType::kResponse) return Unexpected(reply, "response");
  ZIPPIR_ASSIGN_OR_RETURN(ResponseMessage response,
                          DecodeResponse(params, pk, reply.body));
  if (response.query_index != query.query_index) {
    return ProtocolError("response answers a different query");
  }
  if (stats != nullptr) {
    EncodedMessage again = EncodeResponse(params, pk, response);
    stats->up_payload_bytes = encoded.payload_bytes;
    stats->up_overhead_bytes = encoded.overhead_bytes + 1 + kFrameHeaderBytes;
    stats->down_payload_bytes = again.payload_bytes;
    stats->down_overhead_bytes = again.overhead_bytes + kFrameHeaderBytes;
    stats->pending_replies = pending;
    stats->wall_ns = NowNs() - start;
  }
  return response;
}

absl::StatusOr<ClientHint> RemoteSession::FetchHint(
    const ProtocolParams& params, const PaillierPublicKey& pk,
    const ClientId& id, uint64_t query_index, const RetryPolicy& retry,
    ExchangeStats* stats) {
  const uint64_t start = NowNs();
  WireWriter w;
  w.PutBytes(id, /*payload=*/false);
  w.PutU64(query_index);
  Frame request{FrameType::kHintFetch, w.Release()};
  size_t pending = 0;
  ZIPPIR_ASSIGN_OR_RETURN(Frame reply, CallWithRetry(request, retry, &pending));
  if (reply.type != FrameType::kHintTransfer) {
    return Unexpected(reply, "hint transfer");
  }
  ZIPPIR_ASSIGN_OR_RETURN(ClientHint hint,
                          DecodeHintTransfer(params, pk, reply.body));
  if (hint.query_index != query_index) {
    return ProtocolError("hint transfer carries a different query index");
  }
  if (stats != nullptr) {
    EncodedMessage again = EncodeHintTransfer(params, pk, hint);
    stats->up_overhead_bytes = request.body.size() + kFrameHeaderBytes;
    stats->down_payload_bytes = again.payload_bytes;
    stats->down_overhead_bytes = again.overhead_bytes + kFrameHeaderBytes;
    stats->pending_replies = pending;
    stats->wall_ns = NowNs() - start;
  }
  return hint;
}

std::string ClientWorkspace::Path(const std::string& name) const {
  return (fs::path(dir_) / name).string();
}

std::string ClientWorkspace::HintPath(uint64_t query_index) const {
  return (fs::path(dir_) / "hints" / absl::StrCat(query_index, ".hint"))
      .string();
}

bool ClientWorkspace::Exists() const {
  std::error_code ec;
  return fs::exists(Path("state.bin"), ec);
}

absl::Status ClientWorkspace::Save(const ProtocolConfig& config,
                                   const ClientLongTermState& state) const {
  std::error_code ec;
  fs::create_directories(fs::path(dir_) / "hints", ec);
  if (ec) {
    return StateError(absl::StrCat("cannot create ", dir_, ": ", ec.message()));
  }
  ZIPPIR_RETURN_IF_ERROR(
      WriteFileAtomic(Path("config.bin"), SerializeConfig(config)));
  return SaveState(state);
}

absl::Status ClientWorkspace::SaveState(
    const ClientLongTermState& state) const {
  return WriteFileAtomic(Path("state.bin"), SerializeClientState(state));
}

absl::StatusOr<ProtocolConfig> ClientWorkspace::LoadConfig() const {
  ZIPPIR_ASSIGN_OR_RETURN(auto bytes, ReadFileBytes(Path("config.bin")));
  return DeserializeConfig(bytes);
}

absl::StatusOr<ClientLongTermState> ClientWorkspace::LoadState() const {
  ZIPPIR_ASSIGN_OR_RETURN(auto bytes, ReadFileBytes(Path("state.bin")));
  return DeserializeClientState(bytes);
}

absl::Status ClientWorkspace::SaveHint(const ProtocolParams& params,
                                       const PaillierPublicKey& pk,
                                       const ClientHint& hint) const {
  std::error_code ec;
  fs::create_directories(fs::path(dir_) / "hints", ec);
  return WriteFileAtomic(HintPath(hint.query_index),
                         EncodeHintTransfer(params, pk, hint).bytes);
}

absl::StatusOr<std::optional<ClientHint>> ClientWorkspace::LoadHint(
    const ProtocolParams& params, const PaillierPublicKey& pk,
    uint64_t query_index) const {
  std::error_code ec;
  if (!fs::exists(HintPath(query_index), ec)) {
    return std::optional<ClientHint>();
  }
  ZIPPIR_ASSIGN_OR_RETURN(auto bytes, ReadFileBytes(HintPath(query_index)));
  ZIPPIR_ASSIGN_OR_RETURN(ClientHint hint,
                          DecodeHintTransfer(params, pk, bytes));
  return std::optional<ClientHint>(std::move(hint));
}

absl::Status ClientWorkspace::RemoveHint(uint64_t query_index) const {
  std::error_code ec;
  fs::remove(HintPath(query_index), ec);
  if (ec) return StateError(ec.message());
  return absl::OkStatus();
}

}  // namespace zippir
