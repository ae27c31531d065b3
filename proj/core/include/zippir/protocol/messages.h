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

#ifndef ZIPPIR_PROTOCOL_MESSAGES_H_
#define ZIPPIR_PROTOCOL_MESSAGES_H_

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "zippir/additive_he/paillier.h"
#include "zippir/common/prng.h"
#include "zippir/protocol/params.h"

namespace zippir {

enum class MessageType : uint8_t {
  kHintRequest = 1,
  kQuery = 2,
  kResponseSeparate = 3,
  kResponseCombined = 4,
  kHintTransfer = 5,
};

// Separate: t with the server-stored hint. Combined: hint (+) t. Client
// storage: t alone, the client already holds the hint.
enum class ResponseMode : uint8_t {
  kSeparate = 0,
  kCombined = 1,
  kClientStorage = 2,
};

using ClientId = std::array<uint8_t, 16>;

ClientId ClientIdFor(const PaillierPublicKey& pk);

struct HintRequest {
  PaillierPublicKey pk;
  Seed seed;
};

struct QueryMessage {
  ClientId client_id{};
  uint64_t query_index = 0;
  // ck_o: n entries in [0, m).
  std::vector<mpz_class> ck_offset;
  // qu_0: d0 entries in [0, q).
  std::vector<uint64_t> qu;
};

struct ClientHint {
  uint64_t query_index = 0;
  uint64_t db_version = 0;
  std::vector<PaillierCiphertext> k;
};

struct ResponseMessage {
  ResponseMode mode = ResponseMode::kSeparate;
  uint64_t query_index = 0;
  uint64_t db_version = 0;
  // Separate and client-storage modes.
  std::vector<mpz_class> t;
  // Hint for separate mode, hint (+) t for combined mode.
  std::vector<PaillierCiphertext> ciphertexts;
};

struct EncodedMessage {
  std::vector<uint8_t> bytes;
  size_t payload_bytes = 0;
  size_t overhead_bytes = 0;
};

absl::StatusOr<MessageType> PeekMessageType(std::span<const uint8_t> bytes);

EncodedMessage EncodeHintRequest(const ProtocolParams& params,
                                 const HintRequest& msg);
absl::StatusOr<HintRequest> DecodeHintRequest(const ProtocolParams& params,
                                              std::span<const uint8_t> bytes);

EncodedMessage EncodeQuery(const ProtocolParams& params,
                           const PaillierPublicKey& pk,
                           const QueryMessage& msg);
// Shape checks only; range checks against m happen in the server.
absl::StatusOr<QueryMessage> DecodeQuery(const ProtocolParams& params,
                                         std::span<const uint8_t> bytes);

EncodedMessage EncodeResponse(const ProtocolParams& params,
                              const PaillierPublicKey& pk,
                              const ResponseMessage& msg);
absl::StatusOr<ResponseMessage> DecodeResponse(const ProtocolParams& params,
                                               const PaillierPublicKey& pk,
                                               std::span<const uint8_t> bytes);

EncodedMessage EncodeHintTransfer(const ProtocolParams& params,
                                  const PaillierPublicKey& pk,
                                  const ClientHint& hint);
absl::StatusOr<ClientHint> DecodeHintTransfer(const ProtocolParams& params,
                                              const PaillierPublicKey& pk,
                                              std::span<const uint8_t> bytes);

}  // namespace zippir

#endif  // ZIPPIR_PROTOCOL_MESSAGES_H_
