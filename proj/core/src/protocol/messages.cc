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

#include "zippir/protocol/messages.h"

#include <sodium.h>

#include <algorithm>
#include <utility>

#include "absl/strings/str_cat.h"
#include "zippir/common/bigint.h"
#include "zippir/common/errors.h"
#include "zippir/common/status_macros.h"
#include "zippir/common/wire.h"

namespace zippir {
namespace {

constexpr size_t kHeaderBytes = 2 + 32;

void PutHeader(const ProtocolParams& params, MessageType type, WireWriter& w) {
  w.PutU8(kProtocolVersion);
  w.PutU8(static_cast<uint8_t>(type));
  w.PutBytes(params.hash(), /*payload=*/false);
}

EncodedMessage Finish(WireWriter& w) {
  EncodedMessage out;
  out.payload_bytes = w.payload_bytes();
  out.overhead_bytes = w.overhead_bytes();
  out.bytes = w.Release();
  return out;
}

// Maps wire-level decoding failures into protocol errors.
absl::Status AsProtocol(const absl::Status& status) {
  if (status.ok() || HasErrorKind(status)) return status;
  return ProtocolError(status.message());
}

template <typename T>
absl::StatusOr<T> AsProtocol(absl::StatusOr<T> v) {
  if (v.ok()) return v;
  return AsProtocol(v.status());
}

absl::Status ReadHeader(const ProtocolParams& params, MessageType expected,
                        WireReader& r) {
  ZIPPIR_ASSIGN_OR_RETURN(uint8_t version, AsProtocol(r.GetU8()));
  if (version != kProtocolVersion) {
    return ProtocolError(absl::StrCat("unsupported protocol version ",
                                      static_cast<int>(version)));
  }
  ZIPPIR_ASSIGN_OR_RETURN(uint8_t type, AsProtocol(r.GetU8()));
  if (type != static_cast<uint8_t>(expected)) {
    return ProtocolError(absl::StrCat("expected message type ",
                                      static_cast<int>(expected), ", got ",
                                      static_cast<int>(type)));
  }
  ZIPPIR_ASSIGN_OR_RETURN(auto hash, AsProtocol(r.GetBytes(32)));
  if (!std::equal(hash.begin(), hash.end(), params.hash().begin())) {
    return ProtocolError("message was built for different parameters");
  }
  return absl::OkStatus();
}

absl::Status ExpectDone(const WireReader& r) {
  if (!r.done()) return ProtocolError("trailing bytes after message");
  return absl::OkStatus();
}

void PutCiphertexts(const PaillierPublicKey& pk,
                    const std::vector<PaillierCiphertext>& cts, WireWriter& w) {
  std::vector<mpz_class> values;
  values.reserve(cts.size());
  for (const auto& ct : cts) values.push_back(ct.c);
  w.PutBigIntVector(values, pk.ciphertext_bytes());
}

absl::StatusOr<std::vector<PaillierCiphertext>> GetCiphertexts(
    const PaillierPublicKey& pk, WireReader& r, size_t expected) {
  ZIPPIR_ASSIGN_OR_RETURN(std::vector<mpz_class> values,
                          AsProtocol(r.GetBigIntVector()));
  if (values.size() != expected) {
    return ProtocolError(absl::StrCat("expected ", expected,
                                      " ciphertexts, got ", values.size()));
  }
  std::vector<PaillierCiphertext> out;
  out.reserve(values.size());
  for (auto& v : values) {
    if (v >= pk.m_squared()) return ProtocolError("ciphertext not below m^2");
    out.push_back(PaillierCiphertext{std::move(v)});
  }
  return out;
}

void PutClientId(const ClientId& id, WireWriter& w) {
  w.PutBytes(id, /*payload=*/false);
}

absl::StatusOr<ClientId> GetClientId(WireReader& r) {
  ZIPPIR_ASSIGN_OR_RETURN(auto bytes, AsProtocol(r.GetBytes(16)));
  ClientId id;
  std::copy(bytes.begin(), bytes.end(), id.begin());
  return id;
}

}  // namespace

ClientId ClientIdFor(const PaillierPublicKey& pk) {
  std::vector<uint8_t> m = ToLittleEndian(pk.m());
  ClientId id;
  crypto_generichash(id.data(), id.size(), m.data(), m.size(), nullptr, 0);
  return id;
}

absl::StatusOr<MessageType> PeekMessageType(std::span<const uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) return ProtocolError("truncated header");
  if (bytes[0] != kProtocolVersion) {
    return ProtocolError("unsupported protocol version");
  }
  uint8_t type = bytes[1];
  if (type < static_cast<uint8_t>(MessageType::kHintRequest) ||
      type > static_cast<uint8_t>(MessageType::kHintTransfer)) {
    return ProtocolError(absl::StrCat("unknown message type ", type));
  }
  return static_cast<MessageType>(type);
}

// Public key as (m, g) followed by the seed: 2 log2 m + lambda bits.
EncodedMessage EncodeHintRequest(const ProtocolParams& params,
                                 const HintRequest& msg) {
  WireWriter w;
  PutHeader(params, MessageType::kHintRequest, w);
  w.PutBigInt(msg.pk.m(), msg.pk.plaintext_bytes());
  w.PutBigInt(msg.pk.g(), msg.pk.plaintext_bytes());
  w.PutBytes(msg.seed, /*payload=*/true);
  return Finish(w);
}

absl::StatusOr<HintRequest> DecodeHintRequest(const ProtocolParams& params,
                                              std::span<const uint8_t> bytes) {
  WireReader r(bytes);
  ZIPPIR_RETURN_IF_ERROR(ReadHeader(params, MessageType::kHintRequest, r));
  ZIPPIR_ASSIGN_OR_RETURN(mpz_class m, AsProtocol(r.GetBigInt()));
  ZIPPIR_ASSIGN_OR_RETURN(mpz_class g, AsProtocol(r.GetBigInt()));
  if (g != m + 1) return ProtocolError("generator must be m + 1");
  auto pk = PaillierPublicKey::Create(m);
  if (!pk.ok()) return ProtocolError(pk.status().message());
  if (pk->bit_length() != params.paillier_bits()) {
    return ProtocolError(absl::StrCat("expected a ", params.paillier_bits(),
                                      "-bit modulus, got ", pk->bit_length()));
  }
  ZIPPIR_ASSIGN_OR_RETURN(auto seed_bytes, AsProtocol(r.GetBytes(16)));
  ZIPPIR_RETURN_IF_ERROR(ExpectDone(r));
  Seed seed;
  std::copy(seed_bytes.begin(), seed_bytes.end(), seed.begin());
  return HintRequest{*std::move(pk), seed};
}

EncodedMessage EncodeQuery(const ProtocolParams& params,
                           const PaillierPublicKey& pk,
                           const QueryMessage& msg) {
  WireWriter w;
  PutHeader(params, MessageType::kQuery, w);
  PutClientId(msg.client_id, w);
  w.PutU64(msg.query_index);
  w.PutBigIntVector(msg.ck_offset, pk.plaintext_bytes());
  w.PutPackedWords(msg.qu, params.config().log2_q);
  return Finish(w);
}

absl::StatusOr<QueryMessage> DecodeQuery(const ProtocolParams& params,
                                         std::span<const uint8_t> bytes) {
  WireReader r(bytes);
  ZIPPIR_RETURN_IF_ERROR(ReadHeader(params, MessageType::kQuery, r));
  QueryMessage msg;
  ZIPPIR_ASSIGN_OR_RETURN(msg.client_id, GetClientId(r));
  ZIPPIR_ASSIGN_OR_RETURN(msg.query_index, AsProtocol(r.GetU64()));
  ZIPPIR_ASSIGN_OR_RETURN(msg.ck_offset, AsProtocol(r.GetBigIntVector()));
  ZIPPIR_ASSIGN_OR_RETURN(msg.qu,
                          AsProtocol(r.GetPackedWords(params.config().log2_q)));
  ZIPPIR_RETURN_IF_ERROR(ExpectDone(r));
  if (msg.ck_offset.size() != params.n() || msg.qu.size() != params.d0()) {
    return ProtocolError("query dimensions do not match the parameters");
  }
  return msg;
}

EncodedMessage EncodeResponse(const ProtocolParams& params,
                              const PaillierPublicKey& pk,
                              const ResponseMessage& msg) {
  WireWriter w;
  PutHeader(params,
            msg.mode == ResponseMode::kCombined
                ? MessageType::kResponseCombined
                : MessageType::kResponseSeparate,
            w);
  w.PutU8(static_cast<uint8_t>(msg.mode));
  w.PutU64(msg.query_index);
  w.PutU64(msg.db_version);
  if (msg.mode != ResponseMode::kCombined) {
    w.PutBigIntVector(msg.t, pk.plaintext_bytes());
  }
  if (msg.mode != ResponseMode::kClientStorage) {
    PutCiphertexts(pk, msg.ciphertexts, w);
  }
  return Finish(w);
}

absl::StatusOr<ResponseMessage> DecodeResponse(const ProtocolParams& params,
                                               const PaillierPublicKey& pk,
                                               std::span<const uint8_t> bytes) {
  ZIPPIR_ASSIGN_OR_RETURN(MessageType type, PeekMessageType(bytes));
  if (type != MessageType::kResponseSeparate &&
      type != MessageType::kResponseCombined) {
    return ProtocolError("not a response message");
  }
  WireReader r(bytes);
  ZIPPIR_RETURN_IF_ERROR(ReadHeader(params, type, r));
  ResponseMessage msg;
  ZIPPIR_ASSIGN_OR_RETURN(uint8_t mode, AsProtocol(r.GetU8()));
  if (mode > static_cast<uint8_t>(ResponseMode::kClientStorage) ||
      (mode == static_cast<uint8_t>(ResponseMode::kCombined)) !=
          (type == MessageType::kResponseCombined)) {
    return ProtocolError("response mode does not match the message type");
  }
  msg.mode = static_cast<ResponseMode>(mode);
  ZIPPIR_ASSIGN_OR_RETURN(msg.query_index, AsProtocol(r.GetU64()));
  ZIPPIR_ASSIGN_OR_RETURN(msg.db_version, AsProtocol(r.GetU64()));
  const size_t entries = params.hint_entries();
  if (msg.mode != ResponseMode::kCombined) {
    ZIPPIR_ASSIGN_OR_RETURN(msg.t, AsProtocol(r.GetBigIntVector()));
    if (msg.t.size() != entries) {
      return ProtocolError("response length does not match the parameters");
    }
    for (const auto& v : msg.t) {
      if (v >= pk.m()) return ProtocolError("response entry not below m");
    }
  }
  if (msg.mode != ResponseMode::kClientStorage) {
    ZIPPIR_ASSIGN_OR_RETURN(msg.ciphertexts, GetCiphertexts(pk, r, entries));
  }
  ZIPPIR_RETURN_IF_ERROR(ExpectDone(r));
  return msg;
}

EncodedMessage EncodeHintTransfer(const ProtocolParams& params,
                                  const PaillierPublicKey& pk,
                                  const ClientHint& hint) {
  WireWriter w;
  PutHeader(params, MessageType::kHintTransfer, w);
  w.PutU64(hint.query_index);
  w.PutU64(hint.db_version);
  PutCiphertexts(pk, hint.k, w);
  return Finish(w);
}

absl::StatusOr<ClientHint> DecodeHintTransfer(const ProtocolParams& params,
                                              const PaillierPublicKey& pk,
                                              std::span<const uint8_t> bytes) {
  WireReader r(bytes);
  ZIPPIR_RETURN_IF_ERROR(ReadHeader(params, MessageType::kHintTransfer, r));
  ClientHint hint;
  ZIPPIR_ASSIGN_OR_RETURN(hint.query_index, AsProtocol(r.GetU64()));
  ZIPPIR_ASSIGN_OR_RETURN(hint.db_version, AsProtocol(r.GetU64()));
  ZIPPIR_ASSIGN_OR_RETURN(hint.k, GetCiphertexts(pk, r, params.hint_entries()));
  ZIPPIR_RETURN_IF_ERROR(ExpectDone(r));
  return hint;
}

}  // namespace zippir
