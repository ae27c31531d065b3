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

#ifndef ZIPPIR_PROTOCOL_CLIENT_H_
#define ZIPPIR_PROTOCOL_CLIENT_H_

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "zippir/additive_he/paillier.h"
#include "zippir/common/prng.h"
#include "zippir/lwe/lwe.h"
#include "zippir/protocol/messages.h"
#include "zippir/protocol/params.h"

namespace zippir {

// Everything a client persists: the Paillier secret key, the sample seed and
// the next unused query index.
struct ClientLongTermState {
  PaillierSecretKey sk;
  Seed seed{};
  uint64_t next_query_index = 0;
};

std::vector<uint8_t> SerializeClientState(const ClientLongTermState& state);
absl::StatusOr<ClientLongTermState> DeserializeClientState(
    std::span<const uint8_t> bytes);

struct QuerySecret {
  uint64_t query_index = 0;
  size_t row = 0;
  LweSecretKey lwe_sk;
};

// Plaintexts of the compression-key samples of one query index.
absl::StatusOr<std::vector<mpz_class>> DecryptHintSamples(
    const ProtocolParams& params, const PaillierSecretKey& sk, const Seed& seed,
    uint64_t query_index);

// Builds the query for row i0 from a fresh LWE key. `matrix` is A and
// `samples` are the decrypted compression-key samples of `query_index`.
absl::StatusOr<std::pair<QueryMessage, QuerySecret>> MakeQuery(
    const ProtocolParams& params,
    const std::vector<std::vector<uint64_t>>& matrix,
    const PaillierPublicKey& pk, const std::vector<mpz_class>& samples,
    uint64_t query_index, size_t i0, Prng& rng);

// Decrypts the hint entries once so several extractions can share them.
absl::StatusOr<std::vector<mpz_class>> DecryptHint(const PaillierSecretKey& sk,
                                                   const ClientHint& hint);

// Row i0 of the database. `hint_plaintexts` is required for the separate and
// client-storage modes unless the separate response carries the hint.
absl::StatusOr<std::vector<uint64_t>> ExtractRow(
    const ProtocolParams& params, const PaillierSecretKey& sk,
    const QuerySecret& secret, const ResponseMessage& response,
    const std::vector<mpz_class>* hint_plaintexts = nullptr);

class Client {
 public:
  static absl::StatusOr<Client> Setup(const ProtocolParams& params, Prng& rng);
  static absl::StatusOr<Client> Restore(const ProtocolParams& params,
                                        ClientLongTermState state);

  const ProtocolParams& params() const { return params_; }
  const ClientLongTermState& state() const { return state_; }
  const PaillierPublicKey& pk() const { return state_.sk.public_key(); }
  ClientId id() const { return ClientIdFor(pk()); }
  HintRequest hint_request() const { return HintRequest{pk(), state_.seed}; }

  // Uses and consumes the next query index. If the samples of that index
  // do not decrypt, the index is skipped and the error is returned.
  absl::StatusOr<std::pair<QueryMessage, QuerySecret>> Query(size_t i0,
                                                             Prng& rng);
  // Query for an explicit index. Indices are consumed in increasing order,
  // so any index below the next unused one is rejected.
  absl::StatusOr<std::pair<QueryMessage, QuerySecret>> QueryAt(
      uint64_t query_index, size_t i0, Prng& rng);

  // Stores a transferred hint for client-storage mode.
  absl::Status StoreHint(const ClientHint& hint);
  bool HasStoredHint(uint64_t query_index) const;

  absl::StatusOr<std::vector<uint64_t>> Extract(
      const QuerySecret& secret, const ResponseMessage& response);

 private:
  Client(const ProtocolParams& params, ClientLongTermState state)
      : params_(params), state_(std::move(state)) {}

  const std::vector<std::vector<uint64_t>>& Matrix();

  ProtocolParams params_;
  ClientLongTermState state_;
  struct StoredHint {
    uint64_t query_index;
    uint64_t db_version;
    std::vector<mpz_class> plain;
  };
  std::vector<StoredHint> stored_hints_;
  std::shared_ptr<const std::vector<std::vector<uint64_t>>> matrix_;
};

}  // namespace zippir

#endif  // ZIPPIR_PROTOCOL_CLIENT_H_
