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

#ifndef ZIPPIR_PROTOCOL_SERVER_H_
#define ZIPPIR_PROTOCOL_SERVER_H_

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "absl/status/statusor.h"
#include "zippir/additive_he/paillier.h"
#include "zippir/protocol/messages.h"
#include "zippir/protocol/params.h"
#include "zippir/rns/rns.h"

namespace zippir {

// d0 x d1 matrix of Z_p symbols, row-major.
class Database {
 public:
  static absl::StatusOr<Database> Create(size_t d0, size_t d1, uint64_t p,
                                         std::vector<uint8_t> symbols);
  static Database Random(size_t d0, size_t d1, uint64_t p, Prng& rng);

  size_t d0() const { return d0_; }
  size_t d1() const { return d1_; }
  uint64_t p() const { return p_; }
  uint8_t at(size_t i, size_t j) const { return symbols_[i * d1_ + j]; }
  std::vector<uint64_t> Row(size_t i) const;
  const std::vector<uint8_t>& symbols() const { return symbols_; }

 private:
  Database(size_t d0, size_t d1, uint64_t p, std::vector<uint8_t> symbols)
      : d0_(d0), d1_(d1), p_(p), symbols_(std::move(symbols)) {}

  size_t d0_;
  size_t d1_;
  uint64_t p_;
  std::vector<uint8_t> symbols_;
};

struct ClientRegistration {
  ClientId id{};
  PaillierPublicKey pk;
  Seed seed{};
};

ClientRegistration RegisterClient(const HintRequest& request);

// Wall time of the phases of one response, in nanoseconds.
struct RespondTimings {
  uint64_t db_matmul_ns = 0;
  uint64_t hint_matmul_ns = 0;
  uint64_t other_ns = 0;

  uint64_t total_ns() const { return db_matmul_ns + hint_matmul_ns + other_ns; }
};

// Client-independent server state for one database version. Immutable.
class ServerState {
 public:
  static absl::StatusOr<std::shared_ptr<const ServerState>> Create(
      const ProtocolParams& params, std::shared_ptr<const Database> db,
      uint64_t db_version);

  const ProtocolParams& params() const { return params_; }
  const Database& db() const { return *db_; }
  std::shared_ptr<const Database> shared_db() const { return db_; }
  uint64_t db_version() const { return db_version_; }
  // H = -db^T A mod q, d1 rows of n entries.
  const std::vector<uint64_t>& hint_matrix() const { return h_; }
  const uint64_t* HintRow(size_t j) const {
    return h_.data() + j * params_.n();
  }
  const RnsMatMul& rns_hint() const { return *rns_; }

  // k = H' (x) ck_r for the samples of query index t, where H' groups the
  // rows of H into gamma-scaled hint entries.
  absl::StatusOr<ClientHint> GenerateHint(const ClientRegistration& client,
                                          uint64_t query_index) const;

  // b = db^T qu mod q.
  std::vector<uint64_t> DatabaseProduct(const std::vector<uint64_t>& qu) const;

  // Separate and combined modes need the stored hint for this query.
  absl::StatusOr<ResponseMessage> Respond(
      const ClientRegistration& client, const QueryMessage& query,
      ResponseMode mode, const ClientHint* hint,
      RespondTimings* timings = nullptr) const;

 private:
  ServerState(const ProtocolParams& params, std::shared_ptr<const Database> db,
              uint64_t db_version)
      : params_(params), db_(std::move(db)), db_version_(db_version) {}

  ProtocolParams params_;
  std::shared_ptr<const Database> db_;
  uint64_t db_version_;
  std::vector<uint64_t> h_;
  std::unique_ptr<RnsMatMul> rns_;
};

// Plain big-integer hint H' = sum_pos gamma^pos H[c * cap + pos], used by
// tests as an oracle for the RNS path.
std::vector<std::vector<mpz_class>> ScaledHintMatrix(
    const ProtocolParams& params, const std::vector<uint64_t>& h);

}  // namespace zippir

#endif  // ZIPPIR_PROTOCOL_SERVER_H_
