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

#include "zippir/protocol/server.h"

#include <algorithm>
#include <chrono>
#include <utility>

#include "absl/strings/str_cat.h"
#include "zippir/additive_he/multiexp.h"
#include "zippir/common/bigint.h"
#include "zippir/common/errors.h"
#include "zippir/common/parallel.h"
#include "zippir/common/status_macros.h"
#include "zippir/compressor/compressor.h"

namespace zippir {
namespace {

using Clock = std::chrono::steady_clock;

uint64_t ElapsedNs(Clock::time_point since) {
  return static_cast<uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - since)
          .count());
}

// Rows of H per cache block.
constexpr size_t kHintBlockRows = 32;

// H[j] = -sum_i db[i][j] A[i] over words of type W, exact modulo 2^bits(W).
template <typename W>
void ComputeHint(const Database& db,
                 const std::vector<std::vector<uint64_t>>& a, size_t n,
                 const Modulus& q, std::vector<uint64_t>& h) {
  const size_t d0 = db.d0(), d1 = db.d1();
  std::vector<W> a_flat(d0 * n);
  for (size_t i = 0; i < d0; ++i) {
    for (size_t k = 0; k < n; ++k) a_flat[i * n + k] = static_cast<W>(a[i][k]);
  }
  const size_t blocks = (d1 + kHintBlockRows - 1) / kHintBlockRows;
  ParallelFor(blocks, [&](size_t begin, size_t end) {
    std::vector<W> acc(kHintBlockRows * n);
    for (size_t blk = begin; blk < end; ++blk) {
      const size_t j0 = blk * kHintBlockRows;
      const size_t j1 = std::min(d1, j0 + kHintBlockRows);
      std::fill(acc.begin(), acc.end(), W{0});
      for (size_t i = 0; i < d0; ++i) {
        const W* row = a_flat.data() + i * n;
        const uint8_t* cells = db.symbols().data() + i * d1;
        for (size_t j = j0; j < j1; ++j) {
          const W c = cells[j];
          if (c == 0) continue;
          W* out = acc.data() + (j - j0) * n;
          for (size_t k = 0; k < n; ++k) out[k] += c * row[k];
        }
      }
      for (size_t j = j0; j < j1; ++j) {
        const W* src = acc.data() + (j - j0) * n;
        for (size_t k = 0; k < n; ++k) {
          h[j * n + k] = q.Neg(q.Reduce(static_cast<uint64_t>(src[k])));
        }
      }
    }
  });
}

template <typename W>
std::vector<uint64_t> DbTransposeTimes(const Database& db,
                                       const std::vector<uint64_t>& qu,
                                       const Modulus& q) {
  const size_t d0 = db.d0(), d1 = db.d1();
  std::vector<W> acc(d1, W{0});
  for (size_t i = 0; i < d0; ++i) {
    const W x = static_cast<W>(qu[i]);
    const uint8_t* cells = db.symbols().data() + i * d1;
    for (size_t j = 0; j < d1; ++j) acc[j] += cells[j] * x;
  }
  std::vector<uint64_t> out(d1);
  for (size_t j = 0; j < d1; ++j)
    out[j] = q.Reduce(static_cast<uint64_t>(acc[j]));
  return out;
}

}  // namespace

absl::StatusOr<Database> Database::Create(size_t d0, size_t d1, uint64_t p,
                                          std::vector<uint8_t> symbols) {
  if (d0 == 0 || d1 == 0)
    return InputError("database dimensions must be positive");
  if (p < 2 || p > 256) return InputError("p must be in [2, 256]");
  if (symbols.size() != d0 * d1) {
    return InputError(
        absl::StrCat("expected ", d0 * d1, " symbols, got ", symbols.size()));
  }
  for (uint8_t s : symbols) {
    if (s >= p) return InputError("database symbol not below p");
  }
  return Database(d0, d1, p, std::move(symbols));
}

Database Database::Random(size_t d0, size_t d1, uint64_t p, Prng& rng) {
  std::vector<uint8_t> symbols(d0 * d1);
  for (auto& s : symbols) s = static_cast<uint8_t>(rng.UniformBelow(p));
  return Database(d0, d1, p, std::move(symbols));
}

std::vector<uint64_t> Database::Row(size_t i) const {
  return std::vector<uint64_t>(symbols_.begin() + i * d1_,
                               symbols_.begin() + (i + 1) * d1_);
}

ClientRegistration RegisterClient(const HintRequest& request) {
  return ClientRegistration{ClientIdFor(request.pk), request.pk, request.seed};
}

std::vector<std::vector<mpz_class>> ScaledHintMatrix(
    const ProtocolParams& params, const std::vector<uint64_t>& h) {
  const size_t n = params.n();
  const size_t entries = params.hint_entries();
  std::vector<std::vector<mpz_class>> out(entries, std::vector<mpz_class>(n));
  ParallelFor(entries * n, [&](size_t begin, size_t end) {
    for (size_t e = begin; e < end; ++e) {
      const size_t c = e / n, i = e % n;
      const size_t first = c * params.batch_capacity();
      mpz_class acc = 0;
      for (size_t pos = params.ColumnsInEntry(c); pos-- > 0;) {
        acc *= params.gamma();
        acc += FromU64(h[(first + pos) * n + i]);
      }
      out[c][i] = std::move(acc);
    }
  });
  return out;
}

absl::StatusOr<std::shared_ptr<const ServerState>> ServerState::Create(
    const ProtocolParams& params, std::shared_ptr<const Database> db,
    uint64_t db_version) {
  if (db == nullptr) return InputError("missing database");
  if (db->d0() != params.d0() || db->d1() != params.d1() ||
      db->p() != params.p()) {
    return InputError("database shape does not match the parameters");
  }
  auto state = std::shared_ptr<ServerState>(
      new ServerState(params, std::move(db), db_version));
  const size_t n = params.n();
  const Modulus& q = params.lwe().q();
  state->h_.assign(params.d1() * n, 0);
  {
    auto a = params.ExpandMatrix();
    if (params.config().log2_q <= 32) {
      ComputeHint<uint32_t>(*state->db_, a, n, q, state->h_);
    } else {
      ComputeHint<uint64_t>(*state->db_, a, n, q, state->h_);
    }
  }
  ZIPPIR_ASSIGN_OR_RETURN(
      RnsMatrix scaled,
      RnsMatrix::FromMpz(RnsBasis::Default(),
                         ScaledHintMatrix(params, state->h_)));
  ZIPPIR_ASSIGN_OR_RETURN(
      RnsMatMul rns, RnsMatMul::Create(RnsBasis::Default(), std::move(scaled),
                                       Pow2(params.paillier_bits())));
  state->rns_ = std::make_unique<RnsMatMul>(std::move(rns));
  return std::shared_ptr<const ServerState>(std::move(state));
}

absl::StatusOr<ClientHint> ServerState::GenerateHint(
    const ClientRegistration& client, uint64_t query_index) const {
  const size_t n = params_.n();
  const PaillierPublicKey& pk = client.pk;
  if (pk.bit_length() != params_.paillier_bits()) {
    return InputError("client modulus size does not match the parameters");
  }
  std::vector<PaillierCiphertext> samples(n);
  for (size_t i = 0; i < n; ++i) {
    samples[i] = pk.Sample(client.seed, HintSampleIndex(query_index, i));
  }
  const unsigned bits = params_.config().log2_q;
  FixedBaseMultiExp engine(pk, std::move(samples), bits,
                           FixedBaseMultiExp::OptimalWindow(n, bits));
  const size_t d1 = params_.d1();
  std::vector<PaillierCiphertext> columns(d1);
  ParallelFor(d1, [&](size_t begin, size_t end) {
    for (size_t j = begin; j < end; ++j) {
      columns[j] = engine.Evaluate(std::span<const uint64_t>(HintRow(j), n));
    }
  });
  ClientHint hint{query_index, db_version_, {}};
  hint.k.resize(params_.hint_entries());
  ParallelFor(hint.k.size(), [&](size_t begin, size_t end) {
    for (size_t c = begin; c < end; ++c) {
      const size_t first = c * params_.batch_capacity();
      const size_t count = params_.ColumnsInEntry(c);
      PaillierCiphertext acc = columns[first + count - 1];
      for (size_t pos = count - 1; pos-- > 0;) {
        acc = ScaleByAdditions(pk, params_.gamma(), acc);
        pk.AddInPlace(acc, columns[first + pos]);
      }
      hint.k[c] = std::move(acc);
    }
  });
  return hint;
}

std::vector<uint64_t> ServerState::DatabaseProduct(
    const std::vector<uint64_t>& qu) const {
  const Modulus& q = params_.lwe().q();
  if (params_.config().log2_q <= 32)
    return DbTransposeTimes<uint32_t>(*db_, qu, q);
  return DbTransposeTimes<uint64_t>(*db_, qu, q);
}

absl::StatusOr<ResponseMessage> ServerState::Respond(
    const ClientRegistration& client, const QueryMessage& query,
    ResponseMode mode, const ClientHint* hint, RespondTimings* timings) const {
  const PaillierPublicKey& pk = client.pk;
  const mpz_class& m = pk.m();
  if (query.ck_offset.size() != params_.n() ||
      query.qu.size() != params_.d0()) {
    return InputError("query dimensions do not match the parameters");
  }
  const Modulus& q = params_.lwe().q();
  for (uint64_t v : query.qu) {
    if (static_cast<uint128>(v) >= q.value()) {
      return InputError("query entry not below q");
    }
  }
  for (const mpz_class& v : query.ck_offset) {
    if (sgn(v) < 0 || v >= m) return InputError("offset entry not below m");
  }
  if (mode != ResponseMode::kClientStorage) {
    if (hint == nullptr) return StateError("no stored hint for this query");
    if (hint->query_index != query.query_index ||
        hint->db_version != db_version_ ||
        hint->k.size() != params_.hint_entries()) {
      return StateError("stored hint does not match this query");
    }
  }
  RespondTimings local;

  auto start = Clock::now();
  std::vector<uint64_t> b = DatabaseProduct(query.qu);
  local.db_matmul_ns = ElapsedNs(start);

  start = Clock::now();
  ZIPPIR_ASSIGN_OR_RETURN(std::vector<mpz_class> hck,
                          rns_->Multiply(query.ck_offset, m));
  local.hint_matmul_ns = ElapsedNs(start);

  start = Clock::now();
  ResponseMessage out;
  out.mode = mode;
  out.query_index = query.query_index;
  out.db_version = db_version_;
  const size_t entries = params_.hint_entries();
  std::vector<mpz_class> t(entries);
  for (size_t c = 0; c < entries; ++c) {
    const size_t first = c * params_.batch_capacity();
    mpz_class acc = 0;
    for (size_t pos = params_.ColumnsInEntry(c); pos-- > 0;) {
      acc *= params_.gamma();
      acc += FromU64(b[first + pos]);
    }
    acc += hck[c];
    mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), m.get_mpz_t());
    t[c] = std::move(acc);
  }
  switch (mode) {
    case ResponseMode::kSeparate:
      out.t = std::move(t);
      out.ciphertexts = hint->k;
      break;
    case ResponseMode::kCombined:
      out.ciphertexts.reserve(entries);
      for (size_t c = 0; c < entries; ++c) {
        out.ciphertexts.push_back(pk.AddPlain(hint->k[c], t[c]));
      }
      break;
    case ResponseMode::kClientStorage:
      out.t = std::move(t);
      break;
  }
  local.other_ns = ElapsedNs(start);
  if (timings != nullptr) *timings = local;
  return out;
}

}  // namespace zippir
