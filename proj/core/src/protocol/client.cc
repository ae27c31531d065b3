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

#include "zippir/protocol/client.h"

#include <algorithm>
#include <utility>

#include "absl/strings/str_cat.h"
#include "zippir/common/bigint.h"
#include "zippir/common/errors.h"
#include "zippir/common/parallel.h"
#include "zippir/common/status_macros.h"
#include "zippir/common/wire.h"
#include "zippir/compressor/compressor.h"
#include "zippir/lwe/gaussian.h"

namespace zippir {
namespace {

constexpr uint32_t kStateMagic = 0x53435a5a;  // "ZZCS"

}  // namespace

std::vector<uint8_t> SerializeClientState(const ClientLongTermState& state) {
  WireWriter w;
  w.PutU32(kStateMagic);
  const size_t half = (state.sk.public_key().bit_length() / 2 + 7) / 8;
  w.PutBigInt(state.sk.p(), half);
  w.PutBigInt(state.sk.q(), half);
  w.PutBytes(state.seed, /*payload=*/true);
  w.PutU64(state.next_query_index);
  return w.Release();
}

absl::StatusOr<ClientLongTermState> DeserializeClientState(
    std::span<const uint8_t> bytes) {
  WireReader r(bytes);
  auto magic = r.GetU32();
  if (!magic.ok() || *magic != kStateMagic) {
    return InputError("not a client state file");
  }
  auto p = r.GetBigInt();
  auto q = r.GetBigInt();
  auto seed = r.GetBytes(16);
  auto next = r.GetU64();
  if (!p.ok() || !q.ok() || !seed.ok() || !next.ok() || !r.done()) {
    return InputError("truncated client state");
  }
  ZIPPIR_ASSIGN_OR_RETURN(PaillierSecretKey sk,
                          PaillierSecretKey::FromPrimes(*p, *q));
  ClientLongTermState state{std::move(sk), {}, *next};
  std::copy(seed->begin(), seed->end(), state.seed.begin());
  return state;
}

absl::StatusOr<std::vector<mpz_class>> DecryptHintSamples(
    const ProtocolParams& params, const PaillierSecretKey& sk, const Seed& seed,
    uint64_t query_index) {
  const size_t n = params.n();
  const PaillierPublicKey& pk = sk.public_key();
  std::vector<mpz_class> out(n);
  std::vector<absl::Status> errors(n);
  ParallelFor(n, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      auto pt = sk.Decrypt(pk.Sample(seed, HintSampleIndex(query_index, i)));
      if (pt.ok()) {
        out[i] = *std::move(pt);
      } else {
        errors[i] = pt.status();
      }
    }
  });
  for (const auto& e : errors) {
    if (!e.ok()) return e;
  }
  return out;
}

absl::StatusOr<std::pair<QueryMessage, QuerySecret>> MakeQuery(
    const ProtocolParams& params,
    const std::vector<std::vector<uint64_t>>& matrix,
    const PaillierPublicKey& pk, const std::vector<mpz_class>& samples,
    uint64_t query_index, size_t i0, Prng& rng) {
  const size_t n = params.n(), d0 = params.d0();
  if (i0 >= d0) {
    return InputError(absl::StrCat("row index ", i0, " not below d0 = ", d0));
  }
  if (samples.size() != n || matrix.size() != d0) {
    return InputError("sample or matrix dimensions do not match");
  }
  const LweParams& lwe = params.lwe();
  const Modulus& q = lwe.q();
  QuerySecret secret{query_index, i0, LweKeygen(lwe, rng)};
  const auto& s = secret.lwe_sk.s;

  QueryMessage msg;
  msg.client_id = ClientIdFor(pk);
  msg.query_index = query_index;
  msg.qu.resize(d0);
  DiscreteGaussian chi(lwe.sigma());
  std::vector<int64_t> noise(d0);
  for (auto& e : noise) e = chi.Sample(rng);
  ParallelFor(d0, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      uint64_t acc = 0;
      const auto& row = matrix[i];
      for (size_t k = 0; k < n; ++k) acc += row[k] * s[k];
      acc = q.Add(q.Reduce(acc), q.ReduceSigned(noise[i]));
      if (i == i0) acc = q.Add(acc, lwe.delta());
      msg.qu[i] = acc;
    }
  });
  const mpz_class& m = pk.m();
  msg.ck_offset.resize(n);
  for (size_t k = 0; k < n; ++k) {
    mpz_class v = FromU64(s[k]) - samples[k];
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    msg.ck_offset[k] = std::move(v);
  }
  return std::make_pair(std::move(msg), std::move(secret));
}

absl::StatusOr<std::vector<mpz_class>> DecryptHint(const PaillierSecretKey& sk,
                                                   const ClientHint& hint) {
  std::vector<mpz_class> out(hint.k.size());
  for (size_t c = 0; c < hint.k.size(); ++c) {
    ZIPPIR_ASSIGN_OR_RETURN(out[c], sk.Decrypt(hint.k[c]));
  }
  return out;
}

absl::StatusOr<std::vector<uint64_t>> ExtractRow(
    const ProtocolParams& params, const PaillierSecretKey& sk,
    const QuerySecret& secret, const ResponseMessage& response,
    const std::vector<mpz_class>* hint_plaintexts) {
  if (response.query_index != secret.query_index) {
    return StateError("response belongs to a different query");
  }
  const size_t entries = params.hint_entries();
  const mpz_class& m = sk.public_key().m();
  std::vector<mpz_class> mu(entries);
  if (response.mode == ResponseMode::kCombined) {
    if (response.ciphertexts.size() != entries) {
      return ProtocolError("response length does not match the parameters");
    }
    for (size_t c = 0; c < entries; ++c) {
      ZIPPIR_ASSIGN_OR_RETURN(mu[c], sk.Decrypt(response.ciphertexts[c]));
    }
  } else {
    std::vector<mpz_class> decrypted;
    if (hint_plaintexts == nullptr) {
      if (response.mode != ResponseMode::kSeparate) {
        return StateError("client-storage response needs the stored hint");
      }
      ZIPPIR_ASSIGN_OR_RETURN(
          decrypted,
          DecryptHint(sk, ClientHint{response.query_index, response.db_version,
                                     response.ciphertexts}));
      hint_plaintexts = &decrypted;
    }
    if (response.t.size() != entries || hint_plaintexts->size() != entries) {
      return ProtocolError("response length does not match the parameters");
    }
    for (size_t c = 0; c < entries; ++c) {
      mu[c] = response.t[c] + (*hint_plaintexts)[c];
      mpz_mod(mu[c].get_mpz_t(), mu[c].get_mpz_t(), m.get_mpz_t());
    }
  }
  std::vector<uint64_t> row;
  row.reserve(params.d1());
  for (size_t c = 0; c < entries; ++c) {
    for (uint64_t phase :
         BatchedPhasesFromPlaintext(params.lwe(), std::move(mu[c]),
                                    params.gamma(), params.ColumnsInEntry(c))) {
      row.push_back(DecodePhase(params.lwe(), phase));
    }
  }
  return row;
}

absl::StatusOr<Client> Client::Setup(const ProtocolParams& params, Prng& rng) {
  ZIPPIR_ASSIGN_OR_RETURN(PaillierKeyPair keys,
                          PaillierKeygen(params.paillier_bits(), rng));
  ClientLongTermState state{std::move(keys.sk), rng.NextSeed(), 0};
  return Client(params, std::move(state));
}

absl::StatusOr<Client> Client::Restore(const ProtocolParams& params,
                                       ClientLongTermState state) {
  if (state.sk.public_key().bit_length() != params.paillier_bits()) {
    return InputError("stored key size does not match the parameters");
  }
  return Client(params, std::move(state));
}

const std::vector<std::vector<uint64_t>>& Client::Matrix() {
  if (matrix_ == nullptr) {
    matrix_ = std::make_shared<const std::vector<std::vector<uint64_t>>>(
        params_.ExpandMatrix());
  }
  return *matrix_;
}

absl::StatusOr<std::pair<QueryMessage, QuerySecret>> Client::Query(size_t i0,
                                                                   Prng& rng) {
  if (i0 >= params_.d0()) {
    return InputError(
        absl::StrCat("row index ", i0, " not below d0 = ", params_.d0()));
  }
  return QueryAt(state_.next_query_index, i0, rng);
}

absl::StatusOr<std::pair<QueryMessage, QuerySecret>> Client::QueryAt(
    uint64_t query_index, size_t i0, Prng& rng) {
  if (i0 >= params_.d0()) {
    return InputError(
        absl::StrCat("row index ", i0, " not below d0 = ", params_.d0()));
  }
  if (query_index < state_.next_query_index) {
    return StateError(
        absl::StrCat("query index ", query_index, " was already used"));
  }
  state_.next_query_index = query_index + 1;
  ZIPPIR_ASSIGN_OR_RETURN(
      std::vector<mpz_class> samples,
      DecryptHintSamples(params_, state_.sk, state_.seed, query_index));
  return MakeQuery(params_, Matrix(), pk(), samples, query_index, i0, rng);
}

absl::Status Client::StoreHint(const ClientHint& hint) {
  if (HasStoredHint(hint.query_index)) {
    return StateError("a hint for this query index is already stored");
  }
  ZIPPIR_ASSIGN_OR_RETURN(std::vector<mpz_class> plain,
                          DecryptHint(state_.sk, hint));
  stored_hints_.push_back(
      StoredHint{hint.query_index, hint.db_version, std::move(plain)});
  return absl::OkStatus();
}

bool Client::HasStoredHint(uint64_t query_index) const {
  return std::any_of(
      stored_hints_.begin(), stored_hints_.end(),
      [&](const auto& e) { return e.query_index == query_index; });
}

absl::StatusOr<std::vector<uint64_t>> Client::Extract(
    const QuerySecret& secret, const ResponseMessage& response) {
  if (response.mode == ResponseMode::kClientStorage) {
    auto it = std::find_if(
        stored_hints_.begin(), stored_hints_.end(),
        [&](const auto& e) { return e.query_index == secret.query_index; });
    if (it == stored_hints_.end()) {
      return StateError("no stored hint for this query index");
    }
    if (it->db_version != response.db_version) {
      absl::Status stale = StateError(
          absl::StrCat("the stored hint belongs to database version ",
                       it->db_version, " but the response to version ",
                       response.db_version, "; fetch a fresh hint"));
      stored_hints_.erase(it);
      return stale;
    }
    auto row = ExtractRow(params_, state_.sk, secret, response, &it->plain);
    stored_hints_.erase(it);
    return row;
  }
  return ExtractRow(params_, state_.sk, secret, response);
}

}  // namespace zippir
