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

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <vector>

#include "gtest/gtest.h"
#include "test_keys.h"
#include "zippir/additive_he/op_counters.h"
#include "zippir/common/errors.h"
#include "zippir/protocol/client.h"
#include "zippir/protocol/messages.h"
#include "zippir/protocol/params.h"
#include "zippir/protocol/server.h"

namespace zippir {
namespace {

using ::zippir::testing::CachedKey;
using ::zippir::testing::Key2491;
using ::zippir::testing::TestPrng;

ProtocolConfig ToyConfig() {
  ProtocolConfig c;
  c.n = 2;
  c.log2_q = 4;
  c.p = 4;
  c.sigma = 0;
  c.paillier_bits = 12;
  c.d0 = 4;
  c.d1 = 4;
  return c;
}

ProtocolConfig SmallConfig() {
  ProtocolConfig c;
  c.n = 64;
  c.paillier_bits = 1024;
  c.d0 = 64;
  c.d1 = 48;
  return c;
}

// A client holding a fixed key, for parameter sets below the keygen minimum.
Client ClientWithKey(const ProtocolParams& params, const PaillierSecretKey& sk,
                     uint64_t seed) {
  ClientLongTermState state{sk, TestPrng(seed).NextSeed(), 0};
  return *Client::Restore(params, std::move(state));
}

// Issues queries until the sampled compression key decrypts.
std::pair<QueryMessage, QuerySecret> QueryWithRetry(Client& client, size_t i0,
                                                    Prng& rng) {
  for (;;) {
    auto q = client.Query(i0, rng);
    if (q.ok()) return *std::move(q);
    EXPECT_TRUE(IsInvalidCiphertext(q.status())) << q.status();
  }
}

TEST(ProtocolParamsTest, DeskDefaults) {
  auto params = ProtocolParams::Create(ProtocolConfig{});
  ASSERT_TRUE(params.ok()) << params.status();
  // (q + n q)^72 < 2^3071 <= (q + n q)^73.
  EXPECT_EQ(params->batch_capacity(), 72u);
  EXPECT_EQ(params->formula_batch_capacity(), 96u);
  EXPECT_EQ(params->hint_entries(), 4u);
  EXPECT_EQ(params->HintRequestBits(), 6272u);
  EXPECT_EQ(params->HintRequestBits() / 8, 784u);
  EXPECT_EQ(params->QueryBits(), 1400u * 3072 + 256 * 32);
  EXPECT_EQ(params->n() * 3072 / 8, 537600u);
  EXPECT_EQ(params->SeparateResponseBits(), 3u * 4 * 3072);
  EXPECT_EQ(params->CombinedResponseBits(), 2u * 4 * 3072);
}

TEST(ProtocolParamsTest, Validation) {
  ProtocolConfig c;
  c.log2_q = 16;
  EXPECT_EQ(KindOf(ProtocolParams::Create(c).status()), ErrorKind::kInput);
  c = ProtocolConfig{};
  c.paillier_bits = 32;
  EXPECT_TRUE(IsModulusTooSmall(ProtocolParams::Create(c).status()));
  c = ProtocolConfig{};
  c.p = 512;
  EXPECT_FALSE(ProtocolParams::Create(c).ok());
  c = ProtocolConfig{};
  ProtocolConfig other = c;
  other.matrix_seed[0] = 1;
  EXPECT_NE(ProtocolParams::Create(c)->hash(),
            ProtocolParams::Create(other)->hash());
}

TEST(ProtocolTest, ToyEndToEndAllRowsAllModes) {
  auto params = *ProtocolParams::Create(ToyConfig());
  Prng rng = TestPrng(1);
  for (int round = 0; round < 4; ++round) {
    auto db = std::make_shared<const Database>(Database::Random(4, 4, 4, rng));
    auto state = *ServerState::Create(params, db, 1);
    Client client = ClientWithKey(params, Key2491(), 100 + round);
    ClientRegistration reg = RegisterClient(client.hint_request());
    for (size_t i0 = 0; i0 < 4; ++i0) {
      for (ResponseMode mode :
           {ResponseMode::kSeparate, ResponseMode::kCombined,
            ResponseMode::kClientStorage}) {
        auto [query, secret] = QueryWithRetry(client, i0, rng);
        auto hint = *state->GenerateHint(reg, query.query_index);
        if (mode == ResponseMode::kClientStorage) {
          ASSERT_TRUE(client.StoreHint(hint).ok());
        }
        auto response = state->Respond(reg, query, mode, &hint);
        ASSERT_TRUE(response.ok()) << response.status();
        auto row = client.Extract(secret, *response);
        ASSERT_TRUE(row.ok()) << row.status();
        ASSERT_EQ(*row, db->Row(i0));
      }
    }
  }
}

TEST(ProtocolTest, ZeroDatabaseGivesZeroRow) {
  auto params = *ProtocolParams::Create(SmallConfig());
  auto db = std::make_shared<const Database>(
      *Database::Create(64, 48, 256, std::vector<uint8_t>(64 * 48, 0)));
  auto state = *ServerState::Create(params, db, 1);
  Client client = ClientWithKey(params, CachedKey(1024).sk, 2);
  ClientRegistration reg = RegisterClient(client.hint_request());
  Prng rng = TestPrng(2);
  auto [query, secret] = *client.Query(5, rng);
  auto hint = *state->GenerateHint(reg, query.query_index);
  auto response = *state->Respond(reg, query, ResponseMode::kSeparate, &hint);
  EXPECT_EQ(*client.Extract(secret, response), std::vector<uint64_t>(48, 0));
}

TEST(ProtocolTest, SmallParametersAndDatabaseUpdate) {
  auto params = *ProtocolParams::Create(SmallConfig());
  Prng rng = TestPrng(3);
  auto db =
      std::make_shared<const Database>(Database::Random(64, 48, 256, rng));
  auto state = *ServerState::Create(params, db, 1);
  Client client = ClientWithKey(params, CachedKey(1024).sk, 3);
  ClientRegistration reg = RegisterClient(client.hint_request());
  for (size_t i0 : {0, 17, 63}) {
    auto [query, secret] = *client.Query(i0, rng);
    auto hint = *state->GenerateHint(reg, query.query_index);
    auto response = *state->Respond(reg, query, ResponseMode::kCombined, &hint);
    ASSERT_EQ(*client.Extract(secret, response), db->Row(i0));
  }
  // Replace the database and refresh the hint without client involvement.
  auto db2 =
      std::make_shared<const Database>(Database::Random(64, 48, 256, rng));
  auto state2 = *ServerState::Create(params, db2, 2);
  auto [query, secret] = *client.Query(9, rng);
  auto stale = *state->GenerateHint(reg, query.query_index);
  EXPECT_EQ(KindOf(state2->Respond(reg, query, ResponseMode::kSeparate, &stale)
                       .status()),
            ErrorKind::kState);
  auto fresh = *state2->GenerateHint(reg, query.query_index);
  auto response = *state2->Respond(reg, query, ResponseMode::kSeparate, &fresh);
  EXPECT_EQ(*client.Extract(secret, response), db2->Row(9));
}

TEST(ProtocolTest, HintIsDeterministicAndHasBatchedLength) {
  auto params = *ProtocolParams::Create(SmallConfig());
  Prng rng = TestPrng(4);
  auto db =
      std::make_shared<const Database>(Database::Random(64, 48, 256, rng));
  auto state = *ServerState::Create(params, db, 1);
  Client client = ClientWithKey(params, CachedKey(1024).sk, 4);
  ClientRegistration reg = RegisterClient(client.hint_request());
  auto h1 = *state->GenerateHint(reg, 7);
  auto h2 = *state->GenerateHint(reg, 7);
  EXPECT_EQ(h1.k, h2.k);
  EXPECT_EQ(h1.k.size(), params.hint_entries());
  EXPECT_NE(state->GenerateHint(reg, 8)->k, h1.k);
}

TEST(ProtocolTest, BlindingIdentity) {
  auto params = *ProtocolParams::Create(SmallConfig());
  const PaillierSecretKey& sk = CachedKey(1024).sk;
  Client client = ClientWithKey(params, sk, 5);
  Prng rng = TestPrng(5);
  auto [query, secret] = *client.Query(0, rng);
  auto samples =
      *DecryptHintSamples(params, sk, client.state().seed, query.query_index);
  for (size_t i = 0; i < params.n(); ++i) {
    mpz_class sum = (query.ck_offset[i] + samples[i]) % sk.public_key().m();
    ASSERT_EQ(sum, secret.lwe_sk.s[i]);
  }
}

TEST(ProtocolTest, OffsetsLookUniform) {
  ProtocolConfig c = SmallConfig();
  c.n = 1600;
  auto params = *ProtocolParams::Create(c);
  Client client = ClientWithKey(params, CachedKey(1024).sk, 6);
  Prng rng = TestPrng(6);
  auto [query, secret] = *client.Query(0, rng);
  const mpz_class& m = client.pk().m();
  std::vector<double> counts(16, 0);
  for (const auto& v : query.ck_offset) {
    mpz_class bucket = v * 16 / m;
    counts[bucket.get_ui()] += 1;
  }
  const double expected = 1600.0 / 16;
  double chi2 = 0;
  for (double k : counts) chi2 += (k - expected) * (k - expected) / expected;
  // 0.999 quantile of chi-square with 15 degrees of freedom.
  EXPECT_LT(chi2, 37.70);
}

TEST(ProtocolTest, FreshLweKeyPerQuery) {
  auto params = *ProtocolParams::Create(SmallConfig());
  Client client = ClientWithKey(params, CachedKey(1024).sk, 7);
  Prng rng = TestPrng(7);
  auto [q1, s1] = *client.Query(0, rng);
  auto [q2, s2] = *client.Query(0, rng);
  EXPECT_NE(s1.lwe_sk.s, s2.lwe_sk.s);
  EXPECT_NE(q1.query_index, q2.query_index);
}

TEST(ProtocolTest, ReplayAndRangeGuards) {
  auto params = *ProtocolParams::Create(SmallConfig());
  Client client = ClientWithKey(params, CachedKey(1024).sk, 8);
  Prng rng = TestPrng(8);
  EXPECT_EQ(KindOf(client.Query(64, rng).status()), ErrorKind::kInput);
  ASSERT_TRUE(client.QueryAt(3, 0, rng).ok());
  EXPECT_EQ(KindOf(client.QueryAt(3, 0, rng).status()), ErrorKind::kState);
  EXPECT_EQ(KindOf(client.QueryAt(1, 0, rng).status()), ErrorKind::kState);
  EXPECT_EQ(client.state().next_query_index, 4u);
}

TEST(ProtocolTest, RespondIsExponentiationFree) {
  auto params = *ProtocolParams::Create(SmallConfig());
  Prng rng = TestPrng(9);
  auto db =
      std::make_shared<const Database>(Database::Random(64, 48, 256, rng));
  auto state = *ServerState::Create(params, db, 1);
  Client client = ClientWithKey(params, CachedKey(1024).sk, 9);
  ClientRegistration reg = RegisterClient(client.hint_request());
  auto [query, secret] = *client.Query(1, rng);
  auto hint = *state->GenerateHint(reg, query.query_index);
  for (ResponseMode mode : {ResponseMode::kSeparate, ResponseMode::kCombined,
                            ResponseMode::kClientStorage}) {
    OpCounters::Global().Reset();
    RespondTimings timings;
    ASSERT_TRUE(state->Respond(reg, query, mode, &hint, &timings).ok());
    OpCounts ops = OpCounters::Global().Snapshot();
    EXPECT_EQ(ops.exponentiations, 0u);
    EXPECT_EQ(ops.scalar_muls, 0u);
    EXPECT_EQ(ops.additions,
              mode == ResponseMode::kCombined ? params.hint_entries() : 0u);
    EXPECT_GT(timings.total_ns(), 0u);
  }
}

TEST(ProtocolTest, ClientStorageHintIsSingleUse) {
  auto params = *ProtocolParams::Create(SmallConfig());
  Prng rng = TestPrng(10);
  auto db =
      std::make_shared<const Database>(Database::Random(64, 48, 256, rng));
  auto state = *ServerState::Create(params, db, 1);
  Client client = ClientWithKey(params, CachedKey(1024).sk, 10);
  ClientRegistration reg = RegisterClient(client.hint_request());
  auto [query, secret] = *client.Query(2, rng);
  auto hint = *state->GenerateHint(reg, query.query_index);
  auto transfer = EncodeHintTransfer(params, client.pk(), hint);
  EXPECT_EQ(transfer.payload_bytes * 8, params.HintBits());
  ASSERT_TRUE(
      client.StoreHint(*DecodeHintTransfer(params, client.pk(), transfer.bytes))
          .ok());
  auto response =
      *state->Respond(reg, query, ResponseMode::kClientStorage, nullptr);
  auto stored = *client.Extract(secret, response);
  EXPECT_EQ(stored, db->Row(2));
  EXPECT_EQ(KindOf(client.Extract(secret, response).status()),
            ErrorKind::kState);
  auto separate = *state->Respond(reg, query, ResponseMode::kSeparate, &hint);
  EXPECT_EQ(*client.Extract(secret, separate), stored);
}

TEST(ProtocolTest, RnsHintMatchesBigIntegerProduct) {
  auto params = *ProtocolParams::Create(SmallConfig());
  Prng rng = TestPrng(11);
  auto db =
      std::make_shared<const Database>(Database::Random(64, 48, 256, rng));
  auto state = *ServerState::Create(params, db, 1);
  auto scaled = ScaledHintMatrix(params, state->hint_matrix());
  const mpz_class& m = CachedKey(1024).pk.m();
  std::vector<mpz_class> v(params.n());
  for (auto& x : v) x = rng.UniformBelow(m);
  auto got = *state->rns_hint().Multiply(v, m);
  for (size_t c = 0; c < params.hint_entries(); ++c) {
    mpz_class want = 0;
    for (size_t i = 0; i < params.n(); ++i) want += scaled[c][i] * v[i];
    ASSERT_EQ(got[c], want % m);
  }
}

TEST(MessagesTest, RoundTripsAndFormulaSizes) {
  auto params = *ProtocolParams::Create(SmallConfig());
  Prng rng = TestPrng(12);
  auto db =
      std::make_shared<const Database>(Database::Random(64, 48, 256, rng));
  auto state = *ServerState::Create(params, db, 1);
  Client client = ClientWithKey(params, CachedKey(1024).sk, 12);
  const PaillierPublicKey& pk = client.pk();

  auto hr = EncodeHintRequest(params, client.hint_request());
  EXPECT_EQ(hr.payload_bytes * 8, params.HintRequestBits());
  EXPECT_EQ(hr.payload_bytes + hr.overhead_bytes, hr.bytes.size());
  auto hr_back = *DecodeHintRequest(params, hr.bytes);
  EXPECT_EQ(hr_back.pk.m(), pk.m());
  EXPECT_EQ(hr_back.seed, client.state().seed);
  ClientRegistration reg = RegisterClient(hr_back);
  EXPECT_EQ(reg.id, client.id());

  auto [query, secret] = *client.Query(3, rng);
  auto qe = EncodeQuery(params, pk, query);
  EXPECT_EQ(qe.payload_bytes * 8, params.QueryBits());
  auto q_back = *DecodeQuery(params, qe.bytes);
  EXPECT_EQ(q_back.ck_offset, query.ck_offset);
  EXPECT_EQ(q_back.qu, query.qu);
  EXPECT_EQ(q_back.client_id, query.client_id);
  EXPECT_EQ(q_back.query_index, query.query_index);

  auto hint = *state->GenerateHint(reg, query.query_index);
  for (ResponseMode mode : {ResponseMode::kSeparate, ResponseMode::kCombined,
                            ResponseMode::kClientStorage}) {
    auto r = *state->Respond(reg, q_back, mode, &hint);
    auto re = EncodeResponse(params, pk, r);
    size_t want =
        mode == ResponseMode::kSeparate   ? params.SeparateResponseBits()
        : mode == ResponseMode::kCombined ? params.CombinedResponseBits()
                                          : params.ClientStorageResponseBits();
    EXPECT_EQ(re.payload_bytes * 8, want);
    auto r_back = *DecodeResponse(params, pk, re.bytes);
    EXPECT_EQ(r_back.t, r.t);
    EXPECT_EQ(r_back.ciphertexts, r.ciphertexts);
    EXPECT_EQ(r_back.mode, mode);
  }
}

TEST(MessagesTest, RejectsMalformedFrames) {
  auto params = *ProtocolParams::Create(SmallConfig());
  ProtocolConfig other_config = SmallConfig();
  other_config.d1 = 47;
  auto other = *ProtocolParams::Create(other_config);
  Client client = ClientWithKey(params, CachedKey(1024).sk, 13);
  auto hr = EncodeHintRequest(params, client.hint_request());
  EXPECT_EQ(KindOf(DecodeHintRequest(other, hr.bytes).status()),
            ErrorKind::kProtocol);
  std::vector<uint8_t> truncated(hr.bytes.begin(), hr.bytes.end() - 1);
  EXPECT_EQ(KindOf(DecodeHintRequest(params, truncated).status()),
            ErrorKind::kProtocol);
  EXPECT_EQ(KindOf(DecodeQuery(params, hr.bytes).status()),
            ErrorKind::kProtocol);
  EXPECT_EQ(KindOf(PeekMessageType(std::vector<uint8_t>{1, 9}).status()),
            ErrorKind::kProtocol);
}

TEST(ClientStateTest, PersistsKeySeedAndCounter) {
  auto params = *ProtocolParams::Create(SmallConfig());
  Client client = ClientWithKey(params, CachedKey(1024).sk, 14);
  Prng rng = TestPrng(14);
  ASSERT_TRUE(client.Query(0, rng).ok());
  auto bytes = SerializeClientState(client.state());
  // 4 magic + 2 * (4 + 64) key halves + 16 seed + 8 counter.
  EXPECT_EQ(bytes.size(), 4u + 2 * (4 + 64) + 16 + 8);
  auto back = *DeserializeClientState(bytes);
  EXPECT_EQ(back.sk.public_key().m(), client.pk().m());
  EXPECT_EQ(back.seed, client.state().seed);
  EXPECT_EQ(back.next_query_index, 1u);
}

}  // namespace
}  // namespace zippir
