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

#include <map>
#include <memory>
#include <vector>

#include "benchmark/benchmark.h"
#include "zippir/additive_he/paillier.h"
#include "zippir/common/prng.h"
#include "zippir/compressor/compressor.h"
#include "zippir/lwe/lwe.h"
#include "zippir/lwe/modulus.h"
#include "zippir/protocol/messages.h"
#include "zippir/protocol/params.h"
#include "zippir/protocol/server.h"
#include "zippir/rns/rns.h"

namespace zippir {
namespace {

Prng BenchPrng(uint64_t seed) {
  return Prng(Prng::SeedFromInt(seed), PrgDomain::kGeneric);
}

const PaillierKeyPair& Key(size_t bits) {
  static auto* keys = new std::map<size_t, PaillierKeyPair>();
  auto it = keys->find(bits);
  if (it == keys->end()) {
    Prng rng = BenchPrng(bits);
    it = keys->emplace(bits, *PaillierKeygen(bits, rng)).first;
  }
  return it->second;
}

void BM_PaillierEncrypt(benchmark::State& state) {
  const auto& kp = Key(state.range(0));
  Prng rng = BenchPrng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kp.pk.Encrypt(mpz_class(12345), rng));
  }
}
BENCHMARK(BM_PaillierEncrypt)
    ->Arg(1024)
    ->Arg(3072)
    ->Unit(benchmark::kMillisecond);

void BM_PaillierDecrypt(benchmark::State& state) {
  const auto& kp = Key(state.range(0));
  Prng rng = BenchPrng(2);
  const PaillierCiphertext ct = *kp.pk.Encrypt(mpz_class(12345), rng);
  for (auto _ : state) benchmark::DoNotOptimize(kp.sk.Decrypt(ct));
}
BENCHMARK(BM_PaillierDecrypt)
    ->Arg(1024)
    ->Arg(3072)
    ->Unit(benchmark::kMillisecond);

void BM_PaillierAdd(benchmark::State& state) {
  const auto& kp = Key(3072);
  Prng rng = BenchPrng(3);
  PaillierCiphertext acc = *kp.pk.Encrypt(mpz_class(1), rng);
  const PaillierCiphertext ct = *kp.pk.Encrypt(mpz_class(2), rng);
  for (auto _ : state) kp.pk.AddInPlace(acc, ct);
}
BENCHMARK(BM_PaillierAdd);

struct CompressionFixture {
  CompressionKey key;
  ExpandedCompressionKey eck;
  LweCiphertext ct;
};

const CompressionFixture& Compression() {
  static const CompressionFixture* fixture = [] {
    Prng rng = BenchPrng(4);
    auto params = *LweParams::Create(630, Modulus::PowerOfTwo(64), 256, 6.4,
                                     KeyDistribution::kBinary);
    LweSecretKey sk = LweKeygen(params, rng);
    CompressionKey key = *MakeCompressionKey(Key(3072).sk, params, sk, rng);
    ExpandedCompressionKey eck =
        ExpandedCompressionKey::ExpandForThroughput(key);
    LweCiphertext ct = *LweEncrypt(params, sk, 42, rng);
    return new CompressionFixture{std::move(key), std::move(eck),
                                  std::move(ct)};
  }();
  return *fixture;
}

void BM_LweCompress(benchmark::State& state) {
  const auto& f = Compression();
  for (auto _ : state) benchmark::DoNotOptimize(LweCompress(f.key, f.ct));
}
BENCHMARK(BM_LweCompress)->Unit(benchmark::kMillisecond);

void BM_FastLweCompress(benchmark::State& state) {
  const auto& f = Compression();
  for (auto _ : state) benchmark::DoNotOptimize(FastLweCompress(f.eck, f.ct));
}
BENCHMARK(BM_FastLweCompress)->Unit(benchmark::kMillisecond);

void BM_RnsMatMul(benchmark::State& state) {
  const size_t rows = state.range(0);
  const size_t cols = 1400;
  Prng rng = BenchPrng(5);
  std::vector<std::vector<uint64_t>> h(rows, std::vector<uint64_t>(cols));
  for (auto& row : h) {
    for (auto& x : row) x = rng.UniformBelow(uint64_t{1} << 32);
  }
  const RnsBasis& basis = RnsBasis::Default();
  const mpz_class& m = Key(3072).pk.m();
  RnsMatMul mul =
      *RnsMatMul::Create(basis, *RnsMatrix::FromU64(basis, h), m * m);
  std::vector<mpz_class> v(cols);
  for (auto& x : v) x = rng.UniformBelow(mpz_class(m * m));
  for (auto _ : state) benchmark::DoNotOptimize(mul.Multiply(v, m * m));
}
BENCHMARK(BM_RnsMatMul)->Arg(4)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Respond(benchmark::State& state) {
  ProtocolConfig config;
  config.d0 = state.range(0);
  config.d1 = state.range(0);
  auto params = *ProtocolParams::Create(config);
  Prng rng = BenchPrng(6);
  auto db = std::make_shared<const Database>(
      Database::Random(params.d0(), params.d1(), params.p(), rng));
  auto server = *ServerState::Create(params, db, 1);
  const auto& kp = Key(params.paillier_bits());
  ClientRegistration client{ClientIdFor(kp.pk), kp.pk, rng.NextSeed()};
  QueryMessage query;
  query.client_id = client.id;
  query.ck_offset.resize(params.n());
  for (auto& x : query.ck_offset) x = rng.UniformBelow(kp.pk.m());
  query.qu.resize(params.d0());
  for (auto& x : query.qu) {
    x = rng.UniformBelow(params.lwe().q().sampling_bound());
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        server->Respond(client, query, ResponseMode::kClientStorage, nullptr));
  }
  state.SetBytesProcessed(state.iterations() * params.d0() * params.d1());
}
BENCHMARK(BM_Respond)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace zippir

BENCHMARK_MAIN();
