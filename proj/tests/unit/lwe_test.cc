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

#include "zippir/lwe/lwe.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "gtest/gtest.h"
#include "test_keys.h"
#include "zippir/common/wire.h"
#include "zippir/lwe/gaussian.h"
#include "zippir/lwe/modulus.h"

namespace zippir {
namespace {

using ::zippir::testing::TestPrng;

LweParams ToyParams() {
  return *LweParams::Create(2, Modulus::PowerOfTwo(4), 4, 0,
                            KeyDistribution::kBinary);
}

TEST(ModulusTest, PowerOfTwoAndGenericReduction) {
  Modulus q64 = Modulus::PowerOfTwo(64);
  EXPECT_TRUE(q64.is_power_of_two());
  EXPECT_EQ(q64.bits(), 64u);
  EXPECT_EQ(q64.sampling_bound(), 0u);
  EXPECT_EQ(q64.Sub(0, 1), ~uint64_t{0});
  EXPECT_EQ(q64.Mul(uint64_t{1} << 63, 2), 0u);

  Modulus q17 = *Modulus::Create(17);
  EXPECT_FALSE(q17.is_power_of_two());
  EXPECT_EQ(q17.bits(), 5u);
  EXPECT_EQ(q17.Add(16, 5), 4u);
  EXPECT_EQ(q17.Sub(3, 5), 15u);
  EXPECT_EQ(q17.Mul(16, 16), 1u);
  EXPECT_EQ(q17.ReduceSigned(-1), 16u);

  EXPECT_FALSE(Modulus::Create(1).ok());
  EXPECT_FALSE(Modulus::Create((static_cast<uint128>(1) << 64) + 1).ok());
}

TEST(ModulusTest, RoundDivTiesAwayFromZero) {
  EXPECT_EQ(RoundDiv(9, 4), 2u);
  EXPECT_EQ(RoundDiv(2, 4), 1u);
  EXPECT_EQ(RoundDiv(6, 4), 2u);
  EXPECT_EQ(RoundDiv(5, 4), 1u);
  EXPECT_EQ(RoundDiv(7, 2), 4u);
}

TEST(LweParamsTest, DeltaAndValidation) {
  LweParams toy = ToyParams();
  EXPECT_EQ(toy.delta(), 4u);
  auto desk = *LweParams::Create(1400, Modulus::PowerOfTwo(32), 256, 6.4,
                                 KeyDistribution::kBinary);
  EXPECT_EQ(desk.delta(), uint64_t{1} << 24);
  // round(17 / 4) = 4.
  EXPECT_EQ(LweParams::Create(2, *Modulus::Create(17), 4, 0,
                              KeyDistribution::kUniform)
                ->delta(),
            4u);
  EXPECT_FALSE(LweParams::Create(0, Modulus::PowerOfTwo(4), 4, 0,
                                 KeyDistribution::kBinary)
                   .ok());
  EXPECT_FALSE(LweParams::Create(2, Modulus::PowerOfTwo(4), 16, 0,
                                 KeyDistribution::kBinary)
                   .ok());
}

TEST(LweKeygenTest, DistributionsAndDeterminism) {
  Prng rng = TestPrng(1);
  auto binary = *LweParams::Create(500, Modulus::PowerOfTwo(4), 4, 0,
                                   KeyDistribution::kBinary);
  auto uniform = *LweParams::Create(500, Modulus::PowerOfTwo(4), 4, 0,
                                    KeyDistribution::kUniform);
  for (uint64_t s : LweKeygen(binary, rng).s) EXPECT_LE(s, 1u);
  for (uint64_t s : LweKeygen(uniform, rng).s) EXPECT_LT(s, 16u);
  Prng a = TestPrng(2), b = TestPrng(2);
  EXPECT_EQ(LweKeygen(uniform, a).s, LweKeygen(uniform, b).s);
}

TEST(LweTest, HandExample) {
  LweParams params = ToyParams();
  LweSecretKey sk{{1, 0}};
  auto ct = LweEncryptWith(params, sk, {3, 5}, 2, 1);
  ASSERT_TRUE(ct.ok());
  EXPECT_EQ(ct->b, 12u);
  EXPECT_EQ(LwePhase(params, sk, *ct), 9u);
  EXPECT_EQ(LweDecrypt(params, sk, *ct), 2u);
}

TEST(LweTest, ZeroMessageAndZeroCiphertext) {
  LweParams params = ToyParams();
  LweSecretKey sk{{1, 1}};
  auto ct = LweEncryptWith(params, sk, {3, 5}, 0, 0);
  EXPECT_EQ(ct->b, 8u);
  LweCiphertext zero{{0, 0}, 0};
  EXPECT_EQ(LwePhase(params, sk, zero), 0u);
  EXPECT_EQ(LweDecrypt(params, sk, zero), 0u);
}

TEST(LweTest, RoundingBoundary) {
  LweParams params = ToyParams();
  // Phase = delta / 2 rounds up; phase 14 = 3.5 delta wraps to 0.
  EXPECT_EQ(DecodePhase(params, 2), 1u);
  EXPECT_EQ(DecodePhase(params, 1), 0u);
  EXPECT_EQ(DecodePhase(params, 6), 2u);
  EXPECT_EQ(DecodePhase(params, 14), 0u);
  EXPECT_EQ(DecodePhase(params, 15), 0u);
}

TEST(LweTest, RejectsOutOfRangeMessage) {
  LweParams params = ToyParams();
  Prng rng = TestPrng(3);
  EXPECT_FALSE(LweEncrypt(params, LweSecretKey{{1, 0}}, 4, rng).ok());
}

TEST(LweTest, ExhaustiveToyRoundTripWithinNoiseBound) {
  LweParams params = ToyParams();
  for (uint64_t s0 = 0; s0 < 2; ++s0) {
    for (uint64_t s1 = 0; s1 < 2; ++s1) {
      LweSecretKey sk{{s0, s1}};
      for (uint64_t a0 = 0; a0 < 16; ++a0) {
        for (uint64_t a1 = 0; a1 < 16; ++a1) {
          for (uint64_t mu = 0; mu < 4; ++mu) {
            for (int64_t e = -1; e <= 1; ++e) {
              auto ct = LweEncryptWith(params, sk, {a0, a1}, mu, e);
              ASSERT_EQ(LweDecrypt(params, sk, *ct), mu);
            }
          }
        }
      }
    }
  }
}

TEST(LweTest, DeskParameterRoundTrips) {
  auto params = *LweParams::Create(1400, Modulus::PowerOfTwo(32), 256, 6.4,
                                   KeyDistribution::kBinary);
  Prng rng = TestPrng(4);
  LweSecretKey sk = LweKeygen(params, rng);
  for (int i = 0; i < 1000; ++i) {
    uint64_t mu = rng.UniformBelow(uint64_t{256});
    auto ct = LweEncryptInstrumented(params, sk, mu, rng);
    ASSERT_TRUE(ct.ok());
    ASSERT_LT(std::abs(ct->noise), static_cast<int64_t>(params.delta() / 2));
    ASSERT_EQ(LweDecrypt(params, sk, ct->ct), mu);
  }
}

TEST(LweTest, PhaseIsLinear) {
  auto params = *LweParams::Create(64, Modulus::PowerOfTwo(32), 256, 6.4,
                                   KeyDistribution::kUniform);
  Prng rng = TestPrng(5);
  LweSecretKey sk = LweKeygen(params, rng);
  const Modulus& q = params.q();
  for (int i = 0; i < 100; ++i) {
    auto c1 = *LweEncrypt(params, sk, rng.UniformBelow(uint64_t{256}), rng);
    auto c2 = *LweEncrypt(params, sk, rng.UniformBelow(uint64_t{256}), rng);
    LweCiphertext sum{std::vector<uint64_t>(64), q.Add(c1.b, c2.b)};
    for (int j = 0; j < 64; ++j) sum.a[j] = q.Add(c1.a[j], c2.a[j]);
    EXPECT_EQ(LwePhase(params, sk, sum),
              q.Add(LwePhase(params, sk, c1), LwePhase(params, sk, c2)));
  }
}

TEST(LweTest, SeededCiphertexts) {
  auto params = *LweParams::Create(630, Modulus::PowerOfTwo(64), 256, 6.4,
                                   KeyDistribution::kBinary);
  Prng rng = TestPrng(6);
  LweSecretKey sk = LweKeygen(params, rng);
  auto sct = *LweEncryptSeeded(params, sk, 77, rng);
  LweCiphertext a = ExpandSeeded(params, sct);
  LweCiphertext b = ExpandSeeded(params, sct);
  EXPECT_EQ(a, b);
  EXPECT_EQ(LweDecrypt(params, sk, a), 77u);
  EXPECT_EQ(SeededLweCiphertextBytes(params), 16u + 8u);
  EXPECT_EQ(LweCiphertextBytes(params), 631u * 8u);
}

TEST(RescaleTest, HandExampleAndIdentity) {
  LweParams from = ToyParams();
  auto to = *LweParams::Create(2, Modulus::PowerOfTwo(3), 4, 0,
                               KeyDistribution::kBinary);
  LweCiphertext ct{{3, 5}, 12};
  auto r = Rescale(from, to, ct);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->a, (std::vector<uint64_t>{2, 3}));
  EXPECT_EQ(r->b, 6u);
  EXPECT_EQ(*Rescale(from, from, ct), ct);
  EXPECT_FALSE(Rescale(to, from, ct).ok());
}

TEST(RescaleTest, SixtyFourToTwentyBitsPreservesPlaintext) {
  auto from = *LweParams::Create(630, Modulus::PowerOfTwo(64), 256, 6.4,
                                 KeyDistribution::kBinary);
  auto to = *LweParams::Create(630, Modulus::PowerOfTwo(20), 256, 6.4,
                               KeyDistribution::kBinary);
  Prng rng = TestPrng(7);
  LweSecretKey sk = LweKeygen(from, rng);
  for (int i = 0; i < 1000; ++i) {
    uint64_t mu = rng.UniformBelow(uint64_t{256});
    auto ct = *LweEncrypt(from, sk, mu, rng);
    auto small = *Rescale(from, to, ct);
    ASSERT_EQ(LweDecrypt(to, sk, small), mu);
  }
}

TEST(GaussianTest, MomentsAndSupport) {
  DiscreteGaussian chi(6.4);
  EXPECT_EQ(chi.tail_bound(), 39);
  Prng rng = TestPrng(8);
  constexpr int kSamples = 200000;
  double sum = 0, sum_sq = 0;
  for (int i = 0; i < kSamples; ++i) {
    int64_t x = chi.Sample(rng);
    ASSERT_LE(std::abs(x), 39);
    sum += x;
    sum_sq += static_cast<double>(x) * x;
  }
  double mean = sum / kSamples;
  double sd = std::sqrt(sum_sq / kSamples - mean * mean);
  EXPECT_NEAR(mean, 0.0, 0.1);
  EXPECT_NEAR(sd, 6.4, 0.1);
  EXPECT_EQ(DiscreteGaussian(0).Sample(rng), 0);
}

TEST(LweSerializationTest, RoundTripAndTwoToTheSixtyFour) {
  auto params = *LweParams::Create(4, Modulus::PowerOfTwo(64), 256, 6.4,
                                   KeyDistribution::kBinary);
  Prng rng = TestPrng(9);
  LweSecretKey sk = LweKeygen(params, rng);
  auto ct = *LweEncrypt(params, sk, 3, rng);
  WireWriter w;
  SerializeLweCiphertext(params, ct, w);
  EXPECT_EQ(w.size(), 8u * (2 + 4 + 1));
  // q = 2^64 is written as 0.
  for (int i = 8; i < 16; ++i) EXPECT_EQ(w.bytes()[i], 0);
  WireReader r(w.bytes());
  EXPECT_EQ(*DeserializeLweCiphertext(params, r), ct);
}

}  // namespace
}  // namespace zippir
