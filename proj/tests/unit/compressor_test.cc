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

#include "zippir/compressor/compressor.h"

#include <gmpxx.h>

#include <cstdint>
#include <cstdlib>
#include <vector>

#include "gtest/gtest.h"
#include "test_keys.h"
#include "zippir/additive_he/op_counters.h"
#include "zippir/common/errors.h"
#include "zippir/common/wire.h"
#include "zippir/compressor/sizes.h"
#include "zippir/lwe/lwe.h"

namespace zippir {
namespace {

using ::zippir::testing::CachedKey;
using ::zippir::testing::Key2491;
using ::zippir::testing::Key77;
using ::zippir::testing::TestPrng;

LweParams Toy(KeyDistribution dist = KeyDistribution::kBinary) {
  return *LweParams::Create(2, Modulus::PowerOfTwo(4), 4, 0, dist);
}

mpz_class DecryptRaw(const PaillierSecretKey& sk,
                     const CompressedCiphertext& cc) {
  return *sk.Decrypt(cc.x);
}

TEST(CompressionBoundTest, ModulusInequality) {
  EXPECT_EQ(CompressionBound(Toy()), 48);
  EXPECT_EQ(CompressionBound(Toy(KeyDistribution::kUniform)), 528);
  const PaillierSecretKey sk77 = Key77();
  const PaillierPublicKey& pk77 = sk77.public_key();
  EXPECT_TRUE(CheckCompressionModulus(pk77, Toy()).ok());
  absl::Status st =
      CheckCompressionModulus(pk77, Toy(KeyDistribution::kUniform));
  EXPECT_TRUE(IsModulusTooSmall(st));
  Prng rng = TestPrng(1);
  EXPECT_TRUE(IsModulusTooSmall(
      MakeCompressionKey(Key77(), Toy(KeyDistribution::kUniform),
                         LweSecretKey{{3, 7}}, rng)
          .status()));
}

TEST(SelectScaleTest, AllFourCombinations) {
  EXPECT_EQ(SelectScale(Toy(), NoiseRegime::kStandard), 48);
  EXPECT_EQ(SelectScale(Toy(), NoiseRegime::kQuarterDelta), 16);
  EXPECT_EQ(SelectScale(Toy(KeyDistribution::kUniform), NoiseRegime::kStandard),
            528);
  EXPECT_EQ(
      SelectScale(Toy(KeyDistribution::kUniform), NoiseRegime::kQuarterDelta),
      256);
}

TEST(LweCompressTest, HandExample) {
  PaillierSecretKey sk = Key77();
  Prng rng = TestPrng(2);
  LweSecretKey lwe_sk{{1, 0}};
  auto key = MakeCompressionKey(sk, Toy(), lwe_sk, rng);
  ASSERT_TRUE(key.ok());
  LweCiphertext ct{{3, 5}, 12};
  auto cc = LweCompress(*key, ct);
  ASSERT_TRUE(cc.ok());
  EXPECT_EQ(DecryptRaw(sk, *cc), 25);
  EXPECT_EQ(*CompressedPhase(sk, Toy(), *cc), 9u);
  EXPECT_EQ(*ModifiedLweDecrypt(sk, Toy(), *cc), 2u);
}

TEST(LweCompressTest, ZeroMaskYieldsB) {
  PaillierSecretKey sk = Key77();
  Prng rng = TestPrng(3);
  auto key = *MakeCompressionKey(sk, Toy(), LweSecretKey{{1, 1}}, rng);
  auto cc = *LweCompress(key, LweCiphertext{{0, 0}, 7});
  EXPECT_EQ(DecryptRaw(sk, cc), 7);
}

TEST(LweCompressTest, PublicKeyOverloadMatchesSecretKeyOverload) {
  PaillierSecretKey sk = Key2491();
  Prng rng = TestPrng(4);
  LweSecretKey lwe_sk{{1, 1}};
  auto from_pk = *MakeCompressionKey(sk.public_key(), Toy(), lwe_sk, rng);
  auto from_sk = *MakeCompressionKey(sk, Toy(), lwe_sk, rng);
  LweCiphertext ct{{9, 2}, 5};
  EXPECT_EQ(DecryptRaw(sk, *LweCompress(from_pk, ct)),
            DecryptRaw(sk, *LweCompress(from_sk, ct)));
}

TEST(LweCompressTest, RejectsMismatchedDimension) {
  PaillierSecretKey sk = Key77();
  Prng rng = TestPrng(5);
  auto key = *MakeCompressionKey(sk, Toy(), LweSecretKey{{1, 1}}, rng);
  EXPECT_EQ(KindOf(LweCompress(key, LweCiphertext{{1, 2, 3}, 0}).status()),
            ErrorKind::kInput);
}

// Every key, mask, message and in-bound noise at q = 16, n = 2, for both
// toy moduli; all four compression paths agree with plain decryption.
TEST(LweCompressTest, ExhaustiveToyOracleEquivalence) {
  LweParams params = Toy();
  for (const PaillierSecretKey& sk : {Key77(), Key2491()}) {
    for (uint64_t s0 = 0; s0 < 2; ++s0) {
      for (uint64_t s1 = 0; s1 < 2; ++s1) {
        LweSecretKey lwe_sk{{s0, s1}};
        Prng rng = TestPrng(6);
        auto key = *MakeCompressionKey(sk, params, lwe_sk, rng);
        auto eck = ExpandedCompressionKey::Expand(key);
        for (uint64_t a0 = 0; a0 < 16; ++a0) {
          for (uint64_t a1 = 0; a1 < 16; ++a1) {
            for (uint64_t mu = 0; mu < 4; ++mu) {
              for (int64_t e = -1; e <= 1; ++e) {
                auto ct = *LweEncryptWith(params, lwe_sk, {a0, a1}, mu, e);
                ASSERT_EQ(LweDecrypt(params, lwe_sk, ct), mu);
                auto plain = *LweCompress(key, ct);
                auto fast = *FastLweCompress(eck, ct);
                ASSERT_EQ(plain.x, fast.x);
                ASSERT_EQ(*ModifiedLweDecrypt(sk, params, plain), mu);
                mpz_class raw = DecryptRaw(sk, plain);
                ASSERT_EQ(raw,
                          ct.b + (16 - a0) % 16 * s0 + (16 - a1) % 16 * s1);
              }
            }
          }
        }
      }
    }
  }
}

TEST(ExpandedKeyTest, RowsAreDoublingsAndCostOnlyAdditions) {
  PaillierSecretKey sk = Key2491();
  LweParams params = Toy();
  Prng rng = TestPrng(7);
  LweSecretKey lwe_sk{{1, 1}};
  auto key = *MakeCompressionKey(sk, params, lwe_sk, rng);
  OpCounters::Global().Reset();
  auto eck = ExpandedCompressionKey::Expand(key);
  OpCounts cost = OpCounters::Global().Snapshot();
  ASSERT_EQ(eck.rows(), 4u);
  EXPECT_EQ(cost.additions, (eck.rows() - 1) * params.n());
  EXPECT_EQ(cost.scalar_muls, 0u);
  for (unsigned j = 0; j < eck.rows(); ++j) {
    for (size_t i = 0; i < 2; ++i) {
      EXPECT_EQ(*sk.Decrypt(eck.Entry(j, i)), (mpz_class(1) << j) % 2491);
    }
  }
  EXPECT_EQ(eck.Entry(0, 0), key.ck[0]);

  OpCounters::Global().Reset();
  auto cc = *FastLweCompress(eck, LweCiphertext{{5, 11}, 3});
  cost = OpCounters::Global().Snapshot();
  EXPECT_EQ(cost.scalar_muls, 0u);
  EXPECT_EQ(cost.exponentiations, 0u);
  EXPECT_EQ(*sk.Decrypt(cc.x), 3 + 11 + 5);
}

TEST(PackedKeyTest, TwoDigitsFitOneCiphertext) {
  const PaillierKeyPair& kp = CachedKey(64);
  LweParams params = Toy();
  mpz_class delta = DefaultPackingRadix(params);
  EXPECT_EQ(delta, 64);
  EXPECT_EQ(PackingDigits(kp.pk.m(), delta), 5u);
  Prng rng = TestPrng(8);
  LweSecretKey lwe_sk{{1, 1}};
  auto packed = GeneratePackedKey(kp.sk, params, lwe_sk, delta, rng);
  ASSERT_TRUE(packed.ok());
  EXPECT_EQ(packed->pck.size(), 1u);
  EXPECT_EQ(packed->t, 5u);
}

TEST(PackedKeyTest, RejectsBadRadix) {
  const PaillierKeyPair& kp = CachedKey(64);
  LweParams params = Toy();
  Prng rng = TestPrng(9);
  LweSecretKey lwe_sk{{1, 0}};
  // 48 is the bound itself; 72 is not a multiple of q.
  EXPECT_FALSE(GeneratePackedKey(kp.sk, params, lwe_sk, 48, rng).ok());
  EXPECT_FALSE(GeneratePackedKey(kp.sk, params, lwe_sk, 72, rng).ok());
}

TEST(PackedKeyTest, UnpackedPipelineMatchesPlainPipeline) {
  const PaillierKeyPair& kp = CachedKey(256);
  auto params = *LweParams::Create(24, Modulus::PowerOfTwo(16), 16, 1.0,
                                   KeyDistribution::kBinary);
  Prng rng = TestPrng(10);
  LweSecretKey lwe_sk = LweKeygen(params, rng);
  mpz_class delta = DefaultPackingRadix(params);
  auto packed = *GeneratePackedKey(kp.sk, params, lwe_sk, delta, rng);
  ASSERT_GT(packed.t, 1u);
  ASSERT_LT(packed.pck.size(), params.n());
  auto unpacked = UnpackCompressionKey(packed);
  ASSERT_EQ(unpacked.ck.size(), params.n());
  auto plain = *MakeCompressionKey(kp.sk, params, lwe_sk, rng);
  auto public_packed = *GeneratePackedKey(kp.pk, params, lwe_sk, delta, rng);
  auto public_unpacked = UnpackCompressionKey(public_packed);
  for (int trial = 0; trial < 50; ++trial) {
    uint64_t mu = rng.UniformBelow(uint64_t{16});
    auto ct = *LweEncrypt(params, lwe_sk, mu, rng);
    for (const CompressionKey* key : {&plain, &unpacked, &public_unpacked}) {
      auto cc = *LweCompress(*key, ct);
      ASSERT_EQ(*ModifiedLweDecrypt(kp.sk, params, cc), mu);
      ASSERT_EQ(*CompressedPhase(kp.sk, params, cc),
                LwePhase(params, lwe_sk, ct));
    }
  }
}

TEST(BatchedTest, ToyTwoSlots) {
  PaillierSecretKey sk = Key2491();
  LweParams params = Toy();
  EXPECT_EQ(
      BatchCapacity(sk.public_key().m(), 48, params, NoiseRegime::kStandard),
      2u);
  Prng rng = TestPrng(11);
  LweSecretKey lwe_sk{{1, 1}};
  auto key = *MakeCompressionKey(sk, params, lwe_sk, rng);
  auto eck = ExpandedCompressionKey::Expand(key);
  for (uint64_t m0 = 0; m0 < 4; ++m0) {
    for (uint64_t m1 = 0; m1 < 4; ++m1) {
      std::vector<LweCiphertext> cts = {
          *LweEncryptWith(
              params, lwe_sk,
              {rng.UniformBelow(uint64_t{16}), rng.UniformBelow(uint64_t{16})},
              m0, 1),
          *LweEncryptWith(
              params, lwe_sk,
              {rng.UniformBelow(uint64_t{16}), rng.UniformBelow(uint64_t{16})},
              m1, -1)};
      auto slow = *BatchedLweCompress(key, cts, 48);
      auto fast = *FastBatchedLweCompress(eck, cts, 48);
      ASSERT_EQ(slow.x, fast.x);
      ASSERT_EQ(slow.batch_size, 2u);
      auto out = *ModifiedBatchedLweDecrypt(sk, params, slow);
      ASSERT_EQ(out, (std::vector<uint64_t>{m0, m1}));
    }
  }
}

TEST(BatchedTest, CapacityBoundary) {
  PaillierSecretKey sk = Key2491();
  LweParams params = Toy();
  Prng rng = TestPrng(12);
  LweSecretKey lwe_sk{{1, 0}};
  auto key = *MakeCompressionKey(sk, params, lwe_sk, rng);
  std::vector<LweCiphertext> cts(3, LweCiphertext{{1, 2}, 3});
  EXPECT_TRUE(IsCapacityExceeded(BatchedLweCompress(key, cts, 48).status()));
  EXPECT_TRUE(
      IsCapacityExceeded(FastBatchedLweCompress(key, cts, 48).status()));
  EXPECT_EQ(KindOf(BatchedLweCompress(key, cts, 47).status()),
            ErrorKind::kInput);
  EXPECT_EQ(KindOf(BatchedLweCompress(key, {}, 48).status()),
            ErrorKind::kInput);
}

TEST(BatchedTest, SingleSlotMatchesPlainCompression) {
  PaillierSecretKey sk = Key2491();
  LweParams params = Toy();
  Prng rng = TestPrng(13);
  LweSecretKey lwe_sk{{0, 1}};
  auto key = *MakeCompressionKey(sk, params, lwe_sk, rng);
  LweCiphertext ct{{4, 9}, 13};
  std::vector<LweCiphertext> one = {ct};
  EXPECT_EQ(BatchedLweCompress(key, one, 48)->x, LweCompress(key, ct)->x);
}

class LargeBatchTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const PaillierKeyPair& kp = CachedKey(512);
    params_ = *LweParams::Create(64, Modulus::PowerOfTwo(32), 16, 3.2,
                                 KeyDistribution::kBinary);
    Prng rng = TestPrng(14);
    lwe_sk_ = LweKeygen(params_, rng);
    key_ = *MakeCompressionKey(kp.sk, params_, lwe_sk_, rng);
  }

  LweParams params_ = Toy();
  LweSecretKey lwe_sk_;
  CompressionKey key_{Toy(), CachedKey(512).pk, {}, 1};
};

TEST_F(LargeBatchTest, SlotsAreIndependent) {
  const PaillierKeyPair& kp = CachedKey(512);
  mpz_class gamma = SelectScale(params_, NoiseRegime::kStandard);
  size_t l = BatchCapacity(kp.pk.m(), gamma, params_, NoiseRegime::kStandard);
  ASSERT_GE(l, 4u);
  Prng rng = TestPrng(15);
  std::vector<LweCiphertext> cts;
  std::vector<uint64_t> mus;
  for (size_t j = 0; j < l; ++j) {
    mus.push_back(rng.UniformBelow(uint64_t{16}));
    cts.push_back(*LweEncrypt(params_, lwe_sk_, mus.back(), rng));
  }
  auto base = *ModifiedBatchedLweDecrypt(
      kp.sk, params_, *FastBatchedLweCompress(key_, cts, gamma));
  ASSERT_EQ(base, mus);
  for (size_t j = 0; j < l; ++j) {
    std::vector<LweCiphertext> changed = cts;
    changed[j].b = params_.q().Add(changed[j].b, params_.delta());
    auto out = *ModifiedBatchedLweDecrypt(
        kp.sk, params_, *FastBatchedLweCompress(key_, changed, gamma));
    for (size_t k = 0; k < l; ++k) {
      ASSERT_EQ(out[k], k == j ? (mus[k] + 1) % 16 : mus[k]);
    }
  }
}

TEST_F(LargeBatchTest, QuarterDeltaRegimeUnderNoiseGate) {
  const PaillierKeyPair& kp = CachedKey(512);
  mpz_class gamma = SelectScale(params_, NoiseRegime::kQuarterDelta);
  EXPECT_EQ(gamma, mpz_class(1) << 32);
  size_t l =
      BatchCapacity(kp.pk.m(), gamma, params_, NoiseRegime::kQuarterDelta);
  ASSERT_GT(
      l, BatchCapacity(kp.pk.m(), SelectScale(params_, NoiseRegime::kStandard),
                       params_, NoiseRegime::kStandard));
  Prng rng = TestPrng(16);
  const int64_t quarter = static_cast<int64_t>(params_.delta() / 4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<LweCiphertext> cts;
    std::vector<uint64_t> mus;
    for (size_t j = 0; j < l; ++j) {
      mus.push_back(rng.UniformBelow(uint64_t{16}));
      auto ct = *LweEncryptInstrumented(params_, lwe_sk_, mus.back(), rng);
      ASSERT_LT(std::abs(ct.noise), quarter);
      cts.push_back(ct.ct);
    }
    auto cc =
        *FastBatchedLweCompress(key_, cts, gamma, NoiseRegime::kQuarterDelta);
    ASSERT_EQ(*ModifiedBatchedLweDecrypt(kp.sk, params_, cc), mus);
  }
}

TEST(CompressedSerializationTest, RoundTrip) {
  PaillierSecretKey sk = Key2491();
  Prng rng = TestPrng(17);
  auto key = *MakeCompressionKey(sk, Toy(), LweSecretKey{{1, 1}}, rng);
  std::vector<LweCiphertext> cts(2, LweCiphertext{{1, 2}, 3});
  auto cc = *BatchedLweCompress(key, cts, 48);
  WireWriter w;
  SerializeCompressed(sk.public_key(), cc, w);
  WireReader r(w.bytes());
  auto back = DeserializeCompressed(sk.public_key(), r);
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(*back, cc);
  EXPECT_TRUE(r.done());
}

TEST(FullSizeTest, PlainFastAndPackedAgreeAtFullSize) {
  const PaillierKeyPair& kp = CachedKey(3072);
  auto params = *LweParams::Create(630, Modulus::PowerOfTwo(64), 256, 6.4,
                                   KeyDistribution::kBinary);
  Prng rng = TestPrng(18);
  LweSecretKey lwe_sk = LweKeygen(params, rng);
  auto packed = *GeneratePackedKey(kp.sk, params, lwe_sk,
                                   DefaultPackingRadix(params), rng);
  EXPECT_EQ(packed.pck.size(), 32u);
  auto key = UnpackCompressionKey(packed);
  auto eck = ExpandedCompressionKey::ExpandForThroughput(key);
  for (int trial = 0; trial < 3; ++trial) {
    uint64_t mu = rng.UniformBelow(uint64_t{256});
    auto ct = *LweEncrypt(params, lwe_sk, mu, rng);
    auto plain = *LweCompress(key, ct);
    auto fast = *FastLweCompress(eck, ct);
    EXPECT_EQ(plain.x, fast.x);
    EXPECT_EQ(*ModifiedLweDecrypt(kp.sk, params, fast), mu);
  }
}

TEST(SizesTest, SingleCiphertextReductions) {
  auto lwe = LweCompressionSizes(630, 64, 3072);
  EXPECT_EQ(lwe.uncompressed_bytes, 5048u);
  EXPECT_EQ(lwe.compressed_bytes, 768u);
  EXPECT_NEAR(lwe.reduction_percent, 84.78, 0.01);
  auto small = RlweCompressionSizes(1024, 27, 3072);
  EXPECT_EQ(small.uncompressed_bytes, 3460u);
  EXPECT_NEAR(small.reduction_percent, 77.80, 0.01);
  auto large = RlweCompressionSizes(8192, 43, 3072);
  EXPECT_EQ(large.uncompressed_bytes, 44036u);
  EXPECT_NEAR(large.reduction_percent, 98.26, 0.01);
}

TEST(SizesTest, PackedKeySizesForFourParameterSets) {
  struct Row {
    size_t n;
    unsigned log2_q;
    double unpacked_kb, nonbinary_kb, binary_kb;
  };
  // Sizes in KB for a 3072-bit modulus.
  const Row rows[] = {{630, 64, 241.936, 22.288, 12.304},
                      {742, 64, 284.944, 26.128, 14.608},
                      {870, 64, 334.096, 30.736, 16.912},
                      {1305, 11, 501.136, 11.152, 7.312}};
  for (const Row& row : rows) {
    auto uniform = PackedKeySizesFor(row.n, row.log2_q, false, 3072);
    auto binary = PackedKeySizesFor(row.n, row.log2_q, true, 3072);
    EXPECT_NEAR(uniform.unpacked_bytes / 1000.0, row.unpacked_kb, 1e-9);
    EXPECT_NEAR(uniform.packed_bytes / 1000.0, row.nonbinary_kb, 1e-9);
    EXPECT_NEAR(binary.packed_bytes / 1000.0, row.binary_kb, 1e-9);
  }
}

}  // namespace
}  // namespace zippir
