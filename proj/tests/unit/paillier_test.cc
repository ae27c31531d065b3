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

#include "zippir/additive_he/paillier.h"

#include <gmpxx.h>

#include <cstdint>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "test_keys.h"
#include "zippir/additive_he/multiexp.h"
#include "zippir/additive_he/op_counters.h"
#include "zippir/common/bigint.h"
#include "zippir/common/errors.h"

namespace zippir {
namespace {

using ::zippir::testing::CachedKey;
using ::zippir::testing::Key77;
using ::zippir::testing::TestPrng;

TEST(PaillierKeygenTest, SixteenBitKeysHaveExactSize) {
  Prng rng = TestPrng(3);
  for (int i = 0; i < 20; ++i) {
    auto kp = PaillierKeygen(16, rng);
    ASSERT_TRUE(kp.ok());
    EXPECT_EQ(BitLength(kp->pk.m()), 16u);
    EXPECT_EQ(BitLength(kp->sk.p()), 8u);
    EXPECT_EQ(BitLength(kp->sk.q()), 8u);
    mpz_class g;
    mpz_class phi = (kp->sk.p() - 1) * (kp->sk.q() - 1);
    mpz_gcd(g.get_mpz_t(), phi.get_mpz_t(), kp->pk.m().get_mpz_t());
    EXPECT_EQ(g, 1);
  }
}

TEST(PaillierKeygenTest, RejectsOddOrTinySizes) {
  Prng rng = TestPrng(3);
  EXPECT_FALSE(PaillierKeygen(15, rng).ok());
  EXPECT_FALSE(PaillierKeygen(14, rng).ok());
}

TEST(PaillierKeygenTest, ProductionSizeKey) {
  const PaillierKeyPair& kp = CachedKey(3072);
  EXPECT_EQ(BitLength(kp.pk.m()), 3072u);
  EXPECT_EQ(BitLength(kp.sk.p()), 1536u);
  EXPECT_EQ(BitLength(kp.sk.q()), 1536u);
  EXPECT_EQ(kp.pk.plaintext_bytes(), 384u);
  EXPECT_EQ(kp.pk.ciphertext_bytes(), 768u);
}

TEST(PaillierTest, FixedPrimesGiveToyModulus) {
  PaillierSecretKey sk = Key77();
  EXPECT_EQ(sk.public_key().m(), 77);
  EXPECT_EQ(sk.public_key().m_squared(), 5929);
  EXPECT_EQ(sk.lambda(), 30);
}

TEST(PaillierTest, TextbookEncryptionWithFixedNonce) {
  PaillierSecretKey sk = Key77();
  auto ct = sk.public_key().EncryptWithNonce(3, 2);
  ASSERT_TRUE(ct.ok());
  EXPECT_EQ(ct->c, 2020);
  EXPECT_EQ(*sk.Decrypt(*ct), 3);
}

TEST(PaillierTest, ExhaustiveRoundTripAtToyModulus) {
  PaillierSecretKey sk = Key77();
  const PaillierPublicKey& pk = sk.public_key();
  Prng rng = TestPrng(5);
  for (int mu = 0; mu < 77; ++mu) {
    EXPECT_EQ(*sk.Decrypt(*pk.Encrypt(mu, rng)), mu);
    EXPECT_EQ(*sk.Decrypt(*sk.Encrypt(mu, rng)), mu);
    EXPECT_EQ(*sk.Decrypt(pk.TrivialEncrypt(mu)), mu);
  }
}

TEST(PaillierTest, EncryptionOfZeroDecryptsToZero) {
  PaillierSecretKey sk = Key77();
  Prng rng = TestPrng(6);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(*sk.Decrypt(*sk.public_key().Encrypt(0, rng)), 0);
  }
}

TEST(PaillierTest, OwnerEncryptionCoversTextbookNonceSet) {
  // The set {r^m mod m^2 : r in Z*_m} must be hit exactly by the
  // factorization-based sampler.
  PaillierSecretKey sk = Key77();
  const PaillierPublicKey& pk = sk.public_key();
  std::set<mpz_class> textbook;
  for (int r = 1; r < 77; ++r) {
    if (r % 7 == 0 || r % 11 == 0) continue;
    textbook.insert(pk.EncryptWithNonce(0, r)->c);
  }
  std::set<mpz_class> owner;
  Prng rng = TestPrng(7);
  for (int i = 0; i < 4000; ++i) owner.insert(sk.Encrypt(0, rng)->c);
  EXPECT_EQ(owner, textbook);
}

TEST(PaillierTest, RejectsOutOfRangePlaintext) {
  PaillierSecretKey sk = Key77();
  Prng rng = TestPrng(8);
  EXPECT_FALSE(sk.public_key().Encrypt(77, rng).ok());
  EXPECT_FALSE(sk.public_key().Encrypt(-1, rng).ok());
  EXPECT_FALSE(sk.Encrypt(77, rng).ok());
}

TEST(PaillierTest, NonUnitCiphertextIsInvalid) {
  PaillierSecretKey sk = Key77();
  auto result = sk.Decrypt(PaillierCiphertext{7 * 13});
  ASSERT_FALSE(result.ok());
  EXPECT_TRUE(IsInvalidCiphertext(result.status()));
  EXPECT_TRUE(IsInvalidCiphertext(sk.Decrypt(PaillierCiphertext{0}).status()));
  EXPECT_TRUE(
      IsInvalidCiphertext(sk.Decrypt(PaillierCiphertext{5929}).status()));
}

TEST(PaillierTest, AdditionExamples) {
  PaillierSecretKey sk = Key77();
  const PaillierPublicKey& pk = sk.public_key();
  Prng rng = TestPrng(9);
  auto c40 = *pk.Encrypt(40, rng);
  auto c50 = *pk.Encrypt(50, rng);
  EXPECT_EQ(*sk.Decrypt(pk.Add(c40, c50)), 13);
  auto zero = *pk.Encrypt(0, rng);
  EXPECT_EQ(*sk.Decrypt(pk.Add(zero, c50)), 50);
  EXPECT_EQ(*sk.Decrypt(pk.AddPlain(c40, 50)), 13);
}

TEST(PaillierTest, AdditionIsCommutativeForAllToyPairs) {
  PaillierSecretKey sk = Key77();
  const PaillierPublicKey& pk = sk.public_key();
  Prng rng = TestPrng(10);
  std::vector<PaillierCiphertext> cts;
  for (int mu = 0; mu < 77; ++mu) cts.push_back(*pk.Encrypt(mu, rng));
  for (int a = 0; a < 77; ++a) {
    for (int b = 0; b < 77; ++b) {
      mpz_class ab = *sk.Decrypt(pk.Add(cts[a], cts[b]));
      mpz_class ba = *sk.Decrypt(pk.Add(cts[b], cts[a]));
      ASSERT_EQ(ab, (a + b) % 77);
      ASSERT_EQ(ab, ba);
    }
  }
}

TEST(PaillierTest, ScalarMultiplicationExamples) {
  PaillierSecretKey sk = Key77();
  const PaillierPublicKey& pk = sk.public_key();
  Prng rng = TestPrng(11);
  auto c6 = *pk.Encrypt(6, rng);
  EXPECT_EQ(*sk.Decrypt(pk.ScalarMul(13, c6)), 1);
  EXPECT_EQ(*sk.Decrypt(pk.ScalarMul(1, c6)), 6);
  EXPECT_EQ(*sk.Decrypt(pk.ScalarMul(0, c6)), 0);
  for (int k = 0; k < 77; ++k) {
    for (int mu = 0; mu < 77; mu += 7) {
      ASSERT_EQ(*sk.Decrypt(pk.ScalarMul(k, *pk.Encrypt(mu, rng))),
                (k * mu) % 77);
    }
  }
}

TEST(PaillierTest, MatMulExamples) {
  PaillierSecretKey sk = Key77();
  const PaillierPublicKey& pk = sk.public_key();
  Prng rng = TestPrng(12);
  std::vector<PaillierCiphertext> v = {*pk.Encrypt(5, rng),
                                       *pk.Encrypt(4, rng)};
  auto out = pk.MatMul({{2, 3}}, v);
  ASSERT_TRUE(out.ok());
  ASSERT_EQ(out->size(), 1u);
  EXPECT_EQ(*sk.Decrypt((*out)[0]), 22);

  auto identity = pk.MatMul({{1, 0}, {0, 1}}, v);
  EXPECT_EQ(*sk.Decrypt((*identity)[0]), 5);
  EXPECT_EQ(*sk.Decrypt((*identity)[1]), 4);

  EXPECT_FALSE(pk.MatMul({{1, 2, 3}}, v).ok());
}

TEST(PaillierTest, RandomMatMulAgainstPlaintextOracle) {
  PaillierSecretKey sk = Key77();
  const PaillierPublicKey& pk = sk.public_key();
  Prng rng = TestPrng(13);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<mpz_class>> h(3, std::vector<mpz_class>(2));
    std::vector<uint64_t> plain(2);
    std::vector<PaillierCiphertext> v;
    for (auto& x : plain) {
      x = rng.UniformBelow(uint64_t{77});
      v.push_back(*pk.Encrypt(x, rng));
    }
    for (auto& row : h) {
      for (auto& e : row) e = rng.UniformBelow(uint64_t{77});
    }
    auto out = *pk.MatMul(h, v);
    for (int i = 0; i < 3; ++i) {
      mpz_class expected = (h[i][0] * plain[0] + h[i][1] * plain[1]) % 77;
      EXPECT_EQ(*sk.Decrypt(out[i]), expected);
    }
  }
}

TEST(PaillierTest, HomomorphismAtProductionSize) {
  const PaillierKeyPair& kp = CachedKey(3072);
  Prng rng = TestPrng(14);
  for (int i = 0; i < 3; ++i) {
    mpz_class a = rng.UniformBelow(kp.pk.m());
    mpz_class b = rng.UniformBelow(kp.pk.m());
    mpz_class k = rng.RandomBits(64);
    auto ca = *kp.sk.Encrypt(a, rng);
    auto cb = *kp.pk.Encrypt(b, rng);
    EXPECT_EQ(*kp.sk.Decrypt(ca), a);
    EXPECT_EQ(*kp.sk.Decrypt(kp.pk.Add(ca, cb)), (a + b) % kp.pk.m());
    EXPECT_EQ(*kp.sk.Decrypt(kp.pk.ScalarMul(k, ca)), (k * a) % kp.pk.m());
  }
}

TEST(SampleTest, DeterministicInSeedAndIndex) {
  PaillierSecretKey sk = Key77();
  const PaillierPublicKey& pk = sk.public_key();
  Seed seed = Prng::SeedFromInt(99);
  EXPECT_EQ(pk.Sample(seed, 5), pk.Sample(seed, 5));
  EXPECT_LT(pk.Sample(seed, 5).c, pk.m_squared());
}

TEST(SampleTest, DistinctIndicesDoNotCollide) {
  const PaillierKeyPair& kp = CachedKey(256);
  Seed seed = Prng::SeedFromInt(100);
  std::set<mpz_class> seen;
  for (uint64_t i = 0; i < 10000; ++i) seen.insert(kp.pk.Sample(seed, i).c);
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(SampleTest, ResiduesModSmallPrimeAreUniform) {
  // Chi-square over 101 buckets; 149.45 is the 0.999 quantile at 100
  // degrees of freedom.
  const PaillierKeyPair& kp = CachedKey(256);
  Seed seed = Prng::SeedFromInt(101);
  constexpr int kBuckets = 101;
  constexpr int kSamples = 20200;
  std::vector<int> counts(kBuckets, 0);
  for (int i = 0; i < kSamples; ++i) {
    mpz_class c = kp.pk.Sample(seed, i).c;
    ++counts[mpz_fdiv_ui(c.get_mpz_t(), kBuckets)];
  }
  double expected = static_cast<double>(kSamples) / kBuckets;
  double chi2 = 0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 149.45);
}

TEST(OffsetTest, RecombinedOffsetDecryptsToMessage) {
  PaillierSecretKey sk = Key77();
  const PaillierPublicKey& pk = sk.public_key();
  Seed seed = Prng::SeedFromInt(102);
  int checked = 0;
  for (uint64_t idx = 0; idx < 200; ++idx) {
    PaillierCiphertext sampled = pk.Sample(seed, idx);
    auto r = sk.Decrypt(sampled);
    if (!r.ok()) {
      EXPECT_TRUE(IsInvalidCiphertext(r.status()));
      continue;
    }
    mpz_class mu = idx % 77;
    OffsetCiphertext oc = pk.MakeOffset(sampled, *r, mu);
    EXPECT_EQ((*r + oc.offset) % 77, mu);
    EXPECT_EQ(*sk.Decrypt(pk.Recombine(oc)), mu);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(SerializationTest, KeyAndCiphertextRoundTrip) {
  const PaillierKeyPair& kp = CachedKey(256);
  Prng rng = TestPrng(15);
  auto ct = *kp.pk.Encrypt(12345, rng);
  WireWriter w;
  kp.pk.Serialize(w);
  kp.pk.SerializeCiphertext(ct, w);
  EXPECT_EQ(w.payload_bytes(), 32u + 64u);
  WireReader r(w.bytes());
  auto pk = PaillierPublicKey::Deserialize(r);
  ASSERT_TRUE(pk.ok());
  EXPECT_EQ(*pk, kp.pk);
  EXPECT_EQ(*pk->DeserializeCiphertext(r), ct);
}

TEST(MultiExpTest, MatchesScalarMultiplicationsForEveryWindow) {
  PaillierSecretKey sk = *PaillierSecretKey::FromPrimes(47, 53);
  const PaillierPublicKey& pk = sk.public_key();
  Prng rng = TestPrng(16);
  std::vector<PaillierCiphertext> bases;
  for (int i = 0; i < 5; ++i) bases.push_back(*pk.Encrypt(i * 100 + 1, rng));
  for (unsigned w : {1u, 3u, 8u}) {
    FixedBaseMultiExp engine(pk, bases, 20, w);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<uint64_t> exps(5);
      PaillierCiphertext expected = pk.TrivialEncrypt(0);
      for (int i = 0; i < 5; ++i) {
        exps[i] = rng.UniformBelow(uint64_t{1} << 20);
        expected = pk.Add(expected, pk.ScalarMul(exps[i], bases[i]));
      }
      EXPECT_EQ(engine.Evaluate(exps), expected);
    }
  }
}

TEST(MultiExpTest, UsesAdditionsOnly) {
  PaillierSecretKey sk = Key77();
  const PaillierPublicKey& pk = sk.public_key();
  Prng rng = TestPrng(17);
  std::vector<PaillierCiphertext> bases = {*pk.Encrypt(1, rng),
                                           *pk.Encrypt(2, rng)};
  OpCounts before = OpCounters::Global().Snapshot();
  FixedBaseMultiExp engine(pk, bases, 4, 1);
  OpCounts built = OpCounters::Global().Snapshot() - before;
  // Doubling ladder: (4 - 1) rows of 2 bases.
  EXPECT_EQ(built.additions, 6u);
  std::vector<uint64_t> exps = {0b1011, 0b0110};
  PaillierCiphertext acc = pk.TrivialEncrypt(0);
  OpCounts mid = OpCounters::Global().Snapshot();
  engine.Accumulate(exps, acc);
  OpCounts used = OpCounters::Global().Snapshot() - mid;
  EXPECT_EQ(used.scalar_muls, 0u);
  EXPECT_EQ(used.exponentiations, 0u);
  // One addition per set bit.
  EXPECT_EQ(used.additions, 5u);
  EXPECT_EQ(*sk.Decrypt(acc), (11 * 1 + 6 * 2) % 77);
}

}  // namespace
}  // namespace zippir
