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

#include <utility>

#include "absl/strings/str_cat.h"
#include "zippir/common/bigint.h"
#include "zippir/common/errors.h"
#include "zippir/common/parallel.h"
#include "zippir/common/status_macros.h"

namespace zippir {
namespace {

mpz_class PowUi(const mpz_class& base, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

absl::Status CheckCiphertextShape(const LweParams& params,
                                  const LweCiphertext& ct) {
  if (ct.a.size() != params.n()) {
    return InputError(absl::StrCat("LWE mask has ", ct.a.size(),
                                   " entries, expected ", params.n()));
  }
  return absl::OkStatus();
}

// Addition-only linear combination over a precomputed key.
PaillierCiphertext FastCompressRaw(const ExpandedCompressionKey& eck,
                                   const LweCiphertext& ct) {
  const Modulus& q = eck.params().q();
  std::vector<uint64_t> exps(ct.a.size());
  for (size_t i = 0; i < ct.a.size(); ++i) exps[i] = q.Neg(q.Reduce(ct.a[i]));
  PaillierCiphertext x = eck.pk().TrivialEncrypt(FromU64(q.Reduce(ct.b)));
  eck.engine().Accumulate(exps, x);
  return x;
}

PaillierCiphertext CompressRaw(const CompressionKey& key,
                               const LweCiphertext& ct) {
  const Modulus& q = key.params.q();
  const PaillierPublicKey& pk = key.pk;
  PaillierCiphertext x = pk.TrivialEncrypt(FromU64(q.Reduce(ct.b)));
  for (size_t i = 0; i < ct.a.size(); ++i) {
    uint64_t scalar = q.Neg(q.Reduce(ct.a[i]));
    pk.AddInPlace(x, pk.ScalarMul(FromU64(scalar), key.ck[i]));
  }
  return x;
}

absl::Status CheckBatch(const PaillierPublicKey& pk, const LweParams& params,
                        const mpz_class& key_scaling, size_t count,
                        const mpz_class& gamma, NoiseRegime regime) {
  if (key_scaling != 1) {
    return InputError("batched compression requires an unscaled key");
  }
  if (count == 0) return InputError("empty batch");
  if (gamma < SelectScale(params, regime)) {
    return InputError("scale below the bound for this key and noise regime");
  }
  size_t capacity = BatchCapacity(pk.m(), gamma, params, regime);
  if (count > capacity) {
    return CapacityExceededError(absl::StrCat(
        "batch of ", count, " exceeds capacity ", capacity, " (max l)"));
  }
  return absl::OkStatus();
}

// sum_j gamma^j (x) xs[j] by Horner's rule.
PaillierCiphertext CombineSlots(const PaillierPublicKey& pk,
                                std::vector<PaillierCiphertext> xs,
                                const mpz_class& gamma, bool additions_only) {
  PaillierCiphertext acc = std::move(xs.back());
  for (size_t j = xs.size() - 1; j-- > 0;) {
    acc = additions_only ? ScaleByAdditions(pk, gamma, acc)
                         : pk.ScalarMul(gamma, acc);
    pk.AddInPlace(acc, xs[j]);
  }
  return acc;
}

}  // namespace

mpz_class CompressionBound(const Modulus& q, size_t n, bool binary_key) {
  mpz_class qz = q.ToMpz();
  mpz_class nz = static_cast<unsigned long>(n);
  if (binary_key) return qz + nz * qz;
  return qz + nz * qz * qz;
}

mpz_class CompressionBound(const LweParams& params) {
  return CompressionBound(params.q(), params.n(), params.binary_key());
}

absl::Status CheckCompressionModulus(const PaillierPublicKey& pk,
                                     const LweParams& params) {
  mpz_class bound = CompressionBound(params);
  if (pk.m() <= bound) {
    return ModulusTooSmallError(absl::StrCat(
        "need m > ", params.binary_key() ? "q + n*q = " : "q + n*q^2 = ",
        bound.get_str(), ", got m = ", pk.m().get_str()));
  }
  return absl::OkStatus();
}

mpz_class SelectScale(const LweParams& params, NoiseRegime regime) {
  if (regime == NoiseRegime::kStandard) return CompressionBound(params);
  mpz_class q = params.q().ToMpz();
  return params.binary_key() ? q : q * q;
}

size_t BatchCapacity(const mpz_class& m, const mpz_class& gamma,
                     const LweParams& params, NoiseRegime regime) {
  if (gamma < 2) return 0;
  size_t l = 0;
  if (regime == NoiseRegime::kStandard) {
    mpz_class power = gamma;
    while (power < m) {
      ++l;
      power *= gamma;
    }
    return l;
  }
  const mpz_class slot_max = CompressionBound(params) - 1;
  mpz_class total = 0, power = 1;
  while (total + slot_max * power < m) {
    total += slot_max * power;
    power *= gamma;
    ++l;
  }
  return l;
}

void SerializeCompressed(const PaillierPublicKey& pk,
                         const CompressedCiphertext& cc, WireWriter& out) {
  out.PutBigInt(cc.gamma);
  out.PutBigInt(mpz_class(static_cast<unsigned long>(cc.batch_size)));
  out.PutBigInt(cc.key_scaling);
  pk.SerializeCiphertext(cc.x, out);
}

absl::StatusOr<CompressedCiphertext> DeserializeCompressed(
    const PaillierPublicKey& pk, WireReader& in) {
  CompressedCiphertext cc;
  ZIPPIR_ASSIGN_OR_RETURN(cc.gamma, in.GetBigInt());
  ZIPPIR_ASSIGN_OR_RETURN(mpz_class l, in.GetBigInt());
  ZIPPIR_ASSIGN_OR_RETURN(cc.key_scaling, in.GetBigInt());
  ZIPPIR_ASSIGN_OR_RETURN(cc.x, pk.DeserializeCiphertext(in));
  if (l < 1 || !l.fits_ulong_p()) return ProtocolError("invalid batch size");
  if (cc.key_scaling < 1) return ProtocolError("invalid key scaling");
  cc.batch_size = l.get_ui();
  return cc;
}

absl::StatusOr<CompressionKey> MakeCompressionKey(const PaillierPublicKey& pk,
                                                  const LweParams& params,
                                                  const LweSecretKey& sk,
                                                  Prng& rng) {
  ZIPPIR_RETURN_IF_ERROR(CheckCompressionModulus(pk, params));
  if (sk.s.size() != params.n()) return InputError("key length differs from n");
  CompressionKey key{params, pk, {}, 1};
  key.ck.reserve(sk.s.size());
  for (uint64_t s : sk.s) {
    ZIPPIR_ASSIGN_OR_RETURN(PaillierCiphertext c, pk.Encrypt(FromU64(s), rng));
    key.ck.push_back(std::move(c));
  }
  return key;
}

absl::StatusOr<CompressionKey> MakeCompressionKey(
    const PaillierSecretKey& paillier_sk, const LweParams& params,
    const LweSecretKey& sk, Prng& rng) {
  const PaillierPublicKey& pk = paillier_sk.public_key();
  ZIPPIR_RETURN_IF_ERROR(CheckCompressionModulus(pk, params));
  if (sk.s.size() != params.n()) return InputError("key length differs from n");
  CompressionKey key{params, pk, {}, 1};
  key.ck.reserve(sk.s.size());
  for (uint64_t s : sk.s) {
    ZIPPIR_ASSIGN_OR_RETURN(PaillierCiphertext c,
                            paillier_sk.Encrypt(FromU64(s), rng));
    key.ck.push_back(std::move(c));
  }
  return key;
}

absl::StatusOr<CompressedCiphertext> LweCompress(const CompressionKey& key,
                                                 const LweCiphertext& ct) {
  ZIPPIR_RETURN_IF_ERROR(CheckCompressionModulus(key.pk, key.params));
  ZIPPIR_RETURN_IF_ERROR(CheckCiphertextShape(key.params, ct));
  return CompressedCiphertext{CompressRaw(key, ct),
                              CompressionBound(key.params), 1, key.key_scaling};
}

absl::StatusOr<uint64_t> CompressedPhase(const PaillierSecretKey& sk,
                                         const LweParams& params,
                                         const CompressedCiphertext& cc) {
  if (cc.batch_size != 1) {
    return InputError("use the batched decryption for batched ciphertexts");
  }
  ZIPPIR_ASSIGN_OR_RETURN(mpz_class y, sk.Decrypt(cc.x));
  if (cc.key_scaling != 1) {
    const mpz_class& m = sk.public_key().m();
    y = (y * cc.key_scaling) % m;
    mpz_fdiv_q(y.get_mpz_t(), y.get_mpz_t(), cc.key_scaling.get_mpz_t());
  }
  mpz_class phase = y % params.q().ToMpz();
  return LowU64(phase);
}

absl::StatusOr<uint64_t> ModifiedLweDecrypt(const PaillierSecretKey& sk,
                                            const LweParams& params,
                                            const CompressedCiphertext& cc) {
  ZIPPIR_ASSIGN_OR_RETURN(uint64_t phase, CompressedPhase(sk, params, cc));
  return DecodePhase(params, phase);
}

mpz_class DefaultPackingRadix(const LweParams& params) {
  mpz_class bound = CompressionBound(params);
  mpz_class delta = params.q().ToMpz();
  while (delta <= bound) delta *= 2;
  return delta;
}

size_t PackingDigits(const mpz_class& m, const mpz_class& delta) {
  if (delta < 2) return 0;
  mpz_class delta_sq = delta * delta;
  mpz_class power = delta_sq;
  size_t t = 0;
  while (power <= m) {
    ++t;
    power *= delta_sq;
  }
  return t;
}

namespace {

template <typename Encryptor>
absl::StatusOr<PackedCompressionKey> GeneratePackedKeyWith(
    const PaillierPublicKey& pk, const LweParams& params,
    const LweSecretKey& sk, const mpz_class& delta, Encryptor encrypt) {
  ZIPPIR_RETURN_IF_ERROR(CheckCompressionModulus(pk, params));
  if (sk.s.size() != params.n()) return InputError("key length differs from n");
  if (delta <= CompressionBound(params)) {
    return InputError("packing radix must exceed the compression bound");
  }
  if (delta % params.q().ToMpz() != 0) {
    return InputError("packing radix must be a multiple of q");
  }
  const mpz_class& m = pk.m();
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), delta.get_mpz_t(), m.get_mpz_t());
  if (g != 1) return InputError("packing radix is not invertible modulo m");
  size_t t = PackingDigits(m, delta);
  if (t == 0) return ModulusTooSmallError("delta^2 exceeds the modulus");

  mpz_class scale;  // delta^-(t-1) mod m
  mpz_class top = PowUi(delta, t - 1);
  mpz_invert(scale.get_mpz_t(), top.get_mpz_t(), m.get_mpz_t());

  PackedCompressionKey packed{params, pk, {}, t, delta};
  const size_t n = params.n();
  for (size_t base = 0; base < n; base += t) {
    mpz_class digits = 0, power = 1;
    for (size_t j = 0; j < t && base + j < n; ++j) {
      digits += FromU64(sk.s[base + j]) * power;
      power *= delta;
    }
    mpz_class r = (digits % m) * scale % m;
    ZIPPIR_ASSIGN_OR_RETURN(PaillierCiphertext c, encrypt(r));
    packed.pck.push_back(std::move(c));
  }
  return packed;
}

}  // namespace

absl::StatusOr<PackedCompressionKey> GeneratePackedKey(
    const PaillierSecretKey& paillier_sk, const LweParams& params,
    const LweSecretKey& sk, const mpz_class& delta, Prng& rng) {
  return GeneratePackedKeyWith(
      paillier_sk.public_key(), params, sk, delta,
      [&](const mpz_class& r) { return paillier_sk.Encrypt(r, rng); });
}

absl::StatusOr<PackedCompressionKey> GeneratePackedKey(
    const PaillierPublicKey& pk, const LweParams& params,
    const LweSecretKey& sk, const mpz_class& delta, Prng& rng) {
  return GeneratePackedKeyWith(pk, params, sk, delta, [&](const mpz_class& r) {
    return pk.Encrypt(r, rng);
  });
}

CompressionKey UnpackCompressionKey(const PackedCompressionKey& packed) {
  const size_t n = packed.params.n();
  const size_t t = packed.t;
  CompressionKey key{packed.params, packed.pk, {}, PowUi(packed.delta, t - 1)};
  key.ck.resize(n);
  ParallelFor(packed.pck.size(), [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      // Walk j downwards so each step is one multiplication by delta:
      // ck[i t + j] = delta^(t-1-j) (x) pck[i].
      PaillierCiphertext current = packed.pck[i];
      for (size_t j = t; j-- > 0;) {
        if (j + 1 < t) current = packed.pk.ScalarMul(packed.delta, current);
        if (i * t + j < n) key.ck[i * t + j] = current;
      }
    }
  });
  return key;
}

ExpandedCompressionKey ExpandedCompressionKey::Expand(const CompressionKey& key,
                                                      unsigned window_bits) {
  auto engine = std::make_shared<const FixedBaseMultiExp>(
      key.pk, key.ck, key.params.q().bits(), window_bits);
  return ExpandedCompressionKey(key.params, key.key_scaling, std::move(engine));
}

ExpandedCompressionKey ExpandedCompressionKey::ExpandForThroughput(
    const CompressionKey& key) {
  return Expand(key, FixedBaseMultiExp::OptimalWindow(key.params.n(),
                                                      key.params.q().bits()));
}

absl::StatusOr<CompressedCiphertext> FastLweCompress(
    const ExpandedCompressionKey& eck, const LweCiphertext& ct) {
  ZIPPIR_RETURN_IF_ERROR(CheckCompressionModulus(eck.pk(), eck.params()));
  ZIPPIR_RETURN_IF_ERROR(CheckCiphertextShape(eck.params(), ct));
  return CompressedCiphertext{FastCompressRaw(eck, ct),
                              CompressionBound(eck.params()), 1,
                              eck.key_scaling()};
}

absl::StatusOr<CompressedCiphertext> BatchedLweCompress(
    const CompressionKey& key, std::span<const LweCiphertext> cts,
    const mpz_class& gamma, NoiseRegime regime) {
  ZIPPIR_RETURN_IF_ERROR(CheckCompressionModulus(key.pk, key.params));
  ZIPPIR_RETURN_IF_ERROR(CheckBatch(key.pk, key.params, key.key_scaling,
                                    cts.size(), gamma, regime));
  for (const auto& ct : cts) {
    ZIPPIR_RETURN_IF_ERROR(CheckCiphertextShape(key.params, ct));
  }
  std::vector<PaillierCiphertext> xs(cts.size());
  ParallelFor(cts.size(), [&](size_t begin, size_t end) {
    for (size_t j = begin; j < end; ++j) xs[j] = CompressRaw(key, cts[j]);
  });
  return CompressedCiphertext{
      CombineSlots(key.pk, std::move(xs), gamma, /*additions_only=*/false),
      gamma, cts.size(), 1};
}

absl::StatusOr<CompressedCiphertext> FastBatchedLweCompress(
    const ExpandedCompressionKey& eck, std::span<const LweCiphertext> cts,
    const mpz_class& gamma, NoiseRegime regime) {
  ZIPPIR_RETURN_IF_ERROR(CheckCompressionModulus(eck.pk(), eck.params()));
  ZIPPIR_RETURN_IF_ERROR(CheckBatch(eck.pk(), eck.params(), eck.key_scaling(),
                                    cts.size(), gamma, regime));
  for (const auto& ct : cts) {
    ZIPPIR_RETURN_IF_ERROR(CheckCiphertextShape(eck.params(), ct));
  }
  std::vector<PaillierCiphertext> xs(cts.size());
  ParallelFor(cts.size(), [&](size_t begin, size_t end) {
    for (size_t j = begin; j < end; ++j) xs[j] = FastCompressRaw(eck, cts[j]);
  });
  return CompressedCiphertext{
      CombineSlots(eck.pk(), std::move(xs), gamma, /*additions_only=*/true),
      gamma, cts.size(), 1};
}

absl::StatusOr<CompressedCiphertext> FastBatchedLweCompress(
    const CompressionKey& key, std::span<const LweCiphertext> cts,
    const mpz_class& gamma, NoiseRegime regime) {
  return FastBatchedLweCompress(ExpandedCompressionKey::Expand(key), cts, gamma,
                                regime);
}

absl::StatusOr<std::vector<uint64_t>> BatchedCompressedPhases(
    const PaillierSecretKey& sk, const LweParams& params,
    const CompressedCiphertext& cc) {
  if (cc.key_scaling != 1) {
    return InputError("batched ciphertexts cannot use a scaled key");
  }
  if (cc.gamma < 2) return InputError("invalid batch scale");
  ZIPPIR_ASSIGN_OR_RETURN(mpz_class mu, sk.Decrypt(cc.x));
  return BatchedPhasesFromPlaintext(params, std::move(mu), cc.gamma,
                                    cc.batch_size);
}

std::vector<uint64_t> BatchedPhasesFromPlaintext(const LweParams& params,
                                                 mpz_class mu,
                                                 const mpz_class& gamma,
                                                 size_t batch_size) {
  const mpz_class q = params.q().ToMpz();
  std::vector<uint64_t> phases;
  phases.reserve(batch_size);
  mpz_class slot;
  for (size_t j = 0; j < batch_size; ++j) {
    mpz_fdiv_qr(mu.get_mpz_t(), slot.get_mpz_t(), mu.get_mpz_t(),
                gamma.get_mpz_t());
    phases.push_back(LowU64(slot % q));
  }
  return phases;
}

absl::StatusOr<std::vector<uint64_t>> ModifiedBatchedLweDecrypt(
    const PaillierSecretKey& sk, const LweParams& params,
    const CompressedCiphertext& cc) {
  ZIPPIR_ASSIGN_OR_RETURN(std::vector<uint64_t> phases,
                          BatchedCompressedPhases(sk, params, cc));
  for (auto& v : phases) v = DecodePhase(params, v);
  return phases;
}

PaillierCiphertext ScaleByAdditions(const PaillierPublicKey& pk,
                                    const mpz_class& k,
                                    const PaillierCiphertext& ct) {
  if (k <= 0) return pk.TrivialEncrypt(0);
  PaillierCiphertext acc = ct;
  for (size_t bit = BitLength(k) - 1; bit-- > 0;) {
    pk.AddInPlace(acc, acc);
    if (mpz_tstbit(k.get_mpz_t(), bit)) pk.AddInPlace(acc, ct);
  }
  return acc;
}

}  // namespace zippir
