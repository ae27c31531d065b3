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

#ifndef ZIPPIR_COMPRESSOR_COMPRESSOR_H_
#define ZIPPIR_COMPRESSOR_COMPRESSOR_H_

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "zippir/additive_he/multiexp.h"
#include "zippir/additive_he/paillier.h"
#include "zippir/common/prng.h"
#include "zippir/common/wire.h"
#include "zippir/lwe/lwe.h"

namespace zippir {

// Noise regime of batched slots. kQuarterDelta lets adjacent slots overlap
// and is only sound for ciphertexts with |e| < delta / 4.
enum class NoiseRegime : uint8_t { kStandard = 0, kQuarterDelta = 1 };

// Exclusive upper bound of a compressed phase: q + n*q^2 for uniform keys,
// q + n*q for binary keys.
mpz_class CompressionBound(const Modulus& q, size_t n, bool binary_key);
mpz_class CompressionBound(const LweParams& params);

// ModulusTooSmall unless m > CompressionBound(params).
absl::Status CheckCompressionModulus(const PaillierPublicKey& pk,
                                     const LweParams& params);

// q + n q^2 (uniform, standard), q + n q (binary, standard), q^2 (uniform,
// quarter delta) or q (binary, quarter delta).
mpz_class SelectScale(const LweParams& params, NoiseRegime regime);

// Largest l such that l slots at scale gamma fit below m. Standard regime:
// gamma^l < m. Quarter-delta regime: the slot sum bound
// (B - 1)(gamma^l - 1)/(gamma - 1) < m with B = CompressionBound(params).
size_t BatchCapacity(const mpz_class& m, const mpz_class& gamma,
                     const LweParams& params, NoiseRegime regime);

struct CompressedCiphertext {
  PaillierCiphertext x;
  mpz_class gamma = 1;
  size_t batch_size = 1;
  // delta^(t-1) for keys unpacked from a packed key, 1 otherwise.
  mpz_class key_scaling = 1;

  bool operator==(const CompressedCiphertext& other) const {
    return x == other.x && gamma == other.gamma &&
           batch_size == other.batch_size && key_scaling == other.key_scaling;
  }
};

void SerializeCompressed(const PaillierPublicKey& pk,
                         const CompressedCiphertext& cc, WireWriter& out);
absl::StatusOr<CompressedCiphertext> DeserializeCompressed(
    const PaillierPublicKey& pk, WireReader& in);

// ck[i] encrypts sk[i] (scaled keys carry key_scaling != 1).
struct CompressionKey {
  LweParams params;
  PaillierPublicKey pk;
  std::vector<PaillierCiphertext> ck;
  mpz_class key_scaling = 1;
};

// Encrypts the LWE key entrywise under the public key.
absl::StatusOr<CompressionKey> MakeCompressionKey(const PaillierPublicKey& pk,
                                                  const LweParams& params,
                                                  const LweSecretKey& sk,
                                                  Prng& rng);
// Same key distribution, encrypted with the factorization (faster).
absl::StatusOr<CompressionKey> MakeCompressionKey(
    const PaillierSecretKey& paillier_sk, const LweParams& params,
    const LweSecretKey& sk, Prng& rng);

// x = Enc(b; 1) (+) sum_i ((q - a[i]) mod q) (x) ck[i].
absl::StatusOr<CompressedCiphertext> LweCompress(const CompressionKey& key,
                                                 const LweCiphertext& ct);

// Dec(x) mod m, then the packed-key rescaling if any, reduced mod q.
absl::StatusOr<uint64_t> CompressedPhase(const PaillierSecretKey& sk,
                                         const LweParams& params,
                                         const CompressedCiphertext& cc);
// round(CompressedPhase / delta) mod p.
absl::StatusOr<uint64_t> ModifiedLweDecrypt(const PaillierSecretKey& sk,
                                            const LweParams& params,
                                            const CompressedCiphertext& cc);

// Packed key: ceil(n/t) ciphertexts, entry i encrypting
// delta^-(t-1) * sum_j sk[i t + j] delta^j mod m.
struct PackedCompressionKey {
  LweParams params;
  PaillierPublicKey pk;
  std::vector<PaillierCiphertext> pck;
  size_t t = 1;
  mpz_class delta;
};

// Smallest q * 2^k above CompressionBound(params).
mpz_class DefaultPackingRadix(const LweParams& params);
// Largest t with delta^(2t) <= m (0 if delta^2 > m).
size_t PackingDigits(const mpz_class& m, const mpz_class& delta);

// Requires delta > CompressionBound(params), delta a multiple of q, and
// gcd(delta, m) = 1.
absl::StatusOr<PackedCompressionKey> GeneratePackedKey(
    const PaillierSecretKey& paillier_sk, const LweParams& params,
    const LweSecretKey& sk, const mpz_class& delta, Prng& rng);
absl::StatusOr<PackedCompressionKey> GeneratePackedKey(
    const PaillierPublicKey& pk, const LweParams& params,
    const LweSecretKey& sk, const mpz_class& delta, Prng& rng);

// ck[i t + j] = delta^(t-1-j) (x) pck[i], with key_scaling delta^(t-1).
CompressionKey UnpackCompressionKey(const PackedCompressionKey& packed);

// Key powers for addition-only compression (see FixedBaseMultiExp). With
// window_bits = 1 row j holds ck scaled by 2^j, j < ceil(log2 q).
class ExpandedCompressionKey {
 public:
  static ExpandedCompressionKey Expand(const CompressionKey& key,
                                       unsigned window_bits = 1);
  // Window chosen for the key size.
  static ExpandedCompressionKey ExpandForThroughput(const CompressionKey& key);

  const LweParams& params() const { return params_; }
  const PaillierPublicKey& pk() const { return engine_->public_key(); }
  const mpz_class& key_scaling() const { return key_scaling_; }
  const FixedBaseMultiExp& engine() const { return *engine_; }
  // Row j, entry i: ck[i] scaled by 2^(window_bits * j).
  const PaillierCiphertext& Entry(unsigned j, size_t i) const {
    return engine_->Entry(j, i);
  }
  unsigned rows() const { return engine_->num_windows(); }

 private:
  ExpandedCompressionKey(LweParams params, mpz_class key_scaling,
                         std::shared_ptr<const FixedBaseMultiExp> engine)
      : params_(std::move(params)),
        key_scaling_(std::move(key_scaling)),
        engine_(std::move(engine)) {}

  LweParams params_;
  mpz_class key_scaling_;
  std::shared_ptr<const FixedBaseMultiExp> engine_;
};

// Same ciphertext as LweCompress, using additions only.
absl::StatusOr<CompressedCiphertext> FastLweCompress(
    const ExpandedCompressionKey& eck, const LweCiphertext& ct);

// x = sum_j gamma^j (x) LweCompress(ct_j). CapacityExceeded when l exceeds
// BatchCapacity; not available for packed (scaled) keys.
absl::StatusOr<CompressedCiphertext> BatchedLweCompress(
    const CompressionKey& key, std::span<const LweCiphertext> cts,
    const mpz_class& gamma, NoiseRegime regime = NoiseRegime::kStandard);
// Same ciphertext as BatchedLweCompress, using additions only.
absl::StatusOr<CompressedCiphertext> FastBatchedLweCompress(
    const ExpandedCompressionKey& eck, std::span<const LweCiphertext> cts,
    const mpz_class& gamma, NoiseRegime regime = NoiseRegime::kStandard);
absl::StatusOr<CompressedCiphertext> FastBatchedLweCompress(
    const CompressionKey& key, std::span<const LweCiphertext> cts,
    const mpz_class& gamma, NoiseRegime regime = NoiseRegime::kStandard);

// Slot j: floor(mu / gamma^j) mod gamma, then mod q, then round(/ delta).
absl::StatusOr<std::vector<uint64_t>> ModifiedBatchedLweDecrypt(
    const PaillierSecretKey& sk, const LweParams& params,
    const CompressedCiphertext& cc);
// Slot values before rounding, each reduced mod q.
absl::StatusOr<std::vector<uint64_t>> BatchedCompressedPhases(
    const PaillierSecretKey& sk, const LweParams& params,
    const CompressedCiphertext& cc);

// Phases of the slots of a batched plaintext sum_j gamma^j v_j.
std::vector<uint64_t> BatchedPhasesFromPlaintext(const LweParams& params,
                                                 mpz_class mu,
                                                 const mpz_class& gamma,
                                                 size_t batch_size);

// k (x) ct computed as a double-and-add chain of Paillier additions.
PaillierCiphertext ScaleByAdditions(const PaillierPublicKey& pk,
                                    const mpz_class& k,
                                    const PaillierCiphertext& ct);

}  // namespace zippir

#endif  // ZIPPIR_COMPRESSOR_COMPRESSOR_H_
