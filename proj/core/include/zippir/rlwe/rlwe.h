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

#ifndef ZIPPIR_RLWE_RLWE_H_
#define ZIPPIR_RLWE_RLWE_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "zippir/additive_he/paillier.h"
#include "zippir/common/prng.h"
#include "zippir/compressor/compressor.h"
#include "zippir/lwe/lwe.h"

namespace zippir {

// Parameters over R_q = Z_q[X]/(X^N + 1).
class RlweParams {
 public:
  // Requires N a power of two and the same plaintext constraints as LWE.
  static absl::StatusOr<RlweParams> Create(
      size_t ring_degree, Modulus q, uint64_t p, double sigma,
      KeyDistribution key_dist = KeyDistribution::kUniform);

  size_t ring_degree() const { return lwe_.n(); }
  const Modulus& q() const { return lwe_.q(); }
  uint64_t p() const { return lwe_.p(); }
  uint64_t delta() const { return lwe_.delta(); }
  // The LWE view of a single extracted coefficient, with n = N.
  const LweParams& lwe() const { return lwe_; }

 private:
  explicit RlweParams(LweParams lwe) : lwe_(std::move(lwe)) {}

  LweParams lwe_;
};

// Coefficient j is the coefficient of X^j.
using Polynomial = std::vector<uint64_t>;

struct RlweSecretKey {
  Polynomial s;
};

struct RlweCiphertext {
  Polynomial a;
  Polynomial b;

  bool operator==(const RlweCiphertext& other) const {
    return a == other.a && b == other.b;
  }
};

// Schoolbook negacyclic product modulo (q, X^N + 1).
Polynomial NegacyclicMultiply(const Modulus& q, const Polynomial& x,
                              const Polynomial& y);

RlweSecretKey RlweKeygen(const RlweParams& params, Prng& rng);

// B = A*S + delta*mu + E.
absl::StatusOr<RlweCiphertext> RlweEncrypt(const RlweParams& params,
                                           const RlweSecretKey& sk,
                                           const Polynomial& mu, Prng& rng);
absl::StatusOr<RlweCiphertext> RlweEncryptWith(const RlweParams& params,
                                               const RlweSecretKey& sk,
                                               Polynomial a,
                                               const Polynomial& mu,
                                               const std::vector<int64_t>& e);

Polynomial RlwePhase(const RlweParams& params, const RlweSecretKey& sk,
                     const RlweCiphertext& ct);
Polynomial RlweDecrypt(const RlweParams& params, const RlweSecretKey& sk,
                       const RlweCiphertext& ct);

// An LWE ciphertext under the coefficient vector of S whose phase equals
// coefficient k of the RLWE phase.
absl::StatusOr<LweCiphertext> ExtractCoefficient(const RlweParams& params,
                                                 const RlweCiphertext& ct,
                                                 size_t k);

// ck[i] = Enc(S[i]).
absl::StatusOr<CompressionKey> MakeRlweCompressionKey(
    const PaillierSecretKey& paillier_sk, const RlweParams& params,
    const RlweSecretKey& sk, Prng& rng);
absl::StatusOr<CompressionKey> MakeRlweCompressionKey(
    const PaillierPublicKey& pk, const RlweParams& params,
    const RlweSecretKey& sk, Prng& rng);

// Enc(B[k]) + sum_{i<=k} (q - A[k-i]) ck[i] + sum_{i>k} A[N+k-i] ck[i].
absl::StatusOr<CompressedCiphertext> RlweCompressCoefficient(
    const CompressionKey& key, const RlweCiphertext& ct, size_t k);

absl::StatusOr<uint64_t> ModifiedRlweDecrypt(const PaillierSecretKey& sk,
                                             const RlweParams& params,
                                             const CompressedCiphertext& cc);

}  // namespace zippir

#endif  // ZIPPIR_RLWE_RLWE_H_
