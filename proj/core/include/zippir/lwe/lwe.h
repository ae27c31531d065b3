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

#ifndef ZIPPIR_LWE_LWE_H_
#define ZIPPIR_LWE_LWE_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "zippir/common/prng.h"
#include "zippir/common/wire.h"
#include "zippir/lwe/modulus.h"

namespace zippir {

enum class KeyDistribution : uint8_t { kBinary = 0, kUniform = 1 };

class LweParams {
 public:
  // Requires n >= 1, 2 <= p < q and round(q/p) >= 2.
  static absl::StatusOr<LweParams> Create(size_t n, Modulus q, uint64_t p,
                                          double sigma,
                                          KeyDistribution key_dist);

  size_t n() const { return n_; }
  const Modulus& q() const { return q_; }
  uint64_t p() const { return p_; }
  // round(q / p).
  uint64_t delta() const { return delta_; }
  double sigma() const { return sigma_; }
  KeyDistribution key_dist() const { return key_dist_; }
  bool binary_key() const { return key_dist_ == KeyDistribution::kBinary; }

 private:
  LweParams(size_t n, Modulus q, uint64_t p, double sigma,
            KeyDistribution key_dist);

  size_t n_;
  Modulus q_;
  uint64_t p_;
  uint64_t delta_;
  double sigma_;
  KeyDistribution key_dist_;
};

struct LweSecretKey {
  std::vector<uint64_t> s;
};

struct LweCiphertext {
  std::vector<uint64_t> a;
  uint64_t b = 0;

  bool operator==(const LweCiphertext& other) const {
    return a == other.a && b == other.b;
  }
};

// (seed, b): the mask a is regenerated from the seed.
struct SeededLweCiphertext {
  Seed seed;
  uint64_t b = 0;
};

// Ciphertext together with the noise that went into it.
struct InstrumentedLweCiphertext {
  LweCiphertext ct;
  int64_t noise = 0;
};

LweSecretKey LweKeygen(const LweParams& params, Prng& rng);

// b = <a, s> + delta * mu + e mod q with a uniform and e discrete Gaussian.
absl::StatusOr<LweCiphertext> LweEncrypt(const LweParams& params,
                                         const LweSecretKey& sk, uint64_t mu,
                                         Prng& rng);
absl::StatusOr<InstrumentedLweCiphertext> LweEncryptInstrumented(
    const LweParams& params, const LweSecretKey& sk, uint64_t mu, Prng& rng);
// Fully specified encryption: caller provides a and e.
absl::StatusOr<LweCiphertext> LweEncryptWith(const LweParams& params,
                                             const LweSecretKey& sk,
                                             std::vector<uint64_t> a,
                                             uint64_t mu, int64_t e);

absl::StatusOr<SeededLweCiphertext> LweEncryptSeeded(const LweParams& params,
                                                     const LweSecretKey& sk,
                                                     uint64_t mu, Prng& rng);
LweCiphertext ExpandSeeded(const LweParams& params,
                           const SeededLweCiphertext& sct);
// The mask that ExpandSeeded derives from `seed`.
std::vector<uint64_t> ExpandMask(const LweParams& params, const Seed& seed);

// (b - <a, s>) mod q.
uint64_t LwePhase(const LweParams& params, const LweSecretKey& sk,
                  const LweCiphertext& ct);
// round(phase / delta) mod p, ties away from zero.
uint64_t LweDecrypt(const LweParams& params, const LweSecretKey& sk,
                    const LweCiphertext& ct);
// round(value / delta) mod p for a phase value in [0, q).
uint64_t DecodePhase(const LweParams& params, uint64_t phase);

// Componentwise x -> round(x * r / q) mod r. Requires equal n and r <= q.
absl::StatusOr<LweCiphertext> Rescale(const LweParams& from,
                                      const LweParams& to,
                                      const LweCiphertext& ct);

// n and q as 64-bit words (q = 2^64 written as 0), then a[0..n-1] and b.
void SerializeLweCiphertext(const LweParams& params, const LweCiphertext& ct,
                            WireWriter& out);
absl::StatusOr<LweCiphertext> DeserializeLweCiphertext(const LweParams& params,
                                                       WireReader& in);

// Wire sizes in bytes: full (n + 1) * ceil(log2 q) / 8 and seeded
// lambda / 8 + ceil(log2 q) / 8.
size_t LweCiphertextBytes(const LweParams& params);
size_t SeededLweCiphertextBytes(const LweParams& params);

}  // namespace zippir

#endif  // ZIPPIR_LWE_LWE_H_
