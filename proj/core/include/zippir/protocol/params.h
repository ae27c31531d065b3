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

#ifndef ZIPPIR_PROTOCOL_PARAMS_H_
#define ZIPPIR_PROTOCOL_PARAMS_H_

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "zippir/common/prng.h"
#include "zippir/compressor/compressor.h"
#include "zippir/lwe/lwe.h"

namespace zippir {

inline constexpr uint8_t kProtocolVersion = 1;
inline constexpr size_t kSecurityBits = 128;

using ParamsHash = std::array<uint8_t, 32>;

struct ProtocolConfig {
  size_t n = 1400;
  unsigned log2_q = 32;
  uint64_t p = 256;
  double sigma = 6.4;
  KeyDistribution key_dist = KeyDistribution::kBinary;
  size_t paillier_bits = 3072;
  size_t d0 = 256;
  size_t d1 = 256;
  NoiseRegime regime = NoiseRegime::kStandard;
  // Target failure probability 2^-delta_fail_log2.
  unsigned delta_fail_log2 = 40;
  // Public seed of the LWE matrix A, shared by every client.
  Seed matrix_seed{};
};

// Canonical byte encoding of a configuration. The parameter hash is the
// BLAKE2b-256 digest of these bytes.
std::vector<uint8_t> SerializeConfig(const ProtocolConfig& config);
absl::StatusOr<ProtocolConfig> DeserializeConfig(
    std::span<const uint8_t> bytes);

class ProtocolParams {
 public:
  // Validates the shape, the compression modulus inequality for every
  // Paillier modulus of `paillier_bits` bits, and the correctness inequality
  // q/p > 2 p sigma sqrt(2 d0 ln(2/delta_fail)).
  static absl::StatusOr<ProtocolParams> Create(const ProtocolConfig& config);

  const ProtocolConfig& config() const { return config_; }
  const LweParams& lwe() const { return lwe_; }
  size_t n() const { return lwe_.n(); }
  size_t d0() const { return config_.d0; }
  size_t d1() const { return config_.d1; }
  uint64_t p() const { return lwe_.p(); }
  size_t paillier_bits() const { return config_.paillier_bits; }
  NoiseRegime regime() const { return config_.regime; }
  const Seed& matrix_seed() const { return config_.matrix_seed; }

  // Batch scale for hint entries.
  const mpz_class& gamma() const { return gamma_; }
  // Database columns per hint entry: the exact batch capacity for the
  // smallest modulus of `paillier_bits` bits.
  size_t batch_capacity() const { return batch_capacity_; }
  // ceil((log2 m - log2 n) / log2 q), reported for comparison only.
  size_t formula_batch_capacity() const;
  // Hint entries, ceil(d1 / batch_capacity).
  size_t hint_entries() const { return hint_entries_; }
  // Columns carried by hint entry c.
  size_t ColumnsInEntry(size_t c) const;

  // Payload sizes in bits.
  size_t HintRequestBits() const;
  size_t QueryBits() const;
  size_t SeparateResponseBits() const;
  size_t CombinedResponseBits() const;
  size_t ClientStorageResponseBits() const;
  size_t HintBits() const;

  const ParamsHash& hash() const { return hash_; }

  // Matrix A row by row, d0 rows of n entries.
  std::vector<std::vector<uint64_t>> ExpandMatrix() const;

 private:
  ProtocolParams(ProtocolConfig config, LweParams lwe);

  ProtocolConfig config_;
  LweParams lwe_;
  mpz_class gamma_;
  size_t batch_capacity_ = 0;
  size_t hint_entries_ = 0;
  ParamsHash hash_{};
};

// PRG stream index of the compression-key sample i for query index t.
uint64_t HintSampleIndex(uint64_t query_index, size_t i);

}  // namespace zippir

#endif  // ZIPPIR_PROTOCOL_PARAMS_H_
