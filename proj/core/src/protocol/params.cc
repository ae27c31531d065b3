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

#include "zippir/protocol/params.h"

#include <sodium.h>

#include <cmath>
#include <cstring>
#include <utility>

#include "absl/strings/str_cat.h"
#include "zippir/common/bigint.h"
#include "zippir/common/errors.h"
#include "zippir/common/parallel.h"
#include "zippir/common/status_macros.h"
#include "zippir/common/wire.h"

namespace zippir {

ProtocolParams::ProtocolParams(ProtocolConfig config, LweParams lwe)
    : config_(std::move(config)), lwe_(std::move(lwe)) {}

std::vector<uint8_t> SerializeConfig(const ProtocolConfig& config) {
  WireWriter w;
  w.PutU8(kProtocolVersion);
  w.PutU64(config.n);
  w.PutU32(config.log2_q);
  w.PutU64(config.p);
  uint64_t sigma_bits;
  std::memcpy(&sigma_bits, &config.sigma, sizeof(sigma_bits));
  w.PutU64(sigma_bits);
  w.PutU8(static_cast<uint8_t>(config.key_dist));
  w.PutU64(config.paillier_bits);
  w.PutU64(config.d0);
  w.PutU64(config.d1);
  w.PutU8(static_cast<uint8_t>(config.regime));
  w.PutU32(config.delta_fail_log2);
  w.PutBytes(config.matrix_seed, /*payload=*/false);
  return w.Release();
}

absl::StatusOr<ProtocolConfig> DeserializeConfig(
    std::span<const uint8_t> bytes) {
  WireReader r(bytes);
  ProtocolConfig config;
  auto read = [&]() -> absl::Status {
    ZIPPIR_ASSIGN_OR_RETURN(uint8_t version, r.GetU8());
    if (version != kProtocolVersion) {
      return absl::InvalidArgumentError("unsupported protocol version");
    }
    ZIPPIR_ASSIGN_OR_RETURN(config.n, r.GetU64());
    ZIPPIR_ASSIGN_OR_RETURN(config.log2_q, r.GetU32());
    ZIPPIR_ASSIGN_OR_RETURN(config.p, r.GetU64());
    ZIPPIR_ASSIGN_OR_RETURN(uint64_t sigma_bits, r.GetU64());
    std::memcpy(&config.sigma, &sigma_bits, sizeof(sigma_bits));
    ZIPPIR_ASSIGN_OR_RETURN(uint8_t dist, r.GetU8());
    if (dist > static_cast<uint8_t>(KeyDistribution::kUniform)) {
      return absl::InvalidArgumentError("unknown key distribution");
    }
    config.key_dist = static_cast<KeyDistribution>(dist);
    ZIPPIR_ASSIGN_OR_RETURN(config.paillier_bits, r.GetU64());
    ZIPPIR_ASSIGN_OR_RETURN(config.d0, r.GetU64());
    ZIPPIR_ASSIGN_OR_RETURN(config.d1, r.GetU64());
    ZIPPIR_ASSIGN_OR_RETURN(uint8_t regime, r.GetU8());
    if (regime > static_cast<uint8_t>(NoiseRegime::kQuarterDelta)) {
      return absl::InvalidArgumentError("unknown noise regime");
    }
    config.regime = static_cast<NoiseRegime>(regime);
    ZIPPIR_ASSIGN_OR_RETURN(config.delta_fail_log2, r.GetU32());
    ZIPPIR_ASSIGN_OR_RETURN(auto seed, r.GetBytes(kSeedBytes));
    std::copy(seed.begin(), seed.end(), config.matrix_seed.begin());
    if (!r.done()) return absl::InvalidArgumentError("trailing bytes");
    return absl::OkStatus();
  };
  absl::Status status = read();
  if (!status.ok()) return ProtocolError(status.message());
  return config;
}

absl::StatusOr<ProtocolParams> ProtocolParams::Create(
    const ProtocolConfig& config) {
  if (config.log2_q < 2 || config.log2_q > 64) {
    return InputError("log2 q must be in [2, 64]");
  }
  if (config.p > 256) {
    return InputError("record symbols are bytes, so p must be at most 256");
  }
  if (config.d0 == 0 || config.d1 == 0) {
    return InputError("database dimensions must be positive");
  }
  if (config.paillier_bits < 8 || config.paillier_bits % 2 != 0) {
    return InputError("Paillier modulus size must be even and at least 8");
  }
  ZIPPIR_ASSIGN_OR_RETURN(
      LweParams lwe,
      LweParams::Create(config.n, Modulus::PowerOfTwo(config.log2_q), config.p,
                        config.sigma, config.key_dist));
  ProtocolParams params(config, std::move(lwe));
  const LweParams& l = params.lwe_;

  const mpz_class m_min = Pow2(config.paillier_bits - 1);
  const mpz_class bound = CompressionBound(l);
  if (m_min <= bound) {
    return ModulusTooSmallError(absl::StrCat(
        "a ", config.paillier_bits, "-bit Paillier modulus cannot hold q + n*q",
        l.binary_key() ? "" : "^2"));
  }

  const double q = std::ldexp(1.0, static_cast<int>(config.log2_q));
  const double p = static_cast<double>(config.p);
  const double rhs =
      2 * p * config.sigma *
      std::sqrt(2.0 * static_cast<double>(config.d0) *
                (std::log(2.0) * (1.0 + config.delta_fail_log2)));
  if (!(q / p > rhs)) {
    return InputError(absl::StrCat("q/p = ", q / p,
                                   " does not exceed 2 p sigma sqrt(2 d0 "
                                   "ln(2/delta)) = ",
                                   rhs));
  }

  params.gamma_ = SelectScale(l, config.regime);
  params.batch_capacity_ =
      BatchCapacity(m_min, params.gamma_, l, config.regime);
  if (params.batch_capacity_ == 0) {
    return ModulusTooSmallError("batch scale does not fit the modulus");
  }
  params.hint_entries_ =
      (config.d1 + params.batch_capacity_ - 1) / params.batch_capacity_;

  const std::vector<uint8_t> encoded = SerializeConfig(config);
  crypto_generichash(params.hash_.data(), params.hash_.size(), encoded.data(),
                     encoded.size(), nullptr, 0);
  return params;
}

size_t ProtocolParams::formula_batch_capacity() const {
  double v = (static_cast<double>(config_.paillier_bits) -
              std::log2(static_cast<double>(n()))) /
             config_.log2_q;
  return static_cast<size_t>(std::ceil(v));
}

size_t ProtocolParams::ColumnsInEntry(size_t c) const {
  size_t begin = c * batch_capacity_;
  if (begin >= d1()) return 0;
  return std::min(batch_capacity_, d1() - begin);
}

size_t ProtocolParams::HintRequestBits() const {
  return 2 * paillier_bits() + kSecurityBits;
}

size_t ProtocolParams::QueryBits() const {
  return n() * paillier_bits() + d0() * config_.log2_q;
}

size_t ProtocolParams::SeparateResponseBits() const {
  return 3 * hint_entries_ * paillier_bits();
}

size_t ProtocolParams::CombinedResponseBits() const {
  return 2 * hint_entries_ * paillier_bits();
}

size_t ProtocolParams::ClientStorageResponseBits() const {
  return hint_entries_ * paillier_bits();
}

size_t ProtocolParams::HintBits() const {
  return 2 * hint_entries_ * paillier_bits();
}

std::vector<std::vector<uint64_t>> ProtocolParams::ExpandMatrix() const {
  std::vector<std::vector<uint64_t>> a(d0(), std::vector<uint64_t>(n()));
  const uint64_t bound = lwe_.q().sampling_bound();
  ParallelFor(d0(), [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      Prng rng(config_.matrix_seed, PrgDomain::kLweMatrix, i);
      for (auto& x : a[i]) x = rng.UniformBelow(bound);
    }
  });
  return a;
}

uint64_t HintSampleIndex(uint64_t query_index, size_t i) {
  return (query_index << 32) | static_cast<uint64_t>(i);
}

}  // namespace zippir
