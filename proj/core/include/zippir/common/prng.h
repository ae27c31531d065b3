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

#ifndef ZIPPIR_COMMON_PRNG_H_
#define ZIPPIR_COMMON_PRNG_H_

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace zippir {

// Seeds carry lambda = 128 bits.
inline constexpr size_t kSeedBytes = 16;
using Seed = std::array<uint8_t, kSeedBytes>;

// One-byte domain tags. Streams with different tags never share a key.
enum class PrgDomain : uint8_t {
  kGeneric = 0x01,
  kPaillierSample = 0x02,
  kLweMatrix = 0x03,
  kLweSeeded = 0x04,
  kRlweSeeded = 0x05,
  kNoise = 0x06,
};

// Deterministic byte stream: ChaCha20 keyed by BLAKE2b-256(tag || seed),
// nonce = 64-bit little-endian stream index. Client and server instances
// built from the same (seed, domain, index) produce identical output.
class Prng {
 public:
  Prng(const Seed& seed, PrgDomain domain, uint64_t stream_index = 0);

  // Seeds from the OS entropy source.
  static Prng FromEntropy();
  static Seed RandomSeed();
  // Convenience for tests: the seed is the little-endian value padded with
  // zeros.
  static Seed SeedFromInt(uint64_t value);

  void Fill(std::span<uint8_t> out);
  uint64_t NextU64();
  Seed NextSeed();

  // Uniform in [0, bound) by rejection. bound == 0 stands for 2^64.
  uint64_t UniformBelow(uint64_t bound);
  // Uniform in [0, bound) by rejection on bit_length(bound)-bit chunks.
  mpz_class UniformBelow(const mpz_class& bound);
  // Uniform integer with exactly `bits` random bits (top bit unconstrained).
  mpz_class RandomBits(size_t bits);

 private:
  void Refill();

  std::array<uint8_t, 32> key_;
  std::array<uint8_t, 8> nonce_;
  uint64_t block_counter_ = 0;
  std::array<uint8_t, 512> buffer_;
  size_t buffer_pos_;
};

}  // namespace zippir

#endif  // ZIPPIR_COMMON_PRNG_H_
