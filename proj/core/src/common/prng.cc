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

#include "zippir/common/prng.h"

#include <sodium.h>

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "zippir/common/bigint.h"

namespace zippir {
namespace {

void EnsureSodium() {
  static const bool initialized = [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium init failed");
    return true;
  }();
  (void)initialized;
}

}  // namespace

Prng::Prng(const Seed& seed, PrgDomain domain, uint64_t stream_index)
    : buffer_pos_(buffer_.size()) {
  EnsureSodium();
  uint8_t material[1 + kSeedBytes];
  material[0] = static_cast<uint8_t>(domain);
  std::memcpy(material + 1, seed.data(), kSeedBytes);
  crypto_generichash(key_.data(), key_.size(), material, sizeof(material),
                     nullptr, 0);
  for (int i = 0; i < 8; ++i) {
    nonce_[i] = static_cast<uint8_t>(stream_index >> (8 * i));
  }
}

Prng Prng::FromEntropy() { return Prng(RandomSeed(), PrgDomain::kGeneric); }

Seed Prng::RandomSeed() {
  EnsureSodium();
  Seed seed;
  randombytes_buf(seed.data(), seed.size());
  return seed;
}

Seed Prng::SeedFromInt(uint64_t value) {
  Seed seed{};
  for (int i = 0; i < 8; ++i) seed[i] = static_cast<uint8_t>(value >> (8 * i));
  return seed;
}

void Prng::Refill() {
  static const std::array<uint8_t, 512> kZeros{};
  crypto_stream_chacha20_xor_ic(buffer_.data(), kZeros.data(), buffer_.size(),
                                nonce_.data(), block_counter_, key_.data());
  block_counter_ += buffer_.size() / 64;
  buffer_pos_ = 0;
}

void Prng::Fill(std::span<uint8_t> out) {
  size_t done = 0;
  while (done < out.size()) {
    if (buffer_pos_ == buffer_.size()) Refill();
    size_t take = std::min(out.size() - done, buffer_.size() - buffer_pos_);
    std::memcpy(out.data() + done, buffer_.data() + buffer_pos_, take);
    buffer_pos_ += take;
    done += take;
  }
}

uint64_t Prng::NextU64() {
  uint8_t bytes[8];
  Fill(bytes);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(bytes[i]) << (8 * i);
  return v;
}

Seed Prng::NextSeed() {
  Seed seed;
  Fill(seed);
  return seed;
}

uint64_t Prng::UniformBelow(uint64_t bound) {
  if (bound == 0) return NextU64();
  if (bound == 1) return 0;
  int bits = 64 - __builtin_clzll(bound - 1);
  uint64_t mask = bits == 64 ? ~uint64_t{0} : ((uint64_t{1} << bits) - 1);
  while (true) {
    uint64_t v = NextU64() & mask;
    if (v < bound) return v;
  }
}

mpz_class Prng::RandomBits(size_t bits) {
  if (bits == 0) return 0;
  std::vector<uint8_t> bytes((bits + 7) / 8);
  Fill(bytes);
  if (bits % 8 != 0)
    bytes.back() &= static_cast<uint8_t>((1u << (bits % 8)) - 1);
  return FromLittleEndian(bytes);
}

mpz_class Prng::UniformBelow(const mpz_class& bound) {
  if (bound <= 1) return 0;
  mpz_class top = bound - 1;
  size_t bits = BitLength(top);
  while (true) {
    mpz_class v = RandomBits(bits);
    if (v < bound) return v;
  }
}

}  // namespace zippir
