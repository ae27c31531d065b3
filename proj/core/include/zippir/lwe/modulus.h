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

#ifndef ZIPPIR_LWE_MODULUS_H_
#define ZIPPIR_LWE_MODULUS_H_

#include <gmpxx.h>

#include <cstdint>

#include "absl/status/statusor.h"

namespace zippir {

using uint128 = unsigned __int128;

// Integer modulus q in [2, 2^64]. Residues live in [0, q) as 64-bit words;
// power-of-two moduli reduce by masking.
class Modulus {
 public:
  static absl::StatusOr<Modulus> Create(uint128 q);
  static Modulus PowerOfTwo(unsigned log2_q);

  uint128 value() const { return q_; }
  mpz_class ToMpz() const;
  bool is_power_of_two() const { return power_of_two_; }
  // ceil(log2 q): the bit width of one residue.
  unsigned bits() const { return bits_; }
  // Bytes per residue on the wire.
  unsigned bytes() const { return (bits_ + 7) / 8; }
  // q as an exclusive bound for Prng::UniformBelow (0 stands for 2^64).
  uint64_t sampling_bound() const { return static_cast<uint64_t>(q_); }

  uint64_t Reduce(uint128 x) const {
    if (power_of_two_) return static_cast<uint64_t>(x) & mask_;
    return static_cast<uint64_t>(x % q_);
  }
  // Reduces a signed value into [0, q).
  uint64_t ReduceSigned(__int128 x) const;
  uint64_t Add(uint64_t a, uint64_t b) const {
    return Reduce(static_cast<uint128>(a) + b);
  }
  uint64_t Sub(uint64_t a, uint64_t b) const {
    return Reduce(static_cast<uint128>(a) + (q_ - b));
  }
  uint64_t Neg(uint64_t a) const { return Reduce(q_ - a); }
  uint64_t Mul(uint64_t a, uint64_t b) const {
    return Reduce(static_cast<uint128>(a) * b);
  }

  bool operator==(const Modulus& other) const { return q_ == other.q_; }

 private:
  explicit Modulus(uint128 q);

  uint128 q_;
  bool power_of_two_;
  uint64_t mask_;
  unsigned bits_;
};

// round(num / den) with ties away from zero, for num >= 0 and den > 0.
uint128 RoundDiv(uint128 num, uint128 den);

}  // namespace zippir

#endif  // ZIPPIR_LWE_MODULUS_H_
