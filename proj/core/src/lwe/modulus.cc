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

#include "zippir/lwe/modulus.h"

#include "zippir/common/bigint.h"
#include "zippir/common/errors.h"

namespace zippir {
namespace {

constexpr uint128 kTwoTo64 = static_cast<uint128>(1) << 64;

}  // namespace

Modulus::Modulus(uint128 q) : q_(q) {
  power_of_two_ = (q & (q - 1)) == 0;
  mask_ = static_cast<uint64_t>(q - 1);
  bits_ = 0;
  while ((static_cast<uint128>(1) << bits_) < q) ++bits_;
}

absl::StatusOr<Modulus> Modulus::Create(uint128 q) {
  if (q < 2 || q > kTwoTo64) return InputError("modulus must be in [2, 2^64]");
  return Modulus(q);
}

Modulus Modulus::PowerOfTwo(unsigned log2_q) {
  return Modulus(static_cast<uint128>(1) << log2_q);
}

mpz_class Modulus::ToMpz() const { return FromU128(q_); }

uint64_t Modulus::ReduceSigned(__int128 x) const {
  __int128 q = static_cast<__int128>(q_);
  __int128 r = x % q;
  if (r < 0) r += q;
  return static_cast<uint64_t>(r);
}

uint128 RoundDiv(uint128 num, uint128 den) {
  uint128 quotient = num / den;
  uint128 remainder = num % den;
  // remainder >= den / 2, written without overflow.
  if (remainder >= den - remainder) ++quotient;
  return quotient;
}

}  // namespace zippir
