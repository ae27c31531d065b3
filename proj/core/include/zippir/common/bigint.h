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

#ifndef ZIPPIR_COMMON_BIGINT_H_
#define ZIPPIR_COMMON_BIGINT_H_

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace zippir {

// Number of significant bits; 0 for zero.
size_t BitLength(const mpz_class& x);

// Bytes needed for values below `modulus`, i.e. ceil(bit_length(modulus-1)/8).
size_t ByteWidth(const mpz_class& modulus);

// Little-endian magnitude. With width > 0 the output is zero-padded to exactly
// `width` bytes (x must fit).
std::vector<uint8_t> ToLittleEndian(const mpz_class& x, size_t width = 0);
mpz_class FromLittleEndian(std::span<const uint8_t> bytes);

mpz_class Pow2(unsigned long k);
mpz_class FromU64(uint64_t v);
mpz_class FromU128(unsigned __int128 v);
// Low 64 bits of a non-negative value.
uint64_t LowU64(const mpz_class& x);

}  // namespace zippir

#endif  // ZIPPIR_COMMON_BIGINT_H_
