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

#include "zippir/common/bigint.h"

#include <stdexcept>

namespace zippir {

size_t BitLength(const mpz_class& x) {
  if (x == 0) return 0;
  return mpz_sizeinbase(x.get_mpz_t(), 2);
}

size_t ByteWidth(const mpz_class& modulus) {
  mpz_class top = modulus - 1;
  size_t bits = BitLength(top);
  return bits == 0 ? 1 : (bits + 7) / 8;
}

std::vector<uint8_t> ToLittleEndian(const mpz_class& x, size_t width) {
  size_t natural = (BitLength(x) + 7) / 8;
  if (width != 0 && natural > width) {
    throw std::invalid_argument("value does not fit in the requested width");
  }
  std::vector<uint8_t> out(width != 0 ? width : natural);
  if (natural > 0) {
    size_t written = 0;
    mpz_export(out.data(), &written, -1, 1, 0, 0, x.get_mpz_t());
  }
  return out;
}

mpz_class FromLittleEndian(std::span<const uint8_t> bytes) {
  mpz_class x;
  if (!bytes.empty()) {
    mpz_import(x.get_mpz_t(), bytes.size(), -1, 1, 0, 0, bytes.data());
  }
  return x;
}

mpz_class Pow2(unsigned long k) {
  mpz_class x;
  mpz_ui_pow_ui(x.get_mpz_t(), 2, k);
  return x;
}

mpz_class FromU64(uint64_t v) {
  mpz_class x;
  mpz_import(x.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return x;
}

mpz_class FromU128(unsigned __int128 v) {
  uint64_t words[2] = {static_cast<uint64_t>(v),
                       static_cast<uint64_t>(v >> 64)};
  mpz_class x;
  mpz_import(x.get_mpz_t(), 2, -1, sizeof(uint64_t), 0, 0, words);
  return x;
}

uint64_t LowU64(const mpz_class& x) {
  if (x == 0) return 0;
  return static_cast<uint64_t>(mpz_getlimbn(x.get_mpz_t(), 0));
}

}  // namespace zippir
