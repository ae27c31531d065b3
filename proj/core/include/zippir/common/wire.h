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

#ifndef ZIPPIR_COMMON_WIRE_H_
#define ZIPPIR_COMMON_WIRE_H_

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace zippir {

// Byte sink that separates protocol payload from framing overhead, so size
// accounting can be compared against information-theoretic formulas.
class WireWriter {
 public:
  void PutU8(uint8_t v);
  void PutU32(uint32_t v);
  void PutU64(uint64_t v);
  void PutBytes(std::span<const uint8_t> bytes, bool payload);

  // 32-bit little-endian byte count (overhead) followed by exactly `width`
  // little-endian magnitude bytes (payload).
  void PutBigInt(const mpz_class& x, size_t width);
  // Same encoding with the natural width of `x`.
  void PutBigInt(const mpz_class& x);

  // Element count (overhead), then each value as `width` little-endian bytes
  // (payload).
  void PutWordVector(std::span<const uint64_t> values, size_t width);
  // Element count (overhead), then the values packed LSB-first at `bits`
  // bits each into ceil(count * bits / 8) bytes (payload).
  void PutPackedWords(std::span<const uint64_t> values, unsigned bits);
  // Element count and width (overhead), then each value as `width`
  // little-endian bytes (payload).
  void PutBigIntVector(std::span<const mpz_class> values, size_t width);

  size_t payload_bytes() const { return payload_bytes_; }
  size_t overhead_bytes() const { return bytes_.size() - payload_bytes_; }
  size_t size() const { return bytes_.size(); }
  const std::vector<uint8_t>& bytes() const { return bytes_; }
  std::vector<uint8_t> Release() { return std::move(bytes_); }

 private:
  std::vector<uint8_t> bytes_;
  size_t payload_bytes_ = 0;
};

class WireReader {
 public:
  explicit WireReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  absl::StatusOr<uint8_t> GetU8();
  absl::StatusOr<uint32_t> GetU32();
  absl::StatusOr<uint64_t> GetU64();
  absl::StatusOr<std::span<const uint8_t>> GetBytes(size_t n);
  absl::StatusOr<mpz_class> GetBigInt();
  absl::StatusOr<std::vector<uint64_t>> GetWordVector(size_t width);
  absl::StatusOr<std::vector<uint64_t>> GetPackedWords(unsigned bits);
  absl::StatusOr<std::vector<mpz_class>> GetBigIntVector();

  size_t remaining() const { return bytes_.size() - pos_; }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

}  // namespace zippir

#endif  // ZIPPIR_COMMON_WIRE_H_
