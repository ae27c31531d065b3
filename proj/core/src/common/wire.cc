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

#include "zippir/common/wire.h"

#include <limits>

#include "absl/status/status.h"
#include "zippir/common/bigint.h"

namespace zippir {
namespace {

// Upper bound on a single length-prefixed field; guards against hostile
// length prefixes before any allocation happens.
constexpr uint32_t kMaxFieldBytes = 1u << 30;

void AppendLittleEndian(std::vector<uint8_t>& out, uint64_t v, size_t width) {
  for (size_t i = 0; i < width; ++i) {
    out.push_back(static_cast<uint8_t>(i < 8 ? v >> (8 * i) : 0));
  }
}

}  // namespace

void WireWriter::PutU8(uint8_t v) { bytes_.push_back(v); }

void WireWriter::PutU32(uint32_t v) { AppendLittleEndian(bytes_, v, 4); }

void WireWriter::PutU64(uint64_t v) { AppendLittleEndian(bytes_, v, 8); }

void WireWriter::PutBytes(std::span<const uint8_t> bytes, bool payload) {
  bytes_.insert(bytes_.end(), bytes.begin(), bytes.end());
  if (payload) payload_bytes_ += bytes.size();
}

void WireWriter::PutBigInt(const mpz_class& x, size_t width) {
  std::vector<uint8_t> magnitude = ToLittleEndian(x, width);
  PutU32(static_cast<uint32_t>(magnitude.size()));
  PutBytes(magnitude, /*payload=*/true);
}

void WireWriter::PutBigInt(const mpz_class& x) { PutBigInt(x, 0); }

void WireWriter::PutWordVector(std::span<const uint64_t> values, size_t width) {
  PutU32(static_cast<uint32_t>(values.size()));
  bytes_.reserve(bytes_.size() + values.size() * width);
  for (uint64_t v : values) AppendLittleEndian(bytes_, v, width);
  payload_bytes_ += values.size() * width;
}

void WireWriter::PutPackedWords(std::span<const uint64_t> values,
                                unsigned bits) {
  PutU32(static_cast<uint32_t>(values.size()));
  const size_t total = (values.size() * bits + 7) / 8;
  const size_t start = bytes_.size();
  bytes_.resize(start + total, 0);
  size_t bit = 0;
  for (uint64_t v : values) {
    for (unsigned b = 0; b < bits; ++b, ++bit) {
      if ((v >> b) & 1) bytes_[start + bit / 8] |= uint8_t{1} << (bit % 8);
    }
  }
  payload_bytes_ += total;
}

void WireWriter::PutBigIntVector(std::span<const mpz_class> values,
                                 size_t width) {
  PutU32(static_cast<uint32_t>(values.size()));
  PutU32(static_cast<uint32_t>(width));
  bytes_.reserve(bytes_.size() + values.size() * width);
  for (const mpz_class& v : values) {
    std::vector<uint8_t> magnitude = ToLittleEndian(v, width);
    PutBytes(magnitude, /*payload=*/true);
  }
}

absl::StatusOr<std::span<const uint8_t>> WireReader::GetBytes(size_t n) {
  if (n > remaining()) {
    return absl::InvalidArgumentError("truncated message");
  }
  std::span<const uint8_t> out = bytes_.subspan(pos_, n);
  pos_ += n;
  return out;
}

absl::StatusOr<uint8_t> WireReader::GetU8() {
  auto bytes = GetBytes(1);
  if (!bytes.ok()) return bytes.status();
  return (*bytes)[0];
}

absl::StatusOr<uint32_t> WireReader::GetU32() {
  auto bytes = GetBytes(4);
  if (!bytes.ok()) return bytes.status();
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<uint32_t>((*bytes)[i]) << (8 * i);
  return v;
}

absl::StatusOr<uint64_t> WireReader::GetU64() {
  auto bytes = GetBytes(8);
  if (!bytes.ok()) return bytes.status();
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<uint64_t>((*bytes)[i]) << (8 * i);
  return v;
}

absl::StatusOr<mpz_class> WireReader::GetBigInt() {
  auto length = GetU32();
  if (!length.ok()) return length.status();
  if (*length > kMaxFieldBytes) {
    return absl::InvalidArgumentError("big-integer field too long");
  }
  auto bytes = GetBytes(*length);
  if (!bytes.ok()) return bytes.status();
  return FromLittleEndian(*bytes);
}

absl::StatusOr<std::vector<uint64_t>> WireReader::GetWordVector(size_t width) {
  if (width == 0 || width > 8) {
    return absl::InvalidArgumentError("word width must be in [1, 8]");
  }
  auto count = GetU32();
  if (!count.ok()) return count.status();
  if (static_cast<uint64_t>(*count) * width > remaining()) {
    return absl::InvalidArgumentError("truncated word vector");
  }
  std::vector<uint64_t> values(*count);
  for (uint32_t i = 0; i < *count; ++i) {
    uint64_t v = 0;
    for (size_t b = 0; b < width; ++b) {
      v |= static_cast<uint64_t>(bytes_[pos_ + b]) << (8 * b);
    }
    values[i] = v;
    pos_ += width;
  }
  return values;
}

absl::StatusOr<std::vector<uint64_t>> WireReader::GetPackedWords(
    unsigned bits) {
  if (bits == 0 || bits > 64) {
    return absl::InvalidArgumentError("packed width must be in [1, 64]");
  }
  auto count = GetU32();
  if (!count.ok()) return count.status();
  const uint64_t total = (static_cast<uint64_t>(*count) * bits + 7) / 8;
  if (total > remaining()) {
    return absl::InvalidArgumentError("truncated packed vector");
  }
  std::vector<uint64_t> values(*count, 0);
  size_t bit = 0;
  for (auto& v : values) {
    for (unsigned b = 0; b < bits; ++b, ++bit) {
      if ((bytes_[pos_ + bit / 8] >> (bit % 8)) & 1) v |= uint64_t{1} << b;
    }
  }
  pos_ += total;
  return values;
}

absl::StatusOr<std::vector<mpz_class>> WireReader::GetBigIntVector() {
  auto count = GetU32();
  if (!count.ok()) return count.status();
  auto width = GetU32();
  if (!width.ok()) return width.status();
  if (*width > kMaxFieldBytes ||
      static_cast<uint64_t>(*count) * *width > remaining()) {
    return absl::InvalidArgumentError("truncated big-integer vector");
  }
  std::vector<mpz_class> values(*count);
  for (auto& v : values) {
    v = FromLittleEndian(bytes_.subspan(pos_, *width));
    pos_ += *width;
  }
  return values;
}

}  // namespace zippir
