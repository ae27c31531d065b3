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

#ifndef ZIPPIR_SERVICE_DATABASE_FILE_H_
#define ZIPPIR_SERVICE_DATABASE_FILE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "zippir/protocol/server.h"

namespace zippir {

inline constexpr char kDatabaseMagic[4] = {'Z', 'P', 'D', 'B'};
inline constexpr uint32_t kDatabaseFileVersion = 1;
// magic, version, d0, d1, p, record_bytes.
inline constexpr size_t kDatabaseHeaderBytes = 4 + 4 + 8 + 8 + 4 + 4;

// On-disk database: a fixed little-endian header followed by the d0 * d1
// row-major symbols, one byte each.
struct DatabaseFile {
  size_t d0 = 0;
  size_t d1 = 0;
  uint64_t p = 0;
  // Bytes of raw record data carried by one row, d1 * log2(p) / 8.
  size_t record_bytes = 0;
  std::vector<uint8_t> symbols;

  absl::StatusOr<Database> ToDatabase() const;
};

// Bits per symbol; p must be a power of two in [2, 256].
absl::StatusOr<unsigned> SymbolBits(uint64_t p);

// Splits raw bytes into log2(p)-bit symbols, least significant bits first.
// The input must hold exactly d0 rows of record_bytes bytes, where each row
// of d1 symbols covers a whole number of bytes.
absl::StatusOr<DatabaseFile> Ingest(std::span<const uint8_t> data, size_t d0,
                                    size_t d1, uint64_t p);

// Wraps symbols that are already in Z_p. Fails on a shape mismatch or a
// symbol >= p.
absl::StatusOr<DatabaseFile> FromSymbols(std::vector<uint8_t> symbols,
                                         size_t d0, size_t d1, uint64_t p);

// Inverse of the per-row split done by Ingest.
absl::StatusOr<std::vector<uint8_t>> RecordFromRow(
    std::span<const uint64_t> row, uint64_t p);

std::vector<uint8_t> SerializeDatabaseFile(const DatabaseFile& file);
absl::StatusOr<DatabaseFile> ParseDatabaseFile(std::span<const uint8_t> bytes);

absl::Status WriteDatabaseFile(const std::string& path,
                               const DatabaseFile& file);
absl::StatusOr<DatabaseFile> ReadDatabaseFile(const std::string& path);

// Whole-file helpers. WriteFileAtomic writes a sibling temporary file, syncs
// it and renames it over `path`.
absl::StatusOr<std::vector<uint8_t>> ReadFileBytes(const std::string& path);
absl::Status WriteFileAtomic(const std::string& path,
                             std::span<const uint8_t> bytes);

}  // namespace zippir

#endif  // ZIPPIR_SERVICE_DATABASE_FILE_H_
