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

#include "zippir/service/database_file.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>

#include "absl/strings/str_cat.h"
#include "zippir/common/errors.h"
#include "zippir/common/status_macros.h"
#include "zippir/common/wire.h"

namespace zippir {
namespace {

absl::Status CheckShape(size_t d0, size_t d1, uint64_t p) {
  if (d0 == 0 || d1 == 0) return InputError("database shape must be nonzero");
  return SymbolBits(p).status();
}

absl::Status IoError(const std::string& what, const std::string& path) {
  return StateError(absl::StrCat(what, " ", path, ": ", std::strerror(errno)));
}

}  // namespace

absl::StatusOr<Database> DatabaseFile::ToDatabase() const {
  return Database::Create(d0, d1, p, symbols);
}

absl::StatusOr<unsigned> SymbolBits(uint64_t p) {
  if (p < 2 || p > 256 || (p & (p - 1)) != 0) {
    return InputError(absl::StrCat("plaintext modulus ", p,
                                   " must be a power of two in [2, 256]"));
  }
  unsigned bits = 0;
  while ((uint64_t{1} << bits) < p) ++bits;
  return bits;
}

absl::StatusOr<DatabaseFile> Ingest(std::span<const uint8_t> data, size_t d0,
                                    size_t d1, uint64_t p) {
  ZIPPIR_RETURN_IF_ERROR(CheckShape(d0, d1, p));
  ZIPPIR_ASSIGN_OR_RETURN(unsigned bits, SymbolBits(p));
  if ((d1 * bits) % 8 != 0) {
    return InputError(absl::StrCat("a row of ", d1, " symbols of ", bits,
                                   " bits is not a whole number of bytes"));
  }
  const size_t record_bytes = d1 * bits / 8;
  if (data.size() != d0 * record_bytes) {
    return InputError(
        absl::StrCat("shape mismatch: ", d0, " x ", d1, " symbols mod ", p,
                     " need ", d0 * record_bytes, " bytes, got ", data.size()));
  }
  DatabaseFile file{d0, d1, p, record_bytes, {}};
  file.symbols.resize(d0 * d1);
  const unsigned per_byte = 8 / bits;
  const uint8_t mask = static_cast<uint8_t>(p - 1);
  for (size_t k = 0; k < file.symbols.size(); ++k) {
    const uint8_t byte = data[k / per_byte];
    file.symbols[k] = (byte >> ((k % per_byte) * bits)) & mask;
  }
  return file;
}

absl::StatusOr<DatabaseFile> FromSymbols(std::vector<uint8_t> symbols,
                                         size_t d0, size_t d1, uint64_t p) {
  ZIPPIR_RETURN_IF_ERROR(CheckShape(d0, d1, p));
  ZIPPIR_ASSIGN_OR_RETURN(unsigned bits, SymbolBits(p));
  if (symbols.size() != d0 * d1) {
    return InputError(absl::StrCat("shape mismatch: expected ", d0 * d1,
                                   " symbols, got ", symbols.size()));
  }
  for (size_t k = 0; k < symbols.size(); ++k) {
    if (symbols[k] >= p) {
      return InputError(absl::StrCat("symbol overflow at index ", k, ": ",
                                     symbols[k], " >= ", p));
    }
  }
  return DatabaseFile{d0, d1, p, d1 * bits / 8, std::move(symbols)};
}

absl::StatusOr<std::vector<uint8_t>> RecordFromRow(
    std::span<const uint64_t> row, uint64_t p) {
  ZIPPIR_ASSIGN_OR_RETURN(unsigned bits, SymbolBits(p));
  if ((row.size() * bits) % 8 != 0) {
    return InputError("row does not cover a whole number of bytes");
  }
  std::vector<uint8_t> record(row.size() * bits / 8, 0);
  const unsigned per_byte = 8 / bits;
  for (size_t k = 0; k < row.size(); ++k) {
    if (row[k] >= p) return InputError("row symbol out of range");
    record[k / per_byte] |=
        static_cast<uint8_t>(row[k] << ((k % per_byte) * bits));
  }
  return record;
}

std::vector<uint8_t> SerializeDatabaseFile(const DatabaseFile& file) {
  WireWriter w;
  w.PutBytes(std::span<const uint8_t>(
                 reinterpret_cast<const uint8_t*>(kDatabaseMagic), 4),
             /*payload=*/false);
  w.PutU32(kDatabaseFileVersion);
  w.PutU64(file.d0);
  w.PutU64(file.d1);
  w.PutU32(static_cast<uint32_t>(file.p));
  w.PutU32(static_cast<uint32_t>(file.record_bytes));
  w.PutBytes(file.symbols, /*payload=*/true);
  return w.Release();
}

absl::StatusOr<DatabaseFile> ParseDatabaseFile(std::span<const uint8_t> bytes) {
  if (bytes.size() < kDatabaseHeaderBytes ||
      !std::equal(kDatabaseMagic, kDatabaseMagic + 4, bytes.begin())) {
    return InputError("not a database file");
  }
  WireReader r(bytes.subspan(4));
  auto header = [&]() -> absl::StatusOr<DatabaseFile> {
    ZIPPIR_ASSIGN_OR_RETURN(uint32_t version, r.GetU32());
    if (version != kDatabaseFileVersion) {
      return InputError(
          absl::StrCat("unsupported database file version ", version));
    }
    DatabaseFile file;
    ZIPPIR_ASSIGN_OR_RETURN(file.d0, r.GetU64());
    ZIPPIR_ASSIGN_OR_RETURN(file.d1, r.GetU64());
    ZIPPIR_ASSIGN_OR_RETURN(file.p, r.GetU32());
    ZIPPIR_ASSIGN_OR_RETURN(file.record_bytes, r.GetU32());
    return file;
  };
  auto parsed = header();
  if (!parsed.ok()) {
    return HasErrorKind(parsed.status())
               ? parsed.status()
               : InputError(parsed.status().message());
  }
  std::span<const uint8_t> body = bytes.subspan(kDatabaseHeaderBytes);
  ZIPPIR_ASSIGN_OR_RETURN(
      DatabaseFile file,
      FromSymbols(std::vector<uint8_t>(body.begin(), body.end()), parsed->d0,
                  parsed->d1, parsed->p));
  if (file.record_bytes != parsed->record_bytes) {
    return InputError("record size does not match the shape");
  }
  return file;
}

absl::Status WriteDatabaseFile(const std::string& path,
                               const DatabaseFile& file) {
  return WriteFileAtomic(path, SerializeDatabaseFile(file));
}

absl::StatusOr<DatabaseFile> ReadDatabaseFile(const std::string& path) {
  ZIPPIR_ASSIGN_OR_RETURN(std::vector<uint8_t> bytes, ReadFileBytes(path));
  return ParseDatabaseFile(bytes);
}

absl::StatusOr<std::vector<uint8_t>> ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return IoError("cannot open", path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (in.bad()) return IoError("cannot read", path);
  return bytes;
}

absl::Status WriteFileAtomic(const std::string& path,
                             std::span<const uint8_t> bytes) {
  static std::atomic<uint64_t> counter{0};
  const std::string tmp =
      absl::StrCat(path, ".tmp-", ::getpid(), "-", counter.fetch_add(1));
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
  if (fd < 0) return IoError("cannot create", tmp);
  size_t written = 0;
  while (written < bytes.size()) {
    ssize_t k = ::write(fd, bytes.data() + written, bytes.size() - written);
    if (k < 0) {
      if (errno == EINTR) continue;
      absl::Status status = IoError("cannot write", tmp);
      ::close(fd);
      ::unlink(tmp.c_str());
      return status;
    }
    written += static_cast<size_t>(k);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    absl::Status status = IoError("cannot sync", tmp);
    ::unlink(tmp.c_str());
    return status;
  }
  if (::rename(tmp.c_str(), path.c_str()) != 0) {
    absl::Status status = IoError("cannot rename onto", path);
    ::unlink(tmp.c_str());
    return status;
  }
  return absl::OkStatus();
}

}  // namespace zippir
