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

#include "zippir/service/hint_store.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <system_error>

#include "absl/strings/str_cat.h"
#include "zippir/common/errors.h"
#include "zippir/common/status_macros.h"
#include "zippir/common/wire.h"
#include "zippir/service/database_file.h"

namespace zippir {
namespace fs = std::filesystem;
namespace {

constexpr char kSuffix[] = ".hint";
constexpr char kRegistrationFile[] = "client.reg";

absl::Status FsError(const std::string& what, const std::error_code& ec) {
  return StateError(absl::StrCat(what, ": ", ec.message()));
}

// Parses "<db_version>-<query_index>.hint".
std::optional<std::pair<uint64_t, uint64_t>> ParseEntryName(
    const std::string& name) {
  const size_t suffix = sizeof(kSuffix) - 1;
  if (name.size() <= suffix ||
      name.compare(name.size() - suffix, suffix, kSuffix) != 0) {
    return std::nullopt;
  }
  const size_t dash = name.find('-');
  if (dash == std::string::npos) return std::nullopt;
  uint64_t version = 0;
  uint64_t index = 0;
  const char* begin = name.data();
  auto r1 = std::from_chars(begin, begin + dash, version);
  auto r2 =
      std::from_chars(begin + dash + 1, begin + name.size() - suffix, index);
  if (r1.ec != std::errc() || r1.ptr != begin + dash || r2.ec != std::errc() ||
      r2.ptr != begin + name.size() - suffix) {
    return std::nullopt;
  }
  return std::make_pair(version, index);
}

}  // namespace

std::string ClientIdHex(const ClientId& id) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (uint8_t b : id) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

absl::StatusOr<std::unique_ptr<HintStore>> HintStore::Open(std::string root) {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) return FsError(absl::StrCat("cannot create ", root), ec);
  for (auto it = fs::recursive_directory_iterator(root, ec);
       !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (it->is_regular_file() &&
        it->path().filename().string().find(".tmp-") != std::string::npos) {
      fs::remove(it->path(), ec);
    }
  }
  if (ec) return FsError(absl::StrCat("cannot scan ", root), ec);
  return std::unique_ptr<HintStore>(new HintStore(std::move(root)));
}

std::string HintStore::ClientDir(const ClientId& id) const {
  return (fs::path(root_) / ClientIdHex(id)).string();
}

std::string HintStore::EntryPath(const ClientId& id, uint64_t query_index,
                                 uint64_t db_version) const {
  return (fs::path(ClientDir(id)) /
          absl::StrCat(db_version, "-", query_index, kSuffix))
      .string();
}

std::mutex& HintStore::LockFor(const ClientId& id) {
  std::lock_guard<std::mutex> guard(locks_mu_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

absl::Status HintStore::Put(const ProtocolParams& params, const ClientId& id,
                            const PaillierPublicKey& pk,
                            const ClientHint& hint) {
  if (hint.k.size() != params.hint_entries()) {
    return InputError("hint has the wrong number of entries");
  }
  WireWriter w;
  std::vector<mpz_class> values;
  values.reserve(hint.k.size());
  for (const auto& c : hint.k) values.push_back(c.c);
  w.PutBigIntVector(values, pk.ciphertext_bytes());
  std::lock_guard<std::mutex> guard(LockFor(id));
  std::error_code ec;
  fs::create_directories(ClientDir(id), ec);
  if (ec) return FsError("cannot create client directory", ec);
  return WriteFileAtomic(EntryPath(id, hint.query_index, hint.db_version),
                         w.bytes());
}

absl::StatusOr<std::optional<ClientHint>> HintStore::Get(
    const ProtocolParams& params, const ClientId& id,
    const PaillierPublicKey& pk, uint64_t query_index, uint64_t db_version) {
  std::lock_guard<std::mutex> guard(LockFor(id));
  const std::string path = EntryPath(id, query_index, db_version);
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::optional<ClientHint>();
  ZIPPIR_ASSIGN_OR_RETURN(std::vector<uint8_t> bytes, ReadFileBytes(path));
  WireReader r(bytes);
  auto values = r.GetBigIntVector();
  if (!values.ok() || !r.done() || values->size() != params.hint_entries()) {
    return StateError(absl::StrCat("corrupt hint entry ", path));
  }
  ClientHint hint{query_index, db_version, {}};
  for (auto& v : *values) {
    if (v >= pk.m_squared()) {
      return StateError(absl::StrCat("corrupt hint entry ", path));
    }
    hint.k.push_back(PaillierCiphertext{std::move(v)});
  }
  return std::optional<ClientHint>(std::move(hint));
}

bool HintStore::Has(const ClientId& id, uint64_t query_index,
                    uint64_t db_version) {
  std::lock_guard<std::mutex> guard(LockFor(id));
  std::error_code ec;
  return fs::exists(EntryPath(id, query_index, db_version), ec);
}

absl::Status HintStore::EraseClient(const ClientId& id) {
  std::lock_guard<std::mutex> guard(LockFor(id));
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(ClientDir(id), ec)) {
    if (ParseEntryName(entry.path().filename().string())) {
      fs::remove(entry.path(), ec);
    }
  }
  if (ec) return FsError("cannot remove client hints", ec);
  return absl::OkStatus();
}

absl::Status HintStore::PutRegistration(const ClientId& id,
                                        std::span<const uint8_t> encoded) {
  std::lock_guard<std::mutex> guard(LockFor(id));
  std::error_code ec;
  fs::create_directories(ClientDir(id), ec);
  if (ec) return FsError("cannot create client directory", ec);
  return WriteFileAtomic((fs::path(ClientDir(id)) / kRegistrationFile).string(),
                         encoded);
}

std::vector<std::vector<uint8_t>> HintStore::LoadRegistrations() {
  std::vector<std::vector<uint8_t>> out;
  std::error_code ec;
  for (const auto& dir : fs::directory_iterator(root_, ec)) {
    if (!dir.is_directory()) continue;
    auto bytes = ReadFileBytes((dir.path() / kRegistrationFile).string());
    if (bytes.ok()) out.push_back(*std::move(bytes));
  }
  return out;
}

absl::Status HintStore::Erase(const ClientId& id, uint64_t query_index,
                              uint64_t db_version) {
  std::lock_guard<std::mutex> guard(LockFor(id));
  std::error_code ec;
  fs::remove(EntryPath(id, query_index, db_version), ec);
  if (ec) return FsError("cannot remove hint entry", ec);
  return absl::OkStatus();
}

absl::Status HintStore::DropStale(uint64_t current) {
  std::error_code ec;
  for (const auto& dir : fs::directory_iterator(root_, ec)) {
    if (!dir.is_directory()) continue;
    for (const auto& entry : fs::directory_iterator(dir.path(), ec)) {
      auto parsed = ParseEntryName(entry.path().filename().string());
      if (parsed && parsed->first != current) fs::remove(entry.path(), ec);
    }
  }
  if (ec) return FsError("cannot drop stale hints", ec);
  return absl::OkStatus();
}

std::vector<std::pair<uint64_t, uint64_t>> HintStore::Entries(
    const ClientId& id) {
  std::lock_guard<std::mutex> guard(LockFor(id));
  std::vector<std::pair<uint64_t, uint64_t>> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(ClientDir(id), ec)) {
    auto parsed = ParseEntryName(entry.path().filename().string());
    if (parsed) out.push_back(*parsed);
  }
  std::sort(out.begin(), out.end());
  return out;
}

absl::StatusOr<uint64_t> HintStore::EntryBytes(const ClientId& id,
                                               uint64_t query_index,
                                               uint64_t db_version) {
  std::error_code ec;
  uint64_t size = fs::file_size(EntryPath(id, query_index, db_version), ec);
  if (ec) return FsError("cannot stat hint entry", ec);
  return size;
}

}  // namespace zippir
