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

#ifndef ZIPPIR_SERVICE_HINT_STORE_H_
#define ZIPPIR_SERVICE_HINT_STORE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "zippir/protocol/messages.h"
#include "zippir/protocol/params.h"

namespace zippir {

std::string ClientIdHex(const ClientId& id);

// Per-client hint files under a root directory:
//   <root>/<client id hex>/<db_version>-<query_index>.hint
// Each file holds the entries of one ClientHint as fixed-width ciphertexts,
// 2 * ceil(log2 m) bits each. Writes go through a temporary file and a
// rename, so readers only ever see complete entries.
class HintStore {
 public:
  // Creates the root if needed and removes temporary files left behind by an
  // interrupted writer.
  static absl::StatusOr<std::unique_ptr<HintStore>> Open(std::string root);

  absl::Status Put(const ProtocolParams& params, const ClientId& id,
                   const PaillierPublicKey& pk, const ClientHint& hint);
  // Entries of another db_version are never returned.
  absl::StatusOr<std::optional<ClientHint>> Get(const ProtocolParams& params,
                                                const ClientId& id,
                                                const PaillierPublicKey& pk,
                                                uint64_t query_index,
                                                uint64_t db_version);
  bool Has(const ClientId& id, uint64_t query_index, uint64_t db_version);
  absl::Status Erase(const ClientId& id, uint64_t query_index,
                     uint64_t db_version);
  // Removes every hint entry of one client.
  absl::Status EraseClient(const ClientId& id);
  // Removes every entry whose db_version differs from `current`.
  absl::Status DropStale(uint64_t current);

  // Encoded HintRequest of a client, kept in its directory as client.reg.
  absl::Status PutRegistration(const ClientId& id,
                               std::span<const uint8_t> encoded);
  std::vector<std::vector<uint8_t>> LoadRegistrations();

  // (db_version, query_index) pairs stored for a client, sorted.
  std::vector<std::pair<uint64_t, uint64_t>> Entries(const ClientId& id);
  // File size of one stored entry.
  absl::StatusOr<uint64_t> EntryBytes(const ClientId& id, uint64_t query_index,
                                      uint64_t db_version);

  const std::string& root() const { return root_; }

 private:
  explicit HintStore(std::string root) : root_(std::move(root)) {}
  std::string ClientDir(const ClientId& id) const;
  std::string EntryPath(const ClientId& id, uint64_t query_index,
                        uint64_t db_version) const;
  std::mutex& LockFor(const ClientId& id);

  std::string root_;
  std::mutex locks_mu_;
  std::map<ClientId, std::unique_ptr<std::mutex>> locks_;
};

}  // namespace zippir

#endif  // ZIPPIR_SERVICE_HINT_STORE_H_
