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

#include "zippir/service/pir_server.h"

#include <sodium.h>

#include <algorithm>
#include <atomic>
#include <filesystem>

#include "absl/strings/str_cat.h"
#include "zippir/common/errors.h"
#include "zippir/common/status_macros.h"
#include "zippir/common/wire.h"
#include "zippir/service/database_file.h"

namespace zippir {
namespace {

constexpr char kVersionFile[] = "database.version";
constexpr size_t kFingerprintBytes = 32;

std::array<uint8_t, kFingerprintBytes> Fingerprint(const Database& db) {
  WireWriter w;
  w.PutU64(db.d0());
  w.PutU64(db.d1());
  w.PutU64(db.p());
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, kFingerprintBytes);
  crypto_generichash_update(&st, w.bytes().data(), w.size());
  crypto_generichash_update(&st, db.symbols().data(), db.symbols().size());
  std::array<uint8_t, kFingerprintBytes> out;
  crypto_generichash_final(&st, out.data(), out.size());
  return out;
}

// Version recorded next to the hint store. The same database content keeps
// its version across restarts; different content gets the next one.
absl::StatusOr<uint64_t> ResolveVersion(const std::string& root,
                                        const Database& db) {
  const std::string path =
      (std::filesystem::path(root) / kVersionFile).string();
  const auto fingerprint = Fingerprint(db);
  uint64_t version = 1;
  auto bytes = ReadFileBytes(path);
  if (bytes.ok() && bytes->size() == 8 + kFingerprintBytes) {
    WireReader r(*bytes);
    uint64_t stored = *r.GetU64();
    auto hash = *r.GetBytes(kFingerprintBytes);
    if (std::equal(hash.begin(), hash.end(), fingerprint.begin())) {
      return stored;
    }
    version = stored + 1;
  }
  return version;
}

absl::Status RecordVersion(const std::string& root, const Database& db,
                           uint64_t version) {
  WireWriter w;
  w.PutU64(version);
  w.PutBytes(Fingerprint(db), /*payload=*/true);
  return WriteFileAtomic((std::filesystem::path(root) / kVersionFile).string(),
                         w.bytes());
}

Frame ErrorFrame(const absl::Status& status) {
  return Frame{FrameType::kError, EncodeErrorBody(status)};
}

Frame PendingFrame(uint64_t query_index) {
  WireWriter w;
  w.PutU64(query_index);
  return Frame{FrameType::kHintPending, w.Release()};
}

bool NeedsStoredHint(ResponseMode mode) {
  return mode != ResponseMode::kClientStorage;
}

}  // namespace

absl::StatusOr<std::unique_ptr<PirServer>> PirServer::Create(
    const ProtocolParams& params, std::shared_ptr<const Database> db,
    ServerOptions options) {
  if (options.hint_workers == 0) {
    return InputError("at least one hint worker is required");
  }
  if (options.hint_lookahead == 0) {
    return InputError("hint lookahead must be positive");
  }
  std::unique_ptr<PirServer> server(new PirServer(params, std::move(options)));
  ZIPPIR_ASSIGN_OR_RETURN(server->store_,
                          HintStore::Open(server->options_.hint_store_dir));
  ZIPPIR_ASSIGN_OR_RETURN(uint64_t version,
                          ResolveVersion(server->store_->root(), *db));
  ZIPPIR_ASSIGN_OR_RETURN(server->state_,
                          ServerState::Create(params, db, version));
  ZIPPIR_RETURN_IF_ERROR(RecordVersion(server->store_->root(), *db, version));
  ZIPPIR_RETURN_IF_ERROR(server->store_->DropStale(version));
  ZIPPIR_RETURN_IF_ERROR(server->LoadRegistrations());
  return server;
}

PirServer::~PirServer() { Stop(); }

absl::Status PirServer::LoadRegistrations() {
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& bytes : store_->LoadRegistrations()) {
    auto request = DecodeHintRequest(params_, bytes);
    if (!request.ok()) continue;
    ClientEntry entry{RegisterClient(*request), {}, 0};
    auto stored = store_->Entries(entry.registration.id);
    if (!stored.empty()) {
      entry.next_index = std::min_element(stored.begin(), stored.end(),
                                          [](const auto& a, const auto& b) {
                                            return a.second < b.second;
                                          })
                             ->second;
    }
    clients_.emplace(entry.registration.id, std::move(entry));
  }
  return absl::OkStatus();
}

absl::Status PirServer::Start() {
  ZIPPIR_ASSIGN_OR_RETURN(listener_, Listener::Bind(options_.bind_address));
  {
    std::lock_guard<std::mutex> lock(mu_);
    stopping_ = false;
    const uint64_t version = state()->db_version();
    for (const auto& [id, entry] : clients_) {
      ScheduleLocked(entry, entry.next_index, version);
    }
  }
  for (size_t k = 0; k < options_.hint_workers; ++k) {
    workers_.emplace_back([this] { HintWorker(); });
  }
  accept_thread_ = std::thread([this] { AcceptLoop(); });
  return absl::OkStatus();
}

void PirServer::Stop() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    stopping_ = true;
  }
  jobs_cv_.notify_all();
  idle_cv_.notify_all();
  if (listener_) listener_->Shutdown();
  if (accept_thread_.joinable()) accept_thread_.join();
  {
    std::lock_guard<std::mutex> lock(connections_mu_);
    for (auto& [thread, connection] : connections_) connection->Shutdown();
  }
  for (auto& [thread, connection] : connections_) {
    if (thread.joinable()) thread.join();
  }
  connections_.clear();
  for (auto& worker : workers_) worker.join();
  workers_.clear();
}

uint16_t PirServer::port() const { return listener_ ? listener_->port() : 0; }

std::shared_ptr<const ServerState> PirServer::state() const {
  std::lock_guard<std::mutex> lock(state_mu_);
  return state_;
}

uint64_t PirServer::db_version() const { return state()->db_version(); }

size_t PirServer::registered_clients() const {
  std::lock_guard<std::mutex> lock(mu_);
  return clients_.size();
}

absl::Status PirServer::SwapDatabase(std::shared_ptr<const Database> db) {
  const uint64_t version = db_version() + 1;
  ZIPPIR_ASSIGN_OR_RETURN(auto next, ServerState::Create(params_, db, version));
  ZIPPIR_RETURN_IF_ERROR(RecordVersion(store_->root(), *db, version));
  {
    std::lock_guard<std::mutex> lock(state_mu_);
    state_ = std::move(next);
  }
  std::lock_guard<std::mutex> lock(mu_);
  std::erase_if(jobs_, [&](const HintJob& job) {
    if (job.db_version == version) return false;
    queued_.erase({job.id, job.query_index, job.db_version});
    return true;
  });
  ZIPPIR_RETURN_IF_ERROR(store_->DropStale(version));
  for (const auto& [id, entry] : clients_) {
    ScheduleLocked(entry, entry.next_index, version);
  }
  return absl::OkStatus();
}

void PirServer::WaitForIdleHints() {
  std::unique_lock<std::mutex> lock(mu_);
  idle_cv_.wait(lock, [this] {
    return stopping_ || (jobs_.empty() && running_jobs_ == 0);
  });
}

void PirServer::ScheduleLocked(const ClientEntry& entry, uint64_t first,
                               uint64_t db_version) {
  const ClientId& id = entry.registration.id;
  bool added = false;
  for (uint64_t t = first; t < first + options_.hint_lookahead; ++t) {
    if (entry.served.count(t) != 0) continue;
    auto key = std::make_tuple(id, t, db_version);
    if (queued_.count(key) != 0 || store_->Has(id, t, db_version)) continue;
    queued_.insert(key);
    jobs_.push_back(HintJob{id, t, db_version});
    added = true;
  }
  if (added) jobs_cv_.notify_all();
}

void PirServer::HintWorker() {
  for (;;) {
    HintJob job;
    std::optional<ClientRegistration> registration;
    {
      std::unique_lock<std::mutex> lock(mu_);
      jobs_cv_.wait(lock, [this] { return stopping_ || !jobs_.empty(); });
      if (stopping_) return;
      job = jobs_.front();
      jobs_.pop_front();
      registration = clients_.at(job.id).registration;
      ++running_jobs_;
    }
    auto current = state();
    if (current->db_version() == job.db_version &&
        !store_->Has(job.id, job.query_index, job.db_version)) {
      auto hint = current->GenerateHint(*registration, job.query_index);
      if (hint.ok()) {
        store_->Put(params_, job.id, registration->pk, *hint).IgnoreError();
      }
    }
    {
      std::lock_guard<std::mutex> lock(mu_);
      queued_.erase({job.id, job.query_index, job.db_version});
      --running_jobs_;
    }
    idle_cv_.notify_all();
  }
}

void PirServer::AcceptLoop() {
  for (;;) {
    auto accepted = listener_->Accept();
    if (!accepted.ok()) return;
    std::shared_ptr<Connection> connection = std::move(*accepted);
    connection->ShareCounters(traffic_);
    std::lock_guard<std::mutex> lock(connections_mu_);
    // Reap connections whose thread has finished.
    std::erase_if(connections_, [](auto& entry) {
      if (entry.second.use_count() > 1) return false;
      entry.first.join();
      return true;
    });
    auto handle = connection;
    connections_.emplace_back(
        std::thread([this, handle] { ServeConnection(handle.get()); }),
        std::move(connection));
  }
}

void PirServer::ServeConnection(Connection* connection) {
  for (;;) {
    auto request = connection->Receive();
    if (!request.ok()) {
      if (KindOf(request.status()) == ErrorKind::kProtocol) {
        connection->Send(ErrorFrame(request.status())).IgnoreError();
      }
      return;
    }
    if (!connection->Send(Handle(*request)).ok()) return;
  }
}

Frame PirServer::Handle(const Frame& request) {
  switch (request.type) {
    case FrameType::kParamsRequest: {
      WireWriter w;
      w.PutU64(db_version());
      w.PutBytes(SerializeConfig(params_.config()), /*payload=*/true);
      return Frame{FrameType::kParams, w.Release()};
    }
    case FrameType::kHintRequest:
      return HandleHintRequest(request);
    case FrameType::kQuery:
      return HandleQuery(request);
    case FrameType::kHintFetch:
      return HandleHintFetch(request);
    default:
      return ErrorFrame(ProtocolError(absl::StrCat(
          "unexpected frame type ", static_cast<int>(request.type))));
  }
}

Frame PirServer::HandleHintRequest(const Frame& request) {
  auto decoded = DecodeHintRequest(params_, request.body);
  if (!decoded.ok()) return ErrorFrame(decoded.status());
  ClientRegistration registration = RegisterClient(*decoded);
  absl::Status persisted =
      store_->PutRegistration(registration.id, request.body);
  if (!persisted.ok()) return ErrorFrame(persisted);
  const uint64_t version = db_version();
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = clients_.find(registration.id);
    if (it == clients_.end()) {
      it = clients_.emplace(registration.id, ClientEntry{registration, {}, 0})
               .first;
    } else if (it->second.registration.seed != registration.seed) {
      it->second.registration = registration;
      store_->EraseClient(registration.id).IgnoreError();
    }
    ScheduleLocked(it->second, it->second.next_index, version);
  }
  return Frame{
      FrameType::kHintAck,
      std::vector<uint8_t>(registration.id.begin(), registration.id.end())};
}

absl::StatusOr<std::optional<ClientHint>> PirServer::HintFor(
    const ClientRegistration& registration, uint64_t query_index,
    const ServerState& state) {
  ZIPPIR_ASSIGN_OR_RETURN(auto hint,
                          store_->Get(params_, registration.id, registration.pk,
                                      query_index, state.db_version()));
  if (hint.has_value()) return hint;
  std::lock_guard<std::mutex> lock(mu_);
  auto it = clients_.find(registration.id);
  if (it != clients_.end()) {
    ScheduleLocked(it->second, query_index, state.db_version());
  }
  return std::optional<ClientHint>();
}

Frame PirServer::HandleQuery(const Frame& request) {
  if (request.body.empty()) {
    return ErrorFrame(ProtocolError("empty query frame"));
  }
  const uint8_t mode_byte = request.body[0];
  if (mode_byte > static_cast<uint8_t>(ResponseMode::kClientStorage)) {
    return ErrorFrame(ProtocolError("unknown response mode"));
  }
  const auto mode = static_cast<ResponseMode>(mode_byte);
  auto query =
      DecodeQuery(params_, std::span<const uint8_t>(request.body).subspan(1));
  if (!query.ok()) return ErrorFrame(query.status());

  std::optional<ClientRegistration> known;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = clients_.find(query->client_id);
    if (it == clients_.end()) {
      return ErrorFrame(RegistrationRequiredError(
          "unknown client; send a hint request first"));
    }
    if (it->second.served.count(query->query_index) != 0) {
      return ErrorFrame(StateError(absl::StrCat(
          "query index ", query->query_index, " was already answered")));
    }
    known = it->second.registration;
  }
  const ClientRegistration& registration = *known;

  auto current = state();
  std::optional<ClientHint> hint;
  if (NeedsStoredHint(mode)) {
    auto found = HintFor(registration, query->query_index, *current);
    if (!found.ok()) return ErrorFrame(found.status());
    if (!found->has_value()) return PendingFrame(query->query_index);
    hint = std::move(**found);
  }
  auto response =
      current->Respond(registration, *query, mode, hint ? &*hint : nullptr);
  if (!response.ok()) return ErrorFrame(response.status());

  {
    std::lock_guard<std::mutex> lock(mu_);
    ClientEntry& entry = clients_.at(registration.id);
    entry.served.insert(query->query_index);
    entry.next_index = std::max(entry.next_index, query->query_index + 1);
    ScheduleLocked(entry, entry.next_index, current->db_version());
  }
  store_->Erase(registration.id, query->query_index, current->db_version())
      .IgnoreError();
  return Frame{FrameType::kResponse,
               EncodeResponse(params_, registration.pk, *response).bytes};
}

Frame PirServer::HandleHintFetch(const Frame& request) {
  WireReader r(request.body);
  auto id_bytes = r.GetBytes(sizeof(ClientId));
  auto index = r.GetU64();
  if (!id_bytes.ok() || !index.ok() || !r.done()) {
    return ErrorFrame(ProtocolError("malformed hint fetch"));
  }
  ClientId id;
  std::copy(id_bytes->begin(), id_bytes->end(), id.begin());
  std::optional<ClientRegistration> known;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = clients_.find(id);
    if (it == clients_.end()) {
      return ErrorFrame(RegistrationRequiredError(
          "unknown client; send a hint request first"));
    }
    if (it->second.served.count(*index) != 0) {
      return ErrorFrame(StateError(
          absl::StrCat("query index ", *index, " was already answered")));
    }
    known = it->second.registration;
  }
  const ClientRegistration& registration = *known;
  auto current = state();
  auto found = HintFor(registration, *index, *current);
  if (!found.ok()) return ErrorFrame(found.status());
  if (!found->has_value()) return PendingFrame(*index);
  return Frame{FrameType::kHintTransfer,
               EncodeHintTransfer(params_, registration.pk, **found).bytes};
}

}  // namespace zippir
