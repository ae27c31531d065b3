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

#ifndef ZIPPIR_SERVICE_PIR_SERVER_H_
#define ZIPPIR_SERVICE_PIR_SERVER_H_

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "zippir/protocol/messages.h"
#include "zippir/protocol/params.h"
#include "zippir/protocol/server.h"
#include "zippir/service/hint_store.h"
#include "zippir/service/transport.h"

namespace zippir {

struct ServerOptions {
  std::string bind_address = "127.0.0.1:7700";
  std::string hint_store_dir = "zippir-hints";
  // Background hint generation threads.
  size_t hint_workers = 1;
  // Hints kept ready ahead of the next unused query index of each client.
  size_t hint_lookahead = 2;
};

// Serves one database over TCP. Connections run on their own threads and
// read the current ServerState, which is replaced atomically on a database
// swap. Hints are generated by background workers into the hint store.
class PirServer {
 public:
  static absl::StatusOr<std::unique_ptr<PirServer>> Create(
      const ProtocolParams& params, std::shared_ptr<const Database> db,
      ServerOptions options);
  ~PirServer();

  absl::Status Start();
  void Stop();
  uint16_t port() const;

  // Installs a new database version and schedules fresh hints for every
  // registered client. Hints of older versions are discarded.
  absl::Status SwapDatabase(std::shared_ptr<const Database> db);
  uint64_t db_version() const;

  // Blocks until no hint job is queued or running.
  void WaitForIdleHints();
  size_t registered_clients() const;

  // Totals over all connections.
  const TrafficCounters& traffic() const { return *traffic_; }
  HintStore& hint_store() { return *store_; }
  std::shared_ptr<const ServerState> state() const;

 private:
  struct ClientEntry {
    ClientRegistration registration;
    std::set<uint64_t> served;
    uint64_t next_index = 0;
  };
  struct HintJob {
    ClientId id;
    uint64_t query_index;
    uint64_t db_version;
  };

  PirServer(const ProtocolParams& params, ServerOptions options)
      : params_(params), options_(std::move(options)) {}

  void AcceptLoop();
  void ServeConnection(Connection* connection);
  Frame Handle(const Frame& request);
  Frame HandleHintRequest(const Frame& request);
  Frame HandleQuery(const Frame& request);
  Frame HandleHintFetch(const Frame& request);
  // Loads the stored hint or schedules it. nullopt means pending.
  absl::StatusOr<std::optional<ClientHint>> HintFor(
      const ClientRegistration& registration, uint64_t query_index,
      const ServerState& state);
  void ScheduleLocked(const ClientEntry& entry, uint64_t first,
                      uint64_t db_version);
  void HintWorker();
  absl::Status LoadRegistrations();

  ProtocolParams params_;
  ServerOptions options_;
  std::unique_ptr<HintStore> store_;
  std::shared_ptr<TrafficCounters> traffic_ =
      std::make_shared<TrafficCounters>();

  mutable std::mutex state_mu_;
  std::shared_ptr<const ServerState> state_;

  mutable std::mutex mu_;
  std::condition_variable jobs_cv_;
  std::condition_variable idle_cv_;
  std::map<ClientId, ClientEntry> clients_;
  std::deque<HintJob> jobs_;
  std::set<std::tuple<ClientId, uint64_t, uint64_t>> queued_;
  size_t running_jobs_ = 0;
  bool stopping_ = false;

  std::unique_ptr<Listener> listener_;
  std::thread accept_thread_;
  std::vector<std::thread> workers_;
  std::mutex connections_mu_;
  std::vector<std::pair<std::thread, std::shared_ptr<Connection>>> connections_;
};

}  // namespace zippir

#endif  // ZIPPIR_SERVICE_PIR_SERVER_H_
