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

#include <csignal>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "tool_support.h"
#include "zippir/common/errors.h"
#include "zippir/common/parallel.h"
#include "zippir/common/status_macros.h"
#include "zippir/service/config.h"
#include "zippir/service/database_file.h"
#include "zippir/service/pir_server.h"

namespace zippir::tools {
namespace {

struct ServeFlags {
  std::string db_path;
  std::string config_path;
  std::string bind;
  std::string hint_store;
  size_t hint_workers = 0;
  size_t threads = 0;
};

struct IngestFlags {
  std::string input;
  std::string output;
  size_t d0 = 0;
  size_t d1 = 0;
  uint64_t p = 256;
};

absl::Status RunIngest(const IngestFlags& flags) {
  ZIPPIR_ASSIGN_OR_RETURN(auto data, ReadFileBytes(flags.input));
  ZIPPIR_ASSIGN_OR_RETURN(DatabaseFile file,
                          Ingest(data, flags.d0, flags.d1, flags.p));
  ZIPPIR_RETURN_IF_ERROR(WriteDatabaseFile(flags.output, file));
  PrintJson({{"event", "ingested"},
             {"path", flags.output},
             {"d0", file.d0},
             {"d1", file.d1},
             {"p", file.p},
             {"record_bytes", file.record_bytes}});
  return absl::OkStatus();
}

absl::StatusOr<std::shared_ptr<const Database>> LoadDatabase(
    const std::string& path) {
  ZIPPIR_ASSIGN_OR_RETURN(DatabaseFile file, ReadDatabaseFile(path));
  ZIPPIR_ASSIGN_OR_RETURN(Database db, file.ToDatabase());
  return std::make_shared<const Database>(std::move(db));
}

absl::Status RunServe(const ServeFlags& flags) {
  // Signals are consumed by sigwait below, so block them before any thread
  // starts.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigaddset(&signals, SIGHUP);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ZIPPIR_ASSIGN_OR_RETURN(ServiceConfig config,
                          LoadServiceConfig(flags.config_path));
  ZIPPIR_ASSIGN_OR_RETURN(auto db, LoadDatabase(flags.db_path));
  config.protocol.d0 = db->d0();
  config.protocol.d1 = db->d1();
  config.protocol.p = db->p();
  if (!flags.bind.empty()) config.server.bind_address = flags.bind;
  if (flags.hint_workers != 0) config.server.hint_workers = flags.hint_workers;
  if (flags.threads != 0) config.compute_threads = flags.threads;
  config.server.hint_store_dir =
      !flags.hint_store.empty()
          ? flags.hint_store
          : EnvOr("ZIPPIR_HINT_STORE", flags.db_path + ".hints");
  if (config.compute_threads != 0) SetWorkerCount(config.compute_threads);

  ZIPPIR_ASSIGN_OR_RETURN(ProtocolParams params,
                          ProtocolParams::Create(config.protocol));
  ZIPPIR_ASSIGN_OR_RETURN(auto server,
                          PirServer::Create(params, db, config.server));
  ZIPPIR_RETURN_IF_ERROR(server->Start());
  PrintJson({{"event", "listening"},
             {"address", config.server.bind_address},
             {"port", server->port()},
             {"db_version", server->db_version()},
             {"hint_store", config.server.hint_store_dir},
             {"hint_entries", params.hint_entries()}});

  for (;;) {
    int signal = 0;
    sigwait(&signals, &signal);
    if (signal != SIGHUP) break;
    auto reloaded = LoadDatabase(flags.db_path);
    absl::Status swapped = reloaded.ok()
                               ? server->SwapDatabase(*std::move(reloaded))
                               : reloaded.status();
    if (!swapped.ok()) {
      ReportError(swapped);
      continue;
    }
    PrintJson(
        {{"event", "database-updated"}, {"db_version", server->db_version()}});
  }
  server->Stop();
  PrintJson({{"event", "stopped"},
             {"bytes_received", server->traffic().bytes_received.load()},
             {"bytes_sent", server->traffic().bytes_sent.load()}});
  return absl::OkStatus();
}

}  // namespace
}  // namespace zippir::tools

int main(int argc, char** argv) {
  using namespace zippir::tools;
  CLI::App app{"ZipPIR server: serves a database file over TCP."};
  ServeFlags serve;
  app.add_option("--db", serve.db_path, "Database file (ZPDB)");
  app.add_option("--config", serve.config_path, "JSON configuration file");
  app.add_option("--bind", serve.bind, "host:port, overrides the config");
  app.add_option("--hint-store", serve.hint_store,
                 "Hint store directory (default $ZIPPIR_HINT_STORE or "
                 "<db>.hints)");
  app.add_option("--hint-workers", serve.hint_workers,
                 "Background hint threads, overrides the config");
  app.add_option("--threads", serve.threads,
                 "Compute threads, overrides the config");

  IngestFlags ingest;
  CLI::App* ingest_cmd =
      app.add_subcommand("ingest", "Pack a raw file into a database file");
  ingest_cmd->add_option("--input", ingest.input, "Raw input file")->required();
  ingest_cmd->add_option("--out", ingest.output, "Database file to write")
      ->required();
  ingest_cmd->add_option("--d0", ingest.d0, "Rows")->required();
  ingest_cmd->add_option("--d1", ingest.d1, "Symbols per row")->required();
  ingest_cmd->add_option("--p", ingest.p, "Plaintext modulus, a power of two");
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return ReportError(zippir::InputError(e.what()));
  }
  absl::Status status;
  if (*ingest_cmd) {
    status = RunIngest(ingest);
  } else if (serve.db_path.empty() || serve.config_path.empty()) {
    status = zippir::InputError("--db and --config are required");
  } else {
    status = RunServe(serve);
  }
  return status.ok() ? 0 : ReportError(status);
}
