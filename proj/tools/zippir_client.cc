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

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "tool_support.h"
#include "zippir/common/errors.h"
#include "zippir/common/parallel.h"
#include "zippir/common/status_macros.h"
#include "zippir/protocol/client.h"
#include "zippir/service/bench.h"
#include "zippir/service/database_file.h"
#include "zippir/service/hint_store.h"
#include "zippir/service/pir_client.h"

namespace zippir::tools {
namespace {

struct CommonFlags {
  std::string dir;
  std::string server = "127.0.0.1:7700";
};

const char* ModeName(ResponseMode mode) {
  switch (mode) {
    case ResponseMode::kSeparate:
      return "separate";
    case ResponseMode::kCombined:
      return "combined";
    case ResponseMode::kClientStorage:
      return "client-storage";
  }
  return "?";
}

struct Loaded {
  ProtocolParams params;
  Client client;
};

absl::StatusOr<Loaded> LoadClient(const ClientWorkspace& workspace) {
  if (!workspace.Exists()) {
    return StateError(absl::StrCat("no client state in ", workspace.dir(),
                                   "; run setup first"));
  }
  ZIPPIR_ASSIGN_OR_RETURN(ProtocolConfig config, workspace.LoadConfig());
  ZIPPIR_ASSIGN_OR_RETURN(ProtocolParams params,
                          ProtocolParams::Create(config));
  ZIPPIR_ASSIGN_OR_RETURN(ClientLongTermState state, workspace.LoadState());
  ZIPPIR_ASSIGN_OR_RETURN(Client client,
                          Client::Restore(params, std::move(state)));
  return Loaded{std::move(params), std::move(client)};
}

absl::Status RunSetup(const CommonFlags& common, bool force) {
  ClientWorkspace workspace(common.dir);
  if (workspace.Exists() && !force) {
    return StateError(absl::StrCat("client state already exists in ",
                                   common.dir, "; pass --force to replace it"));
  }
  ZIPPIR_ASSIGN_OR_RETURN(auto session, RemoteSession::Connect(common.server));
  ZIPPIR_ASSIGN_OR_RETURN(auto info, session->FetchInfo());
  ZIPPIR_ASSIGN_OR_RETURN(ProtocolParams params,
                          ProtocolParams::Create(info.config));
  Prng rng = Prng::FromEntropy();
  ZIPPIR_ASSIGN_OR_RETURN(Client client, Client::Setup(params, rng));
  ZIPPIR_ASSIGN_OR_RETURN(ExchangeStats stats,
                          session->Register(params, client.hint_request()));
  ZIPPIR_RETURN_IF_ERROR(workspace.Save(info.config, client.state()));
  PrintJson({{"event", "setup"},
             {"client_id", ClientIdHex(client.id())},
             {"db_version", info.db_version},
             {"d0", params.d0()},
             {"d1", params.d1()},
             {"hint_request_payload_bytes", stats.up_payload_bytes},
             {"hint_request_overhead_bytes", stats.up_overhead_bytes},
             {"state_bytes", SerializeClientState(client.state()).size()}});
  return absl::OkStatus();
}

absl::Status RunQuery(const CommonFlags& common, size_t index,
                      ResponseMode mode) {
  ClientWorkspace workspace(common.dir);
  ZIPPIR_ASSIGN_OR_RETURN(Loaded loaded, LoadClient(workspace));
  const ProtocolParams& params = loaded.params;
  Client& client = loaded.client;
  if (index >= params.d0()) {
    return InputError(absl::StrCat("row index ", index, " out of range [0, ",
                                   params.d0(), ")"));
  }
  ZIPPIR_ASSIGN_OR_RETURN(auto session, RemoteSession::Connect(common.server));

  const auto start = std::chrono::steady_clock::now();
  Prng rng = Prng::FromEntropy();
  std::optional<std::pair<QueryMessage, QuerySecret>> built;
  while (!built) {
    auto attempt = client.Query(index, rng);
    // The index is consumed either way and must never be reused.
    ZIPPIR_RETURN_IF_ERROR(workspace.SaveState(client.state()));
    if (attempt.ok()) {
      built = *std::move(attempt);
    } else if (!IsInvalidCiphertext(attempt.status())) {
      return attempt.status();
    }
  }
  auto& [query, secret] = *built;
  if (mode == ResponseMode::kClientStorage) {
    ZIPPIR_ASSIGN_OR_RETURN(
        auto hint, workspace.LoadHint(params, client.pk(), query.query_index));
    if (!hint) {
      return StateError(absl::StrCat("no stored hint for query index ",
                                     query.query_index,
                                     "; run fetch-hints first"));
    }
    ZIPPIR_RETURN_IF_ERROR(client.StoreHint(*hint));
  }
  ExchangeStats stats;
  ZIPPIR_ASSIGN_OR_RETURN(
      ResponseMessage response,
      session->Query(params, client.pk(), query, mode, {}, &stats));
  ZIPPIR_ASSIGN_OR_RETURN(auto row, client.Extract(secret, response));
  if (mode == ResponseMode::kClientStorage) {
    workspace.RemoveHint(query.query_index).IgnoreError();
  }
  ZIPPIR_ASSIGN_OR_RETURN(auto record, RecordFromRow(row, params.p()));
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  std::cout << Hex(record) << "\n";
  std::cout << absl::StrFormat(
                   "row=%d query_index=%d mode=%s db_version=%d "
                   "up_payload=%d up_overhead=%d down_payload=%d "
                   "down_overhead=%d pending=%d time_ms=%.1f",
                   index, query.query_index, ModeName(mode),
                   response.db_version, stats.up_payload_bytes,
                   stats.up_overhead_bytes, stats.down_payload_bytes,
                   stats.down_overhead_bytes, stats.pending_replies, ms)
            << std::endl;
  return absl::OkStatus();
}

absl::Status RunFetchHints(const CommonFlags& common, size_t count) {
  ClientWorkspace workspace(common.dir);
  ZIPPIR_ASSIGN_OR_RETURN(Loaded loaded, LoadClient(workspace));
  ZIPPIR_ASSIGN_OR_RETURN(auto session, RemoteSession::Connect(common.server));
  const uint64_t first = loaded.client.state().next_query_index;
  size_t payload = 0;
  size_t overhead = 0;
  for (uint64_t t = first; t < first + count; ++t) {
    ExchangeStats stats;
    ZIPPIR_ASSIGN_OR_RETURN(
        ClientHint hint, session->FetchHint(loaded.params, loaded.client.pk(),
                                            loaded.client.id(), t, {}, &stats));
    ZIPPIR_RETURN_IF_ERROR(
        workspace.SaveHint(loaded.params, loaded.client.pk(), hint));
    payload += stats.down_payload_bytes;
    overhead += stats.down_overhead_bytes + stats.up_overhead_bytes;
  }
  PrintJson({{"event", "hints-fetched"},
             {"first_query_index", first},
             {"count", count},
             {"payload_bytes", payload},
             {"overhead_bytes", overhead}});
  return absl::OkStatus();
}

absl::Status RunBenchCommand(const std::string& profile, const std::string& out,
                             const BenchOptions& options) {
  ZIPPIR_ASSIGN_OR_RETURN(auto rows, RunBench(profile, options));
  const std::string csv = FormatBenchCsv(rows);
  if (out.empty() || out == "-") {
    std::cout << csv;
  } else {
    ZIPPIR_RETURN_IF_ERROR(WriteFileAtomic(
        out, std::span<const uint8_t>(
                 reinterpret_cast<const uint8_t*>(csv.data()), csv.size())));
    PrintJson({{"event", "bench"},
               {"profile", profile},
               {"rows", rows.size()},
               {"out", out}});
  }
  return absl::OkStatus();
}

}  // namespace
}  // namespace zippir::tools

int main(int argc, char** argv) {
  using namespace zippir;
  using namespace zippir::tools;
  CLI::App app{"ZipPIR client."};
  CommonFlags common;
  common.dir = EnvOr("ZIPPIR_CLIENT_DIR", "zippir-client");
  app.add_option("--dir", common.dir,
                 "Client state directory (default $ZIPPIR_CLIENT_DIR or "
                 "./zippir-client)");
  app.add_option("--server", common.server, "Server host:port");
  app.require_subcommand(1);

  bool force = false;
  CLI::App* setup = app.add_subcommand(
      "setup", "Generate the long-term key and register with the server");
  setup->add_flag("--force", force, "Replace existing client state");

  size_t index = 0;
  std::string mode_name = "separate";
  CLI::App* query = app.add_subcommand("query", "Retrieve one record");
  query->add_option("--index", index, "Row to retrieve")->required();
  query->add_option("--mode", mode_name, "separate, combined or client-storage")
      ->check(CLI::IsMember({"separate", "combined", "client-storage"}));

  size_t count = 1;
  CLI::App* fetch = app.add_subcommand(
      "fetch-hints", "Download hints for client-storage mode");
  fetch->add_option("--count", count, "Number of upcoming queries")
      ->check(CLI::PositiveNumber);

  std::string profile;
  std::string out;
  BenchOptions bench_options;
  bool no_timing = false;
  CLI::App* bench = app.add_subcommand("bench", "Write a benchmark report");
  bench
      ->add_option("--profile", profile,
                   "table2, table3, fig3 or protocol-desk")
      ->required();
  bench->add_option("--out", out, "CSV output path ('-' for stdout)");
  bench->add_option("--paillier-bits", bench_options.paillier_bits);
  bench->add_option("--d0", bench_options.d0, "protocol-desk rows");
  bench->add_option("--d1", bench_options.d1, "protocol-desk columns");
  bench->add_option("--repetitions", bench_options.repetitions);
  bench->add_option("--threads", bench_options.threads,
                    "Threads for timed server work (0 = all cores)");
  bench->add_option("--seed", bench_options.seed);
  bench->add_flag("--no-timing", no_timing, "Only emit size columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return ReportError(InputError(e.what()));
  }
  absl::Status status;
  if (*setup) {
    status = RunSetup(common, force);
  } else if (*query) {
    ResponseMode mode = mode_name == "combined" ? ResponseMode::kCombined
                        : mode_name == "client-storage"
                            ? ResponseMode::kClientStorage
                            : ResponseMode::kSeparate;
    status = RunQuery(common, index, mode);
  } else if (*fetch) {
    status = RunFetchHints(common, count);
  } else if (*bench) {
    bench_options.timing = !no_timing;
    status = RunBenchCommand(profile, out, bench_options);
  }
  return status.ok() ? 0 : ReportError(status);
}
