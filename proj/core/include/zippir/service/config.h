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

#ifndef ZIPPIR_SERVICE_CONFIG_H_
#define ZIPPIR_SERVICE_CONFIG_H_

#include <cstddef>
#include <string>

#include "absl/status/statusor.h"
#include "zippir/protocol/params.h"
#include "zippir/service/pir_server.h"

namespace zippir {

// Server configuration file, JSON:
//   {
//     "params": {"n": 1400, "log2_q": 32, "sigma": 6.4,
//                "key_distribution": "binary", "paillier_bits": 3072,
//                "regime": "standard", "delta_fail_log2": 40,
//                "matrix_seed": "<32 hex digits>"},
//     "bind": "127.0.0.1:7700",
//     "hint_workers": 1,
//     "hint_lookahead": 2,
//     "compute_threads": 0
//   }
// Every key is optional. The database shape and p come from the database
// file. Unknown keys are rejected.
struct ServiceConfig {
  ProtocolConfig protocol;
  ServerOptions server;
  // 0 keeps the hardware default.
  size_t compute_threads = 0;
};

absl::StatusOr<ServiceConfig> ParseServiceConfig(const std::string& text);
absl::StatusOr<ServiceConfig> LoadServiceConfig(const std::string& path);

}  // namespace zippir

#endif  // ZIPPIR_SERVICE_CONFIG_H_
