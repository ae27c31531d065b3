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

#include "zippir/service/config.h"

#include <set>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "zippir/common/errors.h"
#include "zippir/common/status_macros.h"
#include "zippir/service/database_file.h"

namespace zippir {
namespace {

using Json = nlohmann::json;

absl::Status CheckKeys(const Json& object, const std::set<std::string>& known,
                       const std::string& where) {
  if (!object.is_object()) return InputError(where + " must be an object");
  for (const auto& item : object.items()) {
    if (known.count(item.key()) == 0) {
      return InputError(
          absl::StrCat("unknown key '", item.key(), "' in ", where));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<Seed> ParseSeed(const std::string& hex) {
  Seed seed{};
  if (hex.size() != 2 * seed.size()) {
    return InputError("matrix_seed must have 32 hex digits");
  }
  for (size_t k = 0; k < seed.size(); ++k) {
    auto nibble = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      return -1;
    };
    int hi = nibble(hex[2 * k]);
    int lo = nibble(hex[2 * k + 1]);
    if (hi < 0 || lo < 0) return InputError("matrix_seed is not hex");
    seed[k] = static_cast<uint8_t>(hi * 16 + lo);
  }
  return seed;
}

absl::Status ParseParams(const Json& j, ProtocolConfig& c) {
  ZIPPIR_RETURN_IF_ERROR(
      CheckKeys(j,
                {"n", "log2_q", "sigma", "key_distribution", "paillier_bits",
                 "regime", "delta_fail_log2", "matrix_seed"},
                "params"));
  if (j.contains("n")) c.n = j.at("n").get<size_t>();
  if (j.contains("log2_q")) c.log2_q = j.at("log2_q").get<unsigned>();
  if (j.contains("sigma")) c.sigma = j.at("sigma").get<double>();
  if (j.contains("paillier_bits")) {
    c.paillier_bits = j.at("paillier_bits").get<size_t>();
  }
  if (j.contains("delta_fail_log2")) {
    c.delta_fail_log2 = j.at("delta_fail_log2").get<unsigned>();
  }
  if (j.contains("key_distribution")) {
    const auto dist = j.at("key_distribution").get<std::string>();
    if (dist == "binary") {
      c.key_dist = KeyDistribution::kBinary;
    } else if (dist == "uniform") {
      c.key_dist = KeyDistribution::kUniform;
    } else {
      return InputError("key_distribution must be 'binary' or 'uniform'");
    }
  }
  if (j.contains("regime")) {
    const auto regime = j.at("regime").get<std::string>();
    if (regime == "standard") {
      c.regime = NoiseRegime::kStandard;
    } else if (regime == "quarter-delta") {
      c.regime = NoiseRegime::kQuarterDelta;
    } else {
      return InputError("regime must be 'standard' or 'quarter-delta'");
    }
  }
  if (j.contains("matrix_seed")) {
    ZIPPIR_ASSIGN_OR_RETURN(c.matrix_seed,
                            ParseSeed(j.at("matrix_seed").get<std::string>()));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<ServiceConfig> ParseServiceConfig(const std::string& text) {
  ServiceConfig config;
  try {
    const Json j = Json::parse(text);
    ZIPPIR_RETURN_IF_ERROR(CheckKeys(
        j,
        {"params", "bind", "hint_workers", "hint_lookahead", "compute_threads"},
        "configuration"));
    if (j.contains("params")) {
      ZIPPIR_RETURN_IF_ERROR(ParseParams(j.at("params"), config.protocol));
    }
    if (j.contains("bind")) {
      config.server.bind_address = j.at("bind").get<std::string>();
    }
    if (j.contains("hint_workers")) {
      config.server.hint_workers = j.at("hint_workers").get<size_t>();
    }
    if (j.contains("hint_lookahead")) {
      config.server.hint_lookahead = j.at("hint_lookahead").get<size_t>();
    }
    if (j.contains("compute_threads")) {
      config.compute_threads = j.at("compute_threads").get<size_t>();
    }
  } catch (const Json::exception& e) {
    return InputError(absl::StrCat("invalid configuration: ", e.what()));
  }
  return config;
}

absl::StatusOr<ServiceConfig> LoadServiceConfig(const std::string& path) {
  ZIPPIR_ASSIGN_OR_RETURN(auto bytes, ReadFileBytes(path));
  return ParseServiceConfig(std::string(bytes.begin(), bytes.end()));
}

}  // namespace zippir
