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

#include "tool_support.h"

#include <cstdlib>
#include <iostream>

#include "zippir/common/errors.h"

namespace zippir::tools {

int ReportError(const absl::Status& status) {
  const ErrorKind kind = KindOf(status);
  const char* name = "state";
  int exit_code = kExitState;
  switch (kind) {
    case ErrorKind::kInput:
      name = "input";
      exit_code = kExitInput;
      break;
    case ErrorKind::kProtocol:
      name = "protocol";
      exit_code = kExitProtocol;
      break;
    case ErrorKind::kCrypto:
      name = "crypto";
      exit_code = kExitCrypto;
      break;
    case ErrorKind::kState:
    case ErrorKind::kNone:
      break;
  }
  nlohmann::json error = {
      {"kind", name},
      {"code", static_cast<int>(kind)},
      {"tag", static_cast<int>(TagOf(status))},
      {"message", std::string(status.message())},
  };
  std::cerr << nlohmann::json{{"error", error}}.dump() << std::endl;
  return exit_code;
}

void PrintJson(const nlohmann::json& value) {
  std::cout << value.dump() << std::endl;
}

std::string EnvOr(const char* name, const std::string& fallback) {
  const char* value = std::getenv(name);
  return value != nullptr && *value != '\0' ? std::string(value) : fallback;
}

std::string Hex(const std::vector<uint8_t>& bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * bytes.size());
  for (uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

}  // namespace zippir::tools
