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

#ifndef ZIPPIR_TOOLS_TOOL_SUPPORT_H_
#define ZIPPIR_TOOLS_TOOL_SUPPORT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "json.hpp"

namespace zippir::tools {

// Exit codes by error kind.
inline constexpr int kExitInput = 2;
inline constexpr int kExitProtocol = 3;
inline constexpr int kExitState = 4;
inline constexpr int kExitCrypto = 5;

// Writes {"error": {"kind", "code", "tag", "message"}} to stderr and returns
// the matching exit code.
int ReportError(const absl::Status& status);

// One JSON object per line on stdout.
void PrintJson(const nlohmann::json& value);

// Value of an environment variable, or `fallback` when unset or empty.
std::string EnvOr(const char* name, const std::string& fallback);

std::string Hex(const std::vector<uint8_t>& bytes);

}  // namespace zippir::tools

#endif  // ZIPPIR_TOOLS_TOOL_SUPPORT_H_
