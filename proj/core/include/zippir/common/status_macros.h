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

#ifndef ZIPPIR_COMMON_STATUS_MACROS_H_
#define ZIPPIR_COMMON_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define ZIPPIR_STATUS_CONCAT_INNER_(x, y) x##y
#define ZIPPIR_STATUS_CONCAT_(x, y) ZIPPIR_STATUS_CONCAT_INNER_(x, y)

#define ZIPPIR_RETURN_IF_ERROR(expr)                 \
  do {                                               \
    ::absl::Status zippir_status_ = (expr);          \
    if (!zippir_status_.ok()) return zippir_status_; \
  } while (0)

#define ZIPPIR_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                  \
  if (!statusor.ok()) return statusor.status();             \
  lhs = std::move(statusor).value()

#define ZIPPIR_ASSIGN_OR_RETURN(lhs, rexpr) \
  ZIPPIR_ASSIGN_OR_RETURN_IMPL_(            \
      ZIPPIR_STATUS_CONCAT_(zippir_statusor_, __LINE__), lhs, rexpr)

#endif  // ZIPPIR_COMMON_STATUS_MACROS_H_
