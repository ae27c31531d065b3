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

#include "zippir/common/errors.h"

#include <string>

#include "absl/strings/cord.h"
#include "absl/types/optional.h"

namespace zippir {
namespace {

constexpr char kKindUrl[] = "type.zippir/error-kind";
constexpr char kTagUrl[] = "type.zippir/error-tag";

absl::Status Make(absl::StatusCode code, ErrorKind kind, absl::string_view tag,
                  absl::string_view message) {
  absl::Status status(code, message);
  status.SetPayload(kKindUrl,
                    absl::Cord(std::string(1, static_cast<char>(kind))));
  if (!tag.empty()) status.SetPayload(kTagUrl, absl::Cord(tag));
  return status;
}

bool HasTag(const absl::Status& status, absl::string_view tag) {
  absl::optional<absl::Cord> payload = status.GetPayload(kTagUrl);
  return payload.has_value() && *payload == tag;
}

}  // namespace

absl::Status InputError(absl::string_view message) {
  return Make(absl::StatusCode::kInvalidArgument, ErrorKind::kInput, "",
              message);
}

absl::Status ProtocolError(absl::string_view message) {
  return Make(absl::StatusCode::kInvalidArgument, ErrorKind::kProtocol, "",
              message);
}

absl::Status StateError(absl::string_view message) {
  return Make(absl::StatusCode::kFailedPrecondition, ErrorKind::kState, "",
              message);
}

absl::Status InvalidCiphertextError(absl::string_view message) {
  return Make(absl::StatusCode::kDataLoss, ErrorKind::kCrypto,
              "invalid-ciphertext", message);
}

absl::Status ModulusTooSmallError(absl::string_view message) {
  return Make(absl::StatusCode::kFailedPrecondition, ErrorKind::kInput,
              "modulus-too-small", message);
}

absl::Status CapacityExceededError(absl::string_view message) {
  return Make(absl::StatusCode::kOutOfRange, ErrorKind::kInput,
              "capacity-exceeded", message);
}

absl::Status RegistrationRequiredError(absl::string_view message) {
  return Make(absl::StatusCode::kFailedPrecondition, ErrorKind::kState,
              "registration-required", message);
}

ErrorKind KindOf(const absl::Status& status) {
  if (status.ok()) return ErrorKind::kNone;
  absl::optional<absl::Cord> payload = status.GetPayload(kKindUrl);
  if (!payload.has_value() || payload->size() != 1) return ErrorKind::kState;
  return static_cast<ErrorKind>(std::string(*payload)[0]);
}

bool HasErrorKind(const absl::Status& status) {
  return status.GetPayload(kKindUrl).has_value();
}

bool IsInvalidCiphertext(const absl::Status& status) {
  return HasTag(status, "invalid-ciphertext");
}

bool IsModulusTooSmall(const absl::Status& status) {
  return HasTag(status, "modulus-too-small");
}

bool IsCapacityExceeded(const absl::Status& status) {
  return HasTag(status, "capacity-exceeded");
}

bool IsRegistrationRequired(const absl::Status& status) {
  return HasTag(status, "registration-required");
}

ErrorTag TagOf(const absl::Status& status) {
  if (IsInvalidCiphertext(status)) return ErrorTag::kInvalidCiphertext;
  if (IsModulusTooSmall(status)) return ErrorTag::kModulusTooSmall;
  if (IsCapacityExceeded(status)) return ErrorTag::kCapacityExceeded;
  if (IsRegistrationRequired(status)) return ErrorTag::kRegistrationRequired;
  return ErrorTag::kNone;
}

absl::Status StatusFromWire(ErrorKind kind, absl::StatusCode code, ErrorTag tag,
                            absl::string_view message) {
  absl::string_view name;
  switch (tag) {
    case ErrorTag::kInvalidCiphertext:
      name = "invalid-ciphertext";
      break;
    case ErrorTag::kModulusTooSmall:
      name = "modulus-too-small";
      break;
    case ErrorTag::kCapacityExceeded:
      name = "capacity-exceeded";
      break;
    case ErrorTag::kRegistrationRequired:
      name = "registration-required";
      break;
    case ErrorTag::kNone:
      break;
  }
  return Make(code, kind, name, message);
}

}  // namespace zippir
