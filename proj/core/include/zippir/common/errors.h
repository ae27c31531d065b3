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

#ifndef ZIPPIR_COMMON_ERRORS_H_
#define ZIPPIR_COMMON_ERRORS_H_

#include <cstdint>

#include "absl/status/status.h"
#include "absl/strings/string_view.h"

namespace zippir {

// Stable error classes; the numeric values travel on the wire.
enum class ErrorKind : uint8_t {
  kNone = 0,
  kInput = 1,
  kProtocol = 2,
  kState = 3,
  kCrypto = 4,
};

absl::Status InputError(absl::string_view message);
absl::Status ProtocolError(absl::string_view message);
absl::Status StateError(absl::string_view message);
// A Paillier ciphertext outside Z*_{m^2}.
absl::Status InvalidCiphertextError(absl::string_view message);
// The additive modulus cannot hold the compressed plaintext.
absl::Status ModulusTooSmallError(absl::string_view message);
// More slots requested than one additive ciphertext can carry.
absl::Status CapacityExceededError(absl::string_view message);
// The server has no registration for the client that sent a message.
absl::Status RegistrationRequiredError(absl::string_view message);

ErrorKind KindOf(const absl::Status& status);

// True when the status carries an explicit error kind.
bool HasErrorKind(const absl::Status& status);
bool IsInvalidCiphertext(const absl::Status& status);
bool IsModulusTooSmall(const absl::Status& status);
bool IsCapacityExceeded(const absl::Status& status);
bool IsRegistrationRequired(const absl::Status& status);

// Stable numeric codes for the error subtypes carried on the wire.
enum class ErrorTag : uint8_t {
  kNone = 0,
  kInvalidCiphertext = 1,
  kModulusTooSmall = 2,
  kCapacityExceeded = 3,
  kRegistrationRequired = 4,
};

ErrorTag TagOf(const absl::Status& status);

// Rebuilds a status received over the wire.
absl::Status StatusFromWire(ErrorKind kind, absl::StatusCode code, ErrorTag tag,
                            absl::string_view message);

}  // namespace zippir

#endif  // ZIPPIR_COMMON_ERRORS_H_
