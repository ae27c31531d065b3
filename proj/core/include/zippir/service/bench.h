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

#ifndef ZIPPIR_SERVICE_BENCH_H_
#define ZIPPIR_SERVICE_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace zippir {

// One CSV row: profile,param_set,metric,value,unit.
struct BenchRow {
  std::string profile;
  std::string param_set;
  std::string metric;
  std::string value;
  std::string unit;
};

struct BenchOptions {
  size_t paillier_bits = 3072;
  // Database shape of the protocol-desk profile (64 MB at p = 256).
  size_t d0 = 8192;
  size_t d1 = 8192;
  // Respond repetitions; the median is reported.
  size_t repetitions = 5;
  // Threads for the timed server work. 0 keeps the hardware default.
  size_t threads = 1;
  // Timing columns are informational and can be skipped.
  bool timing = true;
  uint64_t seed = 1;
};

// Profiles: table2, table3, fig3, protocol-desk. Size columns depend only on
// the parameters.
absl::StatusOr<std::vector<BenchRow>> RunBench(const std::string& profile,
                                               const BenchOptions& options);
std::vector<std::string> BenchProfiles();

std::string FormatBenchCsv(const std::vector<BenchRow>& rows);

// CPU model and logical core count of this machine.
std::string HardwareDescription();

}  // namespace zippir

#endif  // ZIPPIR_SERVICE_BENCH_H_
