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

#ifndef ZIPPIR_ADDITIVE_HE_OP_COUNTERS_H_
#define ZIPPIR_ADDITIVE_HE_OP_COUNTERS_H_

#include <atomic>
#include <cstdint>

namespace zippir {

// Plain snapshot of the process-wide Paillier operation counters.
struct OpCounts {
  uint64_t additions = 0;        // ciphertext (+) ciphertext
  uint64_t plain_additions = 0;  // ciphertext (+) trivial encryption
  uint64_t scalar_muls = 0;      // k (x) ciphertext
  uint64_t exponentiations = 0;  // any modular exponentiation in Z_{m^2}
  uint64_t encryptions = 0;
  uint64_t decryptions = 0;
  uint64_t samples = 0;

  OpCounts operator-(const OpCounts& other) const;
};

// Relaxed atomic counters incremented by every Paillier primitive. Tests take
// a snapshot before and after the code under measurement.
class OpCounters {
 public:
  static OpCounters& Global();

  OpCounts Snapshot() const;
  void Reset();

  void CountAdditions(uint64_t n = 1) { additions_.fetch_add(n, kOrder); }
  void CountPlainAdditions(uint64_t n = 1) {
    plain_additions_.fetch_add(n, kOrder);
  }
  void CountScalarMul() {
    scalar_muls_.fetch_add(1, kOrder);
    exponentiations_.fetch_add(1, kOrder);
  }
  void CountExponentiations(uint64_t n = 1) {
    exponentiations_.fetch_add(n, kOrder);
  }
  void CountEncryption() { encryptions_.fetch_add(1, kOrder); }
  void CountDecryption() { decryptions_.fetch_add(1, kOrder); }
  void CountSample() { samples_.fetch_add(1, kOrder); }

 private:
  static constexpr std::memory_order kOrder = std::memory_order_relaxed;

  std::atomic<uint64_t> additions_{0};
  std::atomic<uint64_t> plain_additions_{0};
  std::atomic<uint64_t> scalar_muls_{0};
  std::atomic<uint64_t> exponentiations_{0};
  std::atomic<uint64_t> encryptions_{0};
  std::atomic<uint64_t> decryptions_{0};
  std::atomic<uint64_t> samples_{0};
};

}  // namespace zippir

#endif  // ZIPPIR_ADDITIVE_HE_OP_COUNTERS_H_
