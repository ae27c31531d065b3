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

#ifndef ZIPPIR_RNS_RNS_H_
#define ZIPPIR_RNS_RNS_H_

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace zippir {

// Products of two residues below 2^27 fit 54 bits, so 1024 of them can be
// summed onto a reduced accumulator without overflowing 64 bits.
inline constexpr unsigned kMaxRnsPrimeBits = 27;
inline constexpr size_t kLazyReductionInterval = 1024;

// Counters for the deferred-reduction kernel.
struct RnsCounters {
  uint64_t multiply_adds = 0;
  uint64_t reductions = 0;
  // Longest run of multiply-adds between two reductions.
  uint64_t max_run = 0;
};
RnsCounters RnsCountersSnapshot();
void ResetRnsCounters();

// Pairwise distinct primes with Garner constants for reconstruction.
class RnsBasis {
 public:
  // The `count` largest primes of exactly `prime_bits` bits, descending.
  static absl::StatusOr<RnsBasis> Build(unsigned prime_bits, size_t count);
  // Explicit primes, each below 2^27.
  static absl::StatusOr<RnsBasis> FromPrimes(std::vector<uint32_t> primes);
  // 240 primes of 27 bits.
  static const RnsBasis& Default();

  size_t size() const { return primes_.size(); }
  const std::vector<uint32_t>& primes() const { return primes_; }
  // Product of all primes.
  const mpz_class& product() const { return product_; }

  std::vector<uint32_t> ToRns(const mpz_class& x) const;
  // The unique value in [0, Q) with the given residues.
  mpz_class FromRns(std::span<const uint32_t> residues) const;

 private:
  explicit RnsBasis(std::vector<uint32_t> primes);

  std::vector<uint32_t> primes_;
  // garner_[i] = (p_0 * ... * p_{i-1})^{-1} mod p_i.
  std::vector<uint32_t> garner_;
  mpz_class product_;
};

// Matrix of integers below a known bound, stored per prime.
class RnsMatrix {
 public:
  static absl::StatusOr<RnsMatrix> FromU64(
      const RnsBasis& basis, const std::vector<std::vector<uint64_t>>& rows);
  static absl::StatusOr<RnsMatrix> FromMpz(
      const RnsBasis& basis, const std::vector<std::vector<mpz_class>>& rows);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  // Largest entry.
  const mpz_class& max_entry() const { return max_entry_; }
  // Row-major residues for prime k.
  std::span<const uint32_t> lane(size_t k) const {
    return {residues_.data() + k * rows_ * cols_, rows_ * cols_};
  }

 private:
  RnsMatrix(size_t rows, size_t cols, size_t primes)
      : rows_(rows), cols_(cols), residues_(rows * cols * primes) {}

  size_t rows_;
  size_t cols_;
  mpz_class max_entry_ = 0;
  std::vector<uint32_t> residues_;
};

// H * v mod m over a basis whose product exceeds every inner product.
class RnsMatMul {
 public:
  // Checks Q > cols * max(H) * (vector_bound - 1). Vector entries must be
  // below `vector_bound`.
  static absl::StatusOr<RnsMatMul> Create(const RnsBasis& basis, RnsMatrix h,
                                          const mpz_class& vector_bound);

  const RnsMatrix& matrix() const { return h_; }
  const mpz_class& vector_bound() const { return vector_bound_; }

  absl::StatusOr<std::vector<mpz_class>> Multiply(std::span<const mpz_class> v,
                                                  const mpz_class& m) const;

 private:
  RnsMatMul(const RnsBasis& basis, RnsMatrix h, mpz_class vector_bound)
      : basis_(&basis),
        h_(std::move(h)),
        vector_bound_(std::move(vector_bound)) {}

  const RnsBasis* basis_;
  RnsMatrix h_;
  mpz_class vector_bound_;
};

}  // namespace zippir

#endif  // ZIPPIR_RNS_RNS_H_
