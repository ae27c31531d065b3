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

#include "zippir/rns/rns.h"

#include <algorithm>
#include <atomic>
#include <utility>

#include "absl/strings/str_cat.h"
#include "zippir/common/bigint.h"
#include "zippir/common/errors.h"
#include "zippir/common/parallel.h"

namespace zippir {
namespace {

constexpr unsigned __int128 kResidueMax = (uint64_t{1} << kMaxRnsPrimeBits) - 1;
static_assert(kLazyReductionInterval * kResidueMax * kResidueMax +
                      kResidueMax <=
                  ~uint64_t{0},
              "lazy accumulation would overflow 64 bits");

struct AtomicRnsCounters {
  std::atomic<uint64_t> multiply_adds{0};
  std::atomic<uint64_t> reductions{0};
  std::atomic<uint64_t> max_run{0};
};

AtomicRnsCounters& Counters() {
  static AtomicRnsCounters* counters = new AtomicRnsCounters();
  return *counters;
}

bool IsPrime(uint32_t n) {
  mpz_class z = n;
  return mpz_probab_prime_p(z.get_mpz_t(), 30) != 0;
}

uint32_t MulMod(uint32_t a, uint32_t b, uint32_t p) {
  return static_cast<uint32_t>(static_cast<uint64_t>(a) * b % p);
}

uint32_t InvMod(uint32_t a, uint32_t p) {
  mpz_class x = a, mod = p, inv;
  mpz_invert(inv.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
  return static_cast<uint32_t>(inv.get_ui());
}

}  // namespace

RnsCounters RnsCountersSnapshot() {
  auto& c = Counters();
  return RnsCounters{c.multiply_adds.load(std::memory_order_relaxed),
                     c.reductions.load(std::memory_order_relaxed),
                     c.max_run.load(std::memory_order_relaxed)};
}

void ResetRnsCounters() {
  auto& c = Counters();
  c.multiply_adds = 0;
  c.reductions = 0;
  c.max_run = 0;
}

RnsBasis::RnsBasis(std::vector<uint32_t> primes)
    : primes_(std::move(primes)), garner_(primes_.size()), product_(1) {
  for (size_t i = 0; i < primes_.size(); ++i) {
    uint32_t p = primes_[i];
    uint32_t prefix = 1;
    for (size_t j = 0; j < i; ++j) prefix = MulMod(prefix, primes_[j] % p, p);
    garner_[i] = InvMod(prefix, p);
    product_ *= p;
  }
}

absl::StatusOr<RnsBasis> RnsBasis::Build(unsigned prime_bits, size_t count) {
  if (prime_bits < 2 || prime_bits > kMaxRnsPrimeBits) {
    return InputError(
        absl::StrCat("prime size must be in [2, ", kMaxRnsPrimeBits, "] bits"));
  }
  if (count == 0) return InputError("basis needs at least one prime");
  const uint32_t lo = uint32_t{1} << (prime_bits - 1);
  std::vector<uint32_t> primes;
  for (uint32_t c = (uint32_t{1} << prime_bits) - 1;
       c >= lo && primes.size() < count; --c) {
    if (IsPrime(c)) primes.push_back(c);
  }
  if (primes.size() < count) {
    return InputError(absl::StrCat("only ", primes.size(), " primes of ",
                                   prime_bits, " bits, need ", count));
  }
  return RnsBasis(std::move(primes));
}

absl::StatusOr<RnsBasis> RnsBasis::FromPrimes(std::vector<uint32_t> primes) {
  if (primes.empty()) return InputError("basis needs at least one prime");
  for (size_t i = 0; i < primes.size(); ++i) {
    if (primes[i] >= (uint32_t{1} << kMaxRnsPrimeBits) || !IsPrime(primes[i])) {
      return InputError(absl::StrCat(primes[i], " is not a prime below 2^",
                                     kMaxRnsPrimeBits));
    }
    for (size_t j = 0; j < i; ++j) {
      if (primes[i] == primes[j]) return InputError("repeated basis prime");
    }
  }
  return RnsBasis(std::move(primes));
}

const RnsBasis& RnsBasis::Default() {
  static const RnsBasis* basis = new RnsBasis(*Build(27, 240));
  return *basis;
}

std::vector<uint32_t> RnsBasis::ToRns(const mpz_class& x) const {
  std::vector<uint32_t> out(primes_.size());
  for (size_t i = 0; i < primes_.size(); ++i) {
    out[i] = static_cast<uint32_t>(mpz_fdiv_ui(x.get_mpz_t(), primes_[i]));
  }
  return out;
}

mpz_class RnsBasis::FromRns(std::span<const uint32_t> residues) const {
  const size_t k = primes_.size();
  // Mixed-radix digits: x = d_0 + d_1 p_0 + d_2 p_0 p_1 + ...
  std::vector<uint32_t> digits(k);
  for (size_t i = 0; i < k; ++i) {
    const uint32_t p = primes_[i];
    uint32_t acc = 0;
    for (size_t j = i; j-- > 0;) {
      acc = static_cast<uint32_t>(
          (static_cast<uint64_t>(acc) * (primes_[j] % p) + digits[j] % p) % p);
    }
    uint32_t r = residues[i] % p;
    uint32_t diff = r >= acc ? r - acc : r + p - acc;
    digits[i] = MulMod(diff, garner_[i], p);
  }
  mpz_class x = 0;
  for (size_t i = k; i-- > 0;) {
    x *= primes_[i];
    x += digits[i];
  }
  return x;
}

absl::StatusOr<RnsMatrix> RnsMatrix::FromU64(
    const RnsBasis& basis, const std::vector<std::vector<uint64_t>>& rows) {
  const size_t r = rows.size();
  const size_t c = r == 0 ? 0 : rows[0].size();
  RnsMatrix out(r, c, basis.size());
  uint64_t max_entry = 0;
  for (size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) return InputError("ragged matrix");
    for (uint64_t x : rows[i]) max_entry = std::max(max_entry, x);
  }
  out.max_entry_ = ::zippir::FromU64(max_entry);
  ParallelFor(basis.size(), [&](size_t begin, size_t end) {
    for (size_t k = begin; k < end; ++k) {
      const uint32_t p = basis.primes()[k];
      uint32_t* lane = out.residues_.data() + k * r * c;
      for (size_t i = 0; i < r; ++i) {
        for (size_t j = 0; j < c; ++j) {
          lane[i * c + j] = static_cast<uint32_t>(rows[i][j] % p);
        }
      }
    }
  });
  return out;
}

absl::StatusOr<RnsMatrix> RnsMatrix::FromMpz(
    const RnsBasis& basis, const std::vector<std::vector<mpz_class>>& rows) {
  const size_t r = rows.size();
  const size_t c = r == 0 ? 0 : rows[0].size();
  RnsMatrix out(r, c, basis.size());
  for (size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) return InputError("ragged matrix");
    for (const mpz_class& x : rows[i]) {
      if (sgn(x) < 0) return InputError("matrix entries must be non-negative");
      if (x > out.max_entry_) out.max_entry_ = x;
    }
  }
  const size_t lane_size = r * c;
  ParallelFor(lane_size, [&](size_t begin, size_t end) {
    for (size_t e = begin; e < end; ++e) {
      std::vector<uint32_t> res = basis.ToRns(rows[e / c][e % c]);
      for (size_t k = 0; k < res.size(); ++k) {
        out.residues_[k * lane_size + e] = res[k];
      }
    }
  });
  return out;
}

absl::StatusOr<RnsMatMul> RnsMatMul::Create(const RnsBasis& basis, RnsMatrix h,
                                            const mpz_class& vector_bound) {
  if (vector_bound < 1) return InputError("vector bound must be positive");
  mpz_class worst = mpz_class(static_cast<unsigned long>(h.cols())) *
                    h.max_entry() * (vector_bound - 1);
  if (basis.product() <= worst) {
    return CapacityExceededError(absl::StrCat(
        "RNS basis product (", mpz_sizeinbase(basis.product().get_mpz_t(), 2),
        " bits) does not exceed the largest inner product (",
        mpz_sizeinbase(worst.get_mpz_t(), 2), " bits)"));
  }
  return RnsMatMul(basis, std::move(h), vector_bound);
}

absl::StatusOr<std::vector<mpz_class>> RnsMatMul::Multiply(
    std::span<const mpz_class> v, const mpz_class& m) const {
  if (m < 2) return InputError("modulus must be at least 2");
  const size_t rows = h_.rows(), cols = h_.cols();
  if (v.size() != cols) {
    return InputError(absl::StrCat("vector length ", v.size(),
                                   " differs from matrix width ", cols));
  }
  for (const mpz_class& x : v) {
    if (sgn(x) < 0 || x >= vector_bound_) {
      return InputError("vector entry outside the declared range");
    }
  }
  const size_t k_count = basis_->size();
  const auto& primes = basis_->primes();
  // v_rns[k * cols + j].
  std::vector<uint32_t> v_rns(k_count * cols);
  ParallelFor(cols, [&](size_t begin, size_t end) {
    for (size_t j = begin; j < end; ++j) {
      std::vector<uint32_t> r = basis_->ToRns(v[j]);
      for (size_t k = 0; k < k_count; ++k) v_rns[k * cols + j] = r[k];
    }
  });

  // out_rns[i * k_count + k].
  std::vector<uint32_t> out_rns(rows * k_count);
  std::atomic<uint64_t> reductions{0};
  std::atomic<uint64_t> max_run{0};
  ParallelFor(k_count, [&](size_t begin, size_t end) {
    uint64_t local_reductions = 0, local_max = 0;
    for (size_t k = begin; k < end; ++k) {
      const uint64_t p = primes[k];
      std::span<const uint32_t> lane = h_.lane(k);
      const uint32_t* vk = v_rns.data() + k * cols;
      for (size_t i = 0; i < rows; ++i) {
        const uint32_t* row = lane.data() + i * cols;
        uint64_t acc = 0;
        size_t run = 0;
        for (size_t j = 0; j < cols; ++j) {
          acc += static_cast<uint64_t>(row[j]) * vk[j];
          if (++run == kLazyReductionInterval) {
            acc %= p;
            ++local_reductions;
            local_max = std::max<uint64_t>(local_max, run);
            run = 0;
          }
        }
        local_max = std::max<uint64_t>(local_max, run);
        out_rns[i * k_count + k] = static_cast<uint32_t>(acc % p);
        ++local_reductions;
      }
    }
    reductions += local_reductions;
    uint64_t prev = max_run.load();
    while (prev < local_max &&
           !max_run.compare_exchange_weak(prev, local_max)) {
    }
  });
  auto& c = Counters();
  c.multiply_adds.fetch_add(rows * cols * k_count, std::memory_order_relaxed);
  c.reductions.fetch_add(reductions.load(), std::memory_order_relaxed);
  uint64_t prev = c.max_run.load();
  while (prev < max_run.load() &&
         !c.max_run.compare_exchange_weak(prev, max_run.load())) {
  }

  std::vector<mpz_class> out(rows);
  ParallelFor(rows, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      out[i] = basis_->FromRns(
          std::span<const uint32_t>(out_rns.data() + i * k_count, k_count));
      mpz_mod(out[i].get_mpz_t(), out[i].get_mpz_t(), m.get_mpz_t());
    }
  });
  return out;
}

}  // namespace zippir
