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

#include "zippir/additive_he/multiexp.h"

#include <limits>
#include <stdexcept>
#include <utility>

namespace zippir {

FixedBaseMultiExp::FixedBaseMultiExp(const PaillierPublicKey& pk,
                                     std::vector<PaillierCiphertext> bases,
                                     unsigned exp_bits, unsigned window_bits)
    : pk_(pk),
      num_bases_(bases.size()),
      exp_bits_(exp_bits),
      window_bits_(window_bits) {
  if (exp_bits_ == 0 || exp_bits_ > 64) {
    throw std::invalid_argument("exponent width must be in [1, 64]");
  }
  if (window_bits_ == 0 || window_bits_ > 16) {
    throw std::invalid_argument("window width must be in [1, 16]");
  }
  num_windows_ = (exp_bits_ + window_bits_ - 1) / window_bits_;
  table_.reserve(num_windows_ * num_bases_);
  for (auto& b : bases) table_.push_back(std::move(b));
  for (unsigned k = 1; k < num_windows_; ++k) {
    for (size_t i = 0; i < num_bases_; ++i) {
      PaillierCiphertext v = table_[(k - 1) * num_bases_ + i];
      for (unsigned s = 0; s < window_bits_; ++s) pk_.AddInPlace(v, v);
      table_.push_back(std::move(v));
    }
  }
}

unsigned FixedBaseMultiExp::OptimalWindow(size_t num_bases, unsigned exp_bits) {
  unsigned best = 1;
  double best_cost = std::numeric_limits<double>::infinity();
  for (unsigned w = 1; w <= 16; ++w) {
    double cost = static_cast<double>(num_bases) * ((exp_bits + w - 1) / w) +
                  static_cast<double>(uint64_t{2} << w);
    if (cost < best_cost) {
      best_cost = cost;
      best = w;
    }
  }
  return best;
}

void FixedBaseMultiExp::Accumulate(std::span<const uint64_t> exps,
                                   PaillierCiphertext& acc) const {
  if (exps.size() != num_bases_) {
    throw std::invalid_argument("exponent count does not match base count");
  }
  const size_t num_buckets = size_t{1} << window_bits_;
  const uint64_t mask = num_buckets - 1;
  std::vector<PaillierCiphertext> buckets(num_buckets);
  std::vector<bool> used(num_buckets, false);
  for (unsigned k = 0; k < num_windows_; ++k) {
    const unsigned shift = k * window_bits_;
    for (size_t i = 0; i < num_bases_; ++i) {
      const uint64_t digit = (exps[i] >> shift) & mask;
      if (digit == 0) continue;
      const PaillierCiphertext& entry = table_[k * num_bases_ + i];
      if (used[digit]) {
        pk_.AddInPlace(buckets[digit], entry);
      } else {
        buckets[digit] = entry;
        used[digit] = true;
      }
    }
  }
  // Bucket d contributes d times: the running sum of buckets >= d is added
  // once for every d.
  PaillierCiphertext running, total;
  bool have_running = false, have_total = false;
  for (size_t d = num_buckets - 1; d >= 1; --d) {
    if (used[d]) {
      if (have_running) {
        pk_.AddInPlace(running, buckets[d]);
      } else {
        running = std::move(buckets[d]);
        have_running = true;
      }
    }
    if (!have_running) continue;
    if (have_total) {
      pk_.AddInPlace(total, running);
    } else {
      total = running;
      have_total = true;
    }
  }
  if (have_total) pk_.AddInPlace(acc, total);
}

PaillierCiphertext FixedBaseMultiExp::Evaluate(
    std::span<const uint64_t> exps) const {
  PaillierCiphertext acc = pk_.TrivialEncrypt(0);
  Accumulate(exps, acc);
  return acc;
}

}  // namespace zippir
