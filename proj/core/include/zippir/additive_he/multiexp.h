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

#ifndef ZIPPIR_ADDITIVE_HE_MULTIEXP_H_
#define ZIPPIR_ADDITIVE_HE_MULTIEXP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "zippir/additive_he/paillier.h"

namespace zippir {

// Evaluates sum_i e_i (x) base_i for many exponent vectors over one fixed set
// of ciphertexts, using only Paillier additions.
//
// The table holds base_i scaled by 2^(w*k) for every window k. Evaluation
// drops each exponent digit into one of 2^w - 1 buckets and folds the buckets
// with a running sum. With w = 1 the table is the doubling ladder and the
// evaluation adds one table entry per set bit.
class FixedBaseMultiExp {
 public:
  FixedBaseMultiExp(const PaillierPublicKey& pk,
                    std::vector<PaillierCiphertext> bases, unsigned exp_bits,
                    unsigned window_bits);

  // Window minimizing num_bases * ceil(exp_bits / w) + 2^(w+1).
  static unsigned OptimalWindow(size_t num_bases, unsigned exp_bits);

  size_t num_bases() const { return num_bases_; }
  unsigned exp_bits() const { return exp_bits_; }
  unsigned window_bits() const { return window_bits_; }
  unsigned num_windows() const { return num_windows_; }
  const PaillierPublicKey& public_key() const { return pk_; }

  // base_i scaled by 2^(window_bits * window).
  const PaillierCiphertext& Entry(unsigned window, size_t i) const {
    return table_[window * num_bases_ + i];
  }

  // acc (+)= sum_i exps[i] (x) base_i. Exponents must be below 2^exp_bits.
  void Accumulate(std::span<const uint64_t> exps,
                  PaillierCiphertext& acc) const;
  // Same sum starting from the encryption of zero with unit randomness.
  PaillierCiphertext Evaluate(std::span<const uint64_t> exps) const;

 private:
  PaillierPublicKey pk_;
  size_t num_bases_;
  unsigned exp_bits_;
  unsigned window_bits_;
  unsigned num_windows_;
  std::vector<PaillierCiphertext> table_;
};

}  // namespace zippir

#endif  // ZIPPIR_ADDITIVE_HE_MULTIEXP_H_
