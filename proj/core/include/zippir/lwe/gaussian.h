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

#ifndef ZIPPIR_LWE_GAUSSIAN_H_
#define ZIPPIR_LWE_GAUSSIAN_H_

#include <cstdint>
#include <vector>

#include "zippir/common/prng.h"

namespace zippir {

// Discrete Gaussian over [-6 sigma, 6 sigma] by inverse CDF. The CDF table
// holds 64-bit fixed-point probabilities; sigma = 0 always yields 0.
class DiscreteGaussian {
 public:
  explicit DiscreteGaussian(double sigma);

  int64_t Sample(Prng& rng) const;
  double sigma() const { return sigma_; }
  int64_t tail_bound() const { return bound_; }

 private:
  double sigma_;
  int64_t bound_;
  // cdf_[k] = floor(2^64 * P(X <= k - bound_)), saturated; the final bucket
  // absorbs rounding.
  std::vector<uint64_t> cdf_;
};

}  // namespace zippir

#endif  // ZIPPIR_LWE_GAUSSIAN_H_
