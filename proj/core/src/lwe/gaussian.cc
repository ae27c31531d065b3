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

#include "zippir/lwe/gaussian.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zippir {

DiscreteGaussian::DiscreteGaussian(double sigma)
    : sigma_(sigma),
      bound_(sigma > 0 ? static_cast<int64_t>(std::ceil(6.0 * sigma)) : 0) {
  if (bound_ == 0) return;
  std::vector<long double> weights;
  long double total = 0;
  for (int64_t x = -bound_; x <= bound_; ++x) {
    long double w =
        std::exp(-static_cast<long double>(x) * x / (2.0L * sigma_ * sigma_));
    weights.push_back(w);
    total += w;
  }
  const long double scale = 18446744073709551616.0L;  // 2^64
  long double running = 0;
  cdf_.reserve(weights.size());
  for (long double w : weights) {
    running += w;
    long double v = std::floor(running / total * scale);
    cdf_.push_back(v >= scale ? std::numeric_limits<uint64_t>::max()
                              : static_cast<uint64_t>(v));
  }
  cdf_.back() = std::numeric_limits<uint64_t>::max();
}

int64_t DiscreteGaussian::Sample(Prng& rng) const {
  if (cdf_.empty()) return 0;
  uint64_t u = rng.NextU64();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<int64_t>(it - cdf_.begin()) - bound_;
}

}  // namespace zippir
