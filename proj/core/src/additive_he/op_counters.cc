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

#include "zippir/additive_he/op_counters.h"

namespace zippir {

OpCounts OpCounts::operator-(const OpCounts& other) const {
  OpCounts d;
  d.additions = additions - other.additions;
  d.plain_additions = plain_additions - other.plain_additions;
  d.scalar_muls = scalar_muls - other.scalar_muls;
  d.exponentiations = exponentiations - other.exponentiations;
  d.encryptions = encryptions - other.encryptions;
  d.decryptions = decryptions - other.decryptions;
  d.samples = samples - other.samples;
  return d;
}

OpCounters& OpCounters::Global() {
  static OpCounters* counters = new OpCounters();
  return *counters;
}

OpCounts OpCounters::Snapshot() const {
  OpCounts s;
  s.additions = additions_.load(kOrder);
  s.plain_additions = plain_additions_.load(kOrder);
  s.scalar_muls = scalar_muls_.load(kOrder);
  s.exponentiations = exponentiations_.load(kOrder);
  s.encryptions = encryptions_.load(kOrder);
  s.decryptions = decryptions_.load(kOrder);
  s.samples = samples_.load(kOrder);
  return s;
}

void OpCounters::Reset() {
  additions_.store(0, kOrder);
  plain_additions_.store(0, kOrder);
  scalar_muls_.store(0, kOrder);
  exponentiations_.store(0, kOrder);
  encryptions_.store(0, kOrder);
  decryptions_.store(0, kOrder);
  samples_.store(0, kOrder);
}

}  // namespace zippir
