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

#include "zippir/common/parallel.h"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace zippir {
namespace {

std::atomic<size_t> g_worker_override{0};

}  // namespace

size_t WorkerCount() {
  size_t override_count = g_worker_override.load(std::memory_order_relaxed);
  if (override_count != 0) return override_count;
  return std::max<size_t>(1, std::thread::hardware_concurrency());
}

void SetWorkerCount(size_t workers) {
  g_worker_override.store(workers, std::memory_order_relaxed);
}

void ParallelFor(size_t count,
                 const std::function<void(size_t begin, size_t end)>& body) {
  if (count == 0) return;
  size_t workers = std::min(WorkerCount(), count);
  if (workers <= 1) {
    body(0, count);
    return;
  }
  size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (size_t w = 1; w < workers; ++w) {
    size_t begin = w * chunk;
    size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(0, std::min(count, chunk));
  for (auto& t : threads) t.join();
}

}  // namespace zippir
