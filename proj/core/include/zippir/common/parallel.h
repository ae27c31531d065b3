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

#ifndef ZIPPIR_COMMON_PARALLEL_H_
#define ZIPPIR_COMMON_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace zippir {

// Worker count used by ParallelFor. Defaults to the hardware concurrency and
// can be overridden (0 restores the default).
size_t WorkerCount();
void SetWorkerCount(size_t workers);

// Splits [0, count) into contiguous chunks and runs `body(begin, end)` on
// each, using up to WorkerCount() threads. Runs inline with one worker.
void ParallelFor(size_t count,
                 const std::function<void(size_t begin, size_t end)>& body);

}  // namespace zippir

#endif  // ZIPPIR_COMMON_PARALLEL_H_
