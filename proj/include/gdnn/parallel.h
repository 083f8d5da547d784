/* Copyright 2026 The GroupDNN Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef GDNN_PARALLEL_H_
#define GDNN_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace gdnn {

// Worker count used by ParallelFor: GDNN_THREADS if set, otherwise the
// hardware concurrency.
int DefaultThreadCount();

// Splits [0, n) into contiguous chunks and runs fn(begin, end) on up to
// `threads` threads (0 = DefaultThreadCount()). The first exception thrown by
// any chunk is rethrown on the caller's thread. Callers that need
// reproducible sums must write per-index results and reduce them afterwards
// in index order.
void ParallelFor(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn,
                 int threads = 0);

}  // namespace gdnn

#endif  // GDNN_PARALLEL_H_
