/*
 * Copyright 2026 The motif-shap Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MOTIF_SHAP_PARALLEL_HPP_
#define MOTIF_SHAP_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace motif_shap {

// Hardware concurrency, capped by the MOTIF_SHAP_THREADS environment variable
// when it holds a positive integer.
std::size_t DefaultWorkerCount();

// Splits [0, count) into contiguous chunks, one per worker, and runs
// body(begin, end) on each. The first exception thrown by any chunk is
// rethrown after all workers have joined. workers == 0 means
// DefaultWorkerCount().
void ParallelFor(std::size_t count, std::size_t workers,
                 const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace motif_shap

#endif  // MOTIF_SHAP_PARALLEL_HPP_
