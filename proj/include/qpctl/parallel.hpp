// Copyright 2026 The qpctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <exception>

#include <omp.h>

namespace qpctl {

/// Selects the OpenMP kernel or its serial reference. Both paths run the same
/// per-item work, so results are identical item by item.
enum class Execution { Serial, Parallel };

/// Runs fn(i) for i in [0, count). The first exception thrown by any item is
/// rethrown on the calling thread after the loop.
template <class Fn>
void parallel_for(int count, Execution exec, Fn&& fn, int max_threads = 0) {
  if (exec == Execution::Serial || count < 2) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  const int threads = max_threads > 0 ? max_threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(qpctl_parallel_for_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace qpctl
