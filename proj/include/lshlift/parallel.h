// Copyright 2026 The lshlift Authors
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

#include <cstddef>
#include <functional>

namespace lshlift {

/// Worker cap for all parallel loops in the library. 0 means "all cores".
void set_thread_count(std::size_t threads);
std::size_t thread_count();

/// Calls fn(begin, end) on disjoint contiguous chunks covering [0, n).
/// Callers write results into per-index slots, so output never depends on
/// the number of workers. After all workers join, the exception of the
/// lowest-indexed failing chunk is rethrown.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace lshlift
