// Copyright 2026 The Cadenza Eval Authors. All Rights Reserved.
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

#ifndef CADENZA_PARALLEL_H_
#define CADENZA_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace cadenza {

// Calls fn(i) for every i in [0, n) using up to `jobs` threads (the calling
// thread included). Indices are handed out dynamically, so `fn` must write
// its result to a slot owned by `i` for the outcome to be order-independent.
void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn);

// Number of worker threads to use when the caller asked for `jobs` (<= 0
// means one per hardware thread).
int ResolveJobs(int jobs);

}  // namespace cadenza

#endif  // CADENZA_PARALLEL_H_
