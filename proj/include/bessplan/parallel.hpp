/*
   Copyright 2026 The bessplan authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <functional>

namespace bessplan {

/// Worker count: `requested` (0 = hardware concurrency), capped by the
/// BESS_PLAN_THREADS environment variable when set.
unsigned effective_threads(unsigned requested);

/// Runs fn over [0, n) split into contiguous chunks, one per worker. Callers
/// write results into per-index slots, so output never depends on scheduling.
void parallel_for(std::uint64_t n, unsigned n_threads,
                  const std::function<void(std::uint64_t begin, std::uint64_t end)>& fn);

}  // namespace bessplan
