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

#include "bessplan/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace bessplan {

unsigned effective_threads(unsigned requested) {
    unsigned n = requested;
    if (n == 0) {
        n = std::thread::hardware_concurrency();
        if (n == 0) n = 1;
    }
    if (const char* cap = std::getenv("BESS_PLAN_THREADS")) {
        const long v = std::strtol(cap, nullptr, 10);
        if (v > 0) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    }
    return std::max(1u, n);
}

void parallel_for(std::uint64_t n, unsigned n_threads,
                  const std::function<void(std::uint64_t, std::uint64_t)>& fn) {
    n_threads = std::max(1u, n_threads);
    if (n == 0) return;
    if (n_threads == 1 || n < 2 * n_threads) {
        fn(0, n);
        return;
    }
    const std::uint64_t chunk = (n + n_threads - 1) / n_threads;
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(n_threads);
    workers.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
        const std::uint64_t begin = t * chunk;
        if (begin >= n) break;
        const std::uint64_t end = std::min(n, begin + chunk);
        workers.emplace_back([&fn, &errors, t, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace bessplan
