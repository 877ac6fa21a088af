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

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bessplan {

/// Identifies one simulated path. The same (master_seed, path_index) always
/// reproduces the same path bit for bit, no matter how work is scheduled.
struct Seed {
    std::uint64_t master_seed = 0;
    std::uint64_t path_index = 0;
};

/// Stream tags keep the random draws of the two Wiener drivers and of the
/// optional bridge-crossing decisions fully decoupled, so e.g. toggling the
/// bridge correction never changes the underlying paths.
inline constexpr std::uint64_t kStreamMg1 = 0;
inline constexpr std::uint64_t kStreamMg2 = 1;
inline constexpr std::uint64_t kStreamBridge = 2;

/// splitmix64 finalizer; full-avalanche 64-bit mix.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic per-path Gaussian stream: splitmix64 state seeded from
/// (master_seed, path_index, stream), Box-Muller with both branches used.
/// The generator is fully specified here rather than delegated to
/// std::normal_distribution, whose output is implementation-defined.
class GaussianStream {
  public:
    GaussianStream(std::uint64_t master_seed, std::uint64_t path_index,
                   std::uint64_t stream = kStreamMg1);

    double next_normal();

    /// Uniform draw in [0, 1).
    double next_uniform();

  private:
    std::uint64_t next_u64();

    std::uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// Cumulative Wiener values on a uniform grid; values[0] == 0 and
/// values[k+1] - values[k] ~ N(0, dt), independent across k.
struct WienerPath {
    double dt = 0.0;  ///< step, hours
    std::vector<double> values;

    std::size_t k_steps() const { return values.empty() ? 0 : values.size() - 1; }
};

/// Rejects k_steps == 0 and dt <= 0. Pure function of its arguments; safe to
/// call from any number of threads concurrently.
WienerPath generate_path(Seed seed, std::size_t k_steps, double dt);

}  // namespace bessplan
