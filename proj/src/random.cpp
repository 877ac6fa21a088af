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

#include "bessplan/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bessplan {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
}

std::uint64_t mix64(std::uint64_t x) {
    x += kGamma;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

GaussianStream::GaussianStream(std::uint64_t master_seed, std::uint64_t path_index,
                               std::uint64_t stream) {
    // Three mix rounds give full avalanche between the seed components, so
    // (master, path, stream) triples map to effectively independent states.
    state_ = mix64(mix64(mix64(master_seed) + path_index) + stream);
}

std::uint64_t GaussianStream::next_u64() {
    state_ += kGamma;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double GaussianStream::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double GaussianStream::next_normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    // Box-Muller; u1 shifted into (0, 1] so the log never sees zero.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

WienerPath generate_path(Seed seed, std::size_t k_steps, double dt) {
    if (!std::isfinite(dt) || dt <= 0.0)
        throw std::invalid_argument("generate_path: dt must be finite and > 0");
    if (k_steps == 0)
        throw std::invalid_argument("generate_path: k_steps must be >= 1");

    GaussianStream g(seed.master_seed, seed.path_index, kStreamMg1);
    WienerPath path;
    path.dt = dt;
    path.values.resize(k_steps + 1);
    path.values[0] = 0.0;
    const double s = std::sqrt(dt);
    for (std::size_t k = 0; k < k_steps; ++k)
        path.values[k + 1] = path.values[k] + s * g.next_normal();
    return path;
}

}  // namespace bessplan
