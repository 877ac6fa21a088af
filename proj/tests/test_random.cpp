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

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "bessplan/random.hpp"

using namespace bessplan;

TEST_CASE("generate_path is a pure function of its seed") {
    const WienerPath a = generate_path({42, 0}, 1, 1.0);
    const WienerPath b = generate_path({42, 0}, 1, 1.0);
    REQUIRE(a.values.size() == 2);
    CHECK(a.values[0] == 0.0);
    CHECK(a.values[1] == b.values[1]);

    const WienerPath c = generate_path({42, 1}, 1, 1.0);
    CHECK(a.values[1] != c.values[1]);
}

TEST_CASE("paths are identical whether generated serially or from threads") {
    constexpr int kPaths = 64;
    std::vector<WienerPath> serial(kPaths), threaded(kPaths);
    for (int p = 0; p < kPaths; ++p)
        serial[p] = generate_path({7, static_cast<std::uint64_t>(p)}, 16, 0.5);

    std::vector<std::thread> workers;
    for (int t = 0; t < 8; ++t) {
        workers.emplace_back([&, t] {
            for (int p = t; p < kPaths; p += 8)
                threaded[p] = generate_path({7, static_cast<std::uint64_t>(p)}, 16, 0.5);
        });
    }
    for (auto& w : workers) w.join();

    for (int p = 0; p < kPaths; ++p)
        for (std::size_t k = 0; k < serial[p].values.size(); ++k)
            CHECK(serial[p].values[k] == threaded[p].values[k]);
}

TEST_CASE("generate_path rejects degenerate arguments") {
    CHECK_THROWS_AS(generate_path({1, 0}, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(generate_path({1, 0}, 10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(generate_path({1, 0}, 10, -0.5), std::invalid_argument);
}

TEST_CASE("first increments have the right mean and variance at dt = 0.25") {
    constexpr std::uint64_t kPaths = 100000;
    const double dt = 0.25;
    double sum = 0.0, sum2 = 0.0;
    for (std::uint64_t p = 0; p < kPaths; ++p) {
        const WienerPath path = generate_path({2026, p}, 1, dt);
        const double inc = path.values[1];
        sum += inc;
        sum2 += inc * inc;
    }
    const double mean = sum / kPaths;
    const double var = sum2 / kPaths - mean * mean;
    CHECK(var >= 0.245);
    CHECK(var <= 0.255);
    // 5 sigma of the mean estimator.
    CHECK(std::abs(mean) <= 5.0 * std::sqrt(dt / kPaths));
}

TEST_CASE("terminal value of a 600-step path at dt = 1/120 is N(0, 5)") {
    constexpr std::uint64_t kPaths = 100000;
    const double dt = 1.0 / 120.0;
    double sum = 0.0, sum2 = 0.0;
    for (std::uint64_t p = 0; p < kPaths; ++p) {
        const WienerPath path = generate_path({7, p}, 600, dt);
        const double w = path.values[600];
        sum += w;
        sum2 += w * w;
    }
    const double mean = sum / kPaths;
    const double var = sum2 / kPaths - mean * mean;
    CHECK(std::abs(mean) <= 3.0 * std::sqrt(5.0 / kPaths));
    CHECK(std::abs(var - 5.0) <= 5.0 * 5.0 * std::sqrt(2.0 / kPaths));
}

TEST_CASE("stream tags decouple the per-path generators") {
    GaussianStream a(9, 4, kStreamMg1);
    GaussianStream b(9, 4, kStreamMg2);
    bool any_diff = false;
    for (int i = 0; i < 8; ++i)
        if (a.next_normal() != b.next_normal()) any_diff = true;
    CHECK(any_diff);
}
