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

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "bessplan/first_passage.hpp"
#include "bessplan/mc.hpp"
#include "bessplan/parallel.hpp"
#include "bessplan/random.hpp"

using namespace bessplan;

namespace {
SystemParams reference_params() {
    SystemParams p;
    p.sigma = 1.0;
    p.b_max = 1.0;
    p.delta = 0.02;
    p.t_f = 5.0;
    p.alpha = 0.5;
    return p;
}
}  // namespace

TEST_CASE("reference value at n = 13.572 (mpmath, 30 digits)") {
    const SystemParams p = reference_params();
    CHECK(std::abs(first_passage_prob_upper(p, 13.572) - 0.00240702057574533376) <= 1e-13);
    CHECK(std::abs(first_passage_prob_lower(p, 13.572) - 0.00240702057574533376) <= 1e-13);
}

TEST_CASE("starting on a barrier gives probability one") {
    SystemParams p = reference_params();
    p.alpha = 1.0;
    CHECK(first_passage_prob_upper(p, 13.572) == 1.0);
    p.alpha = 0.0;
    CHECK(first_passage_prob_lower(p, 13.572) == 1.0);
}

TEST_CASE("symmetric start makes the two barrier probabilities equal") {
    const SystemParams p = reference_params();
    for (double n : {0.5, 3.0, 8.0, 13.572, 20.0})
        CHECK(first_passage_prob_upper(p, n) == first_passage_prob_lower(p, n));
}

TEST_CASE("strictly decreasing in n, vanishing in the limit") {
    const SystemParams p = reference_params();
    double prev = 2.0;
    for (double n = 0.5; n <= 40.0; n += 0.5) {
        const double cur = first_passage_prob_upper(p, n);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(first_passage_prob_upper(p, 1e4) == 0.0);
}

TEST_CASE("input validation") {
    SystemParams p = reference_params();
    CHECK_THROWS_AS(first_passage_prob_upper(p, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(first_passage_prob_upper(p, -1.0), std::invalid_argument);
    p.sigma = 0.0;
    CHECK_THROWS_AS(first_passage_prob_upper(p, 1.0), std::invalid_argument);
    p = reference_params();
    p.t_f = 0.0;
    CHECK_THROWS_AS(first_passage_prob_lower(p, 1.0), std::invalid_argument);
}

TEST_CASE("grid-monitored crossing fraction agrees with the exact probability") {
    // Fine grid (dt = t_f / 2400): the discrete running max undercounts
    // continuous crossings, but stays within the Monte Carlo band.
    SystemParams p = reference_params();
    const double n = 8.0;
    const double nb = n * p.b_max;
    const double x0 = p.alpha * nb;
    constexpr std::uint64_t kPaths = 100000;
    constexpr std::uint32_t kSteps = 2400;
    const double dt = p.t_f / kSteps;
    const double sdt = p.sigma * std::sqrt(dt);

    std::vector<unsigned char> crossed(kPaths, 0);
    parallel_for(kPaths, effective_threads(0), [&](std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t path = b; path < e; ++path) {
            GaussianStream g(515, path, kStreamMg1);
            double x = x0;
            for (std::uint32_t k = 0; k < kSteps; ++k) {
                x += sdt * g.next_normal();
                if (x >= nb) {
                    crossed[path] = 1;
                    break;
                }
            }
        }
    });
    std::uint64_t hits = 0;
    for (unsigned char c : crossed) hits += c;

    const double exact = first_passage_prob_upper(p, n);
    const double empirical = static_cast<double>(hits) / kPaths;
    const Confidence ci = wilson_interval(hits, kPaths);
    CHECK(empirical <= exact);  // grid monitoring only underestimates
    CHECK(std::abs(empirical - exact) <= 3.0 * ci.half_width());
}
