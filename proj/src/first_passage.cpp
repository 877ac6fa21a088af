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

#include "bessplan/first_passage.hpp"

#include <cmath>
#include <stdexcept>

#include "bessplan/normal.hpp"

namespace bessplan {

namespace {
double hit_probability(double distance_kwh, double sigma, double t_f) {
    // Reflection principle: a driftless Brownian motion started distance d
    // from a one-sided barrier reaches it within t_f with probability
    // 2 * (1 - Phi(d / (|sigma| sqrt(t_f)))).
    const double z = distance_kwh / (std::abs(sigma) * std::sqrt(t_f));
    return 2.0 * (1.0 - std_normal_cdf(z));
}
}  // namespace

double first_passage_prob_upper(const SystemParams& params, double n) {
    params.validate();
    if (!(n > 0.0))
        throw std::invalid_argument("first_passage_prob_upper: n must be > 0");
    return hit_probability(n * params.b_max * (1.0 - params.alpha), params.sigma,
                           params.t_f);
}

double first_passage_prob_lower(const SystemParams& params, double n) {
    params.validate();
    if (!(n > 0.0))
        throw std::invalid_argument("first_passage_prob_lower: n must be > 0");
    return hit_probability(n * params.b_max * params.alpha, params.sigma, params.t_f);
}

}  // namespace bessplan
