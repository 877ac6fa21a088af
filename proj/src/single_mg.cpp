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

#include "bessplan/single_mg.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "bessplan/first_passage.hpp"

namespace bessplan {

namespace {

double closed_form_n(const SystemParams& p) {
    return std::sqrt(8.0 * p.sigma * p.sigma * p.t_f * std::log(2.0 / p.delta)) /
           p.b_max;
}

/// Bisection for the smallest n with g(n) <= target, where g is strictly
/// decreasing. Keeps g(hi) <= target < g(lo) and returns hi.
double bisect_decreasing(const std::function<double(double)>& g, double lo, double hi,
                         double target, double rel_tol) {
    while (hi - lo > rel_tol * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) <= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace

double chernoff_bound_f(const SystemParams& params, double n) {
    params.validate();
    if (!(n >= 0.0))
        throw std::invalid_argument("chernoff_bound_f: n must be >= 0");
    const double nb = n * params.b_max;
    const double denom = 2.0 * params.sigma * params.sigma * params.t_f;
    const double up = 1.0 - params.alpha;
    return std::exp(-nb * nb * up * up / denom) +
           std::exp(-nb * nb * params.alpha * params.alpha / denom);
}

SizingOutcome solve_single_mg(const SystemParams& params, RoundingMode mode) {
    SystemParams p = params;
    p.alpha = 0.5;
    p.validate();
    return make_sizing_outcome(closed_form_n(p), 0.5, p.b_max, mode);
}

double n_of_alpha(const SystemParams& params) {
    params.validate();
    if (params.alpha <= 0.0 || params.alpha >= 1.0)
        throw std::invalid_argument(
            "n_of_alpha: alpha in {0,1} is infeasible (the bound stays above 1)");

    const double span = std::min(params.alpha, 1.0 - params.alpha);
    double hi = 10.0 * closed_form_n(params) / span;
    while (chernoff_bound_f(params, hi) > params.delta) hi *= 2.0;
    return bisect_decreasing([&](double n) { return chernoff_bound_f(params, n); },
                             0.0, hi, params.delta, 1e-10);
}

double exact_violation_prob(const SystemParams& params, double n) {
    return first_passage_prob_upper(params, n) + first_passage_prob_lower(params, n);
}

RateDiagnostic rate_constant_diagnostic(const SystemParams& params,
                                        std::span<const double> t_f_grid) {
    params.validate();
    if (t_f_grid.empty())
        throw std::invalid_argument("rate_constant_diagnostic: empty horizon grid");
    if (params.alpha <= 0.0 || params.alpha >= 1.0)
        throw std::invalid_argument("rate_constant_diagnostic: alpha must lie in (0,1)");

    RateDiagnostic diag;
    diag.c_tilde = std::sqrt(8.0 * std::log(2.0 / params.delta)) / params.b_max;

    double lo_exact = 0.0, hi_exact = 0.0, lo_chern = 0.0, hi_chern = 0.0;
    for (double t_f : t_f_grid) {
        SystemParams p = params;
        p.t_f = t_f;
        p.validate();

        const double n_chern = n_of_alpha(p);
        // The exact level sits below the bound everywhere, so its root sits
        // below the bound's root; bisect inside [~0, n_chern].
        const double n_exact = bisect_decreasing(
            [&](double n) { return exact_violation_prob(p, n); }, 1e-12 * n_chern,
            n_chern, p.delta, 1e-12);
        diag.rows.push_back({t_f, n_exact, n_chern});

        const double scale = std::abs(p.sigma) * std::sqrt(t_f);
        const double re = n_exact / scale;
        const double rc = n_chern / scale;
        if (diag.rows.size() == 1) {
            lo_exact = hi_exact = re;
            lo_chern = hi_chern = rc;
        } else {
            lo_exact = std::min(lo_exact, re);
            hi_exact = std::max(hi_exact, re);
            lo_chern = std::min(lo_chern, rc);
            hi_chern = std::max(hi_chern, rc);
        }
    }
    diag.max_rel_spread_exact = (hi_exact - lo_exact) / hi_exact;
    diag.max_rel_spread_chernoff = (hi_chern - lo_chern) / hi_chern;
    return diag;
}

}  // namespace bessplan
