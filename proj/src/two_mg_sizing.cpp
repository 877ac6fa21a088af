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

#include "bessplan/two_mg_sizing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bessplan/mc.hpp"
#include "bessplan/parallel.hpp"
#include "bessplan/random.hpp"
#include "bessplan/transfer_policy.hpp"

namespace bessplan {

namespace {
constexpr double kBetaResolution = 0.1;  // kWh
constexpr std::uint32_t kBetaSteps = 40000;
}  // namespace

BetaCalibration calibrate_beta(const TwoMgParams& params, std::uint64_t n_paths,
                               std::uint64_t seed) {
    params.validate();
    if (!(params.p_line_kw > 0.0))
        throw std::invalid_argument("calibrate_beta: p_line_kw must be > 0");
    if (n_paths < 10000)
        throw std::invalid_argument("calibrate_beta: n_paths must be >= 10^4");

    const SystemParams& base = params.base;
    const double dt = base.t_f / kBetaSteps;
    const double sdt = base.sigma * std::sqrt(dt);
    const TransferPolicy law = TransferPolicy::discrete_kkt(params.p_line_kw, dt);

    // The difference process is autonomous: it starts at zero and the
    // transfer enters with a factor of two, so it can be simulated without
    // any capacity in sight. The discrete transfer law is used on this fine
    // internal grid; the saturated branch matches the full-rate law and the
    // linear branch resets the mean to zero without overshoot.
    std::vector<double> sups(n_paths, 0.0);
    parallel_for(n_paths, effective_threads(0), [&](std::uint64_t pb, std::uint64_t pe) {
        for (std::uint64_t p = pb; p < pe; ++p) {
            GaussianStream noise1(seed, p, kStreamMg1);
            GaussianStream noise2(seed, p, kStreamMg2);
            double xd = 0.0;  // X_2 - X_1
            double sup = 0.0;
            for (std::uint32_t k = 0; k < kBetaSteps; ++k) {
                const double p12 = law.transfer(-xd, 0.0);  // law of x1 - x2 only
                xd += 2.0 * p12 * dt + sdt * (noise2.next_normal() - noise1.next_normal());
                sup = std::max(sup, std::abs(xd));
            }
            sups[p] = sup;
        }
    });
    std::sort(sups.begin(), sups.end());

    const double target = base.delta / 2.0;
    auto exceed_count = [&](double beta) {
        return static_cast<std::uint64_t>(
            sups.end() - std::lower_bound(sups.begin(), sups.end(), beta));
    };
    auto upper3 = [&](double beta) {
        const std::uint64_t c = exceed_count(beta);
        const Confidence ci = wilson_interval(c, n_paths);
        return static_cast<double>(c) / static_cast<double>(n_paths) +
               3.0 * ci.half_width();
    };

    // Cap the search at twice the disconnected limiting capacity: a beta that
    // large already empties the sum-process constraint entirely.
    const double n0 = 2.0 * std::sqrt(2.0) * std::abs(base.sigma) *
                      std::sqrt(std::log(4.0 / base.delta) * base.t_f) / base.b_max;
    const long long m_max = static_cast<long long>(
        std::ceil(2.0 * n0 * base.b_max / kBetaResolution));
    if (upper3(kBetaResolution * static_cast<double>(m_max)) >= target)
        throw std::runtime_error(
            "calibrate_beta: no beta up to the search cap meets delta/2; "
            "p_line_kw is too small for the slack device");

    long long lo = 0, hi = m_max;  // exceedance estimate is monotone in beta
    while (hi - lo > 1) {
        const long long mid = lo + (hi - lo) / 2;
        if (upper3(kBetaResolution * static_cast<double>(mid)) < target)
            hi = mid;
        else
            lo = mid;
    }

    BetaCalibration cal;
    cal.beta_kwh = kBetaResolution * static_cast<double>(hi);
    cal.p_hat = static_cast<double>(exceed_count(cal.beta_kwh)) /
                static_cast<double>(n_paths);
    cal.p_upper3 = upper3(cal.beta_kwh);
    cal.n_paths = n_paths;
    cal.k_steps = kBetaSteps;
    return cal;
}

SizingOutcome solve_two_mg(const TwoMgParams& params, RoundingMode mode) {
    params.validate();
    const SystemParams& base = params.base;
    const double delta_prime = base.delta / 2.0;
    const double sigma_c2 = 2.0 * base.sigma * base.sigma;
    const double n =
        std::sqrt(8.0 * sigma_c2 * base.t_f * std::log(2.0 / delta_prime)) /
            (2.0 * base.b_max) +
        params.beta_kwh / base.b_max;
    return make_sizing_outcome(n, 0.5, base.b_max, mode);
}

LimitingSizes limiting_sizes(const TwoMgParams& params) {
    params.validate();
    const SystemParams& base = params.base;
    const double s = std::abs(base.sigma);
    LimitingSizes out;
    out.n_disconnected =
        2.0 * std::sqrt(2.0) * s * std::sqrt(std::log(4.0 / base.delta) * base.t_f) /
        base.b_max;
    out.n_infinite =
        2.0 * s * std::sqrt(std::log(2.0 / base.delta) * base.t_f) / base.b_max;
    out.ratio =
        std::sqrt(2.0 * std::log(4.0 / base.delta) / std::log(2.0 / base.delta));
    return out;
}

Proposition1Report proposition1_empirical_check(const TwoMgParams& params, double n,
                                                std::uint64_t n_paths,
                                                std::uint64_t seed,
                                                std::uint32_t k_steps) {
    params.validate();
    if (!(n > 0.0))
        throw std::invalid_argument("proposition1_empirical_check: n must be > 0");
    if (n_paths == 0 || k_steps == 0)
        throw std::invalid_argument("proposition1_empirical_check: empty ensemble");

    const SystemParams& base = params.base;
    const double nb = n * base.b_max;
    const double beta = params.beta_kwh;
    const double x0 = base.alpha * nb;
    const double dt = base.t_f / k_steps;
    const double sdt = base.sigma * std::sqrt(dt);
    const double p_line = params.p_line_kw;

    struct PathEvents {
        bool mg_union = false, sum_upper = false, sum_lower = false, diff = false;
    };
    std::vector<PathEvents> events(n_paths);

    parallel_for(n_paths, effective_threads(0), [&](std::uint64_t pb, std::uint64_t pe) {
        for (std::uint64_t p = pb; p < pe; ++p) {
            GaussianStream noise1(seed, p, kStreamMg1);
            GaussianStream noise2(seed, p, kStreamMg2);
            double x1 = x0, x2 = x0;
            double max1 = x1, min1 = x1, max2 = x2, min2 = x2;
            double max_c = x1 + x2, min_c = x1 + x2, max_d = 0.0;
            for (std::uint32_t k = 0; k < k_steps; ++k) {
                double p12 = 0.0;
                if (x1 > x2)
                    p12 = p_line;
                else if (x1 < x2)
                    p12 = -p_line;
                x1 += -p12 * dt + sdt * noise1.next_normal();
                x2 += p12 * dt + sdt * noise2.next_normal();
                max1 = std::max(max1, x1);
                min1 = std::min(min1, x1);
                max2 = std::max(max2, x2);
                min2 = std::min(min2, x2);
                const double xc = x1 + x2;
                max_c = std::max(max_c, xc);
                min_c = std::min(min_c, xc);
                max_d = std::max(max_d, std::abs(x2 - x1));
            }
            PathEvents& e = events[p];
            e.mg_union = max1 >= nb || min1 <= 0.0 || max2 >= nb || min2 <= 0.0;
            e.sum_upper = max_c >= 2.0 * nb - beta;
            e.sum_lower = min_c <= beta;
            e.diff = max_d >= beta;
        }
    });

    Proposition1Report report;
    report.n_paths = n_paths;
    report.k_steps = k_steps;
    report.beta_kwh = beta;
    for (const PathEvents& e : events) {
        if (e.mg_union) ++report.union_count;
        if (e.sum_upper) ++report.sum_upper_count;
        if (e.sum_lower) ++report.sum_lower_count;
        if (e.diff) ++report.diff_count;
        if (e.mg_union && !(e.sum_upper || e.sum_lower || e.diff))
            ++report.per_path_failures;
    }
    const double nn = static_cast<double>(n_paths);
    report.union_rate = static_cast<double>(report.union_count) / nn;
    report.rhs_rate_sum =
        static_cast<double>(report.sum_upper_count + report.sum_lower_count +
                            report.diff_count) /
        nn;
    return report;
}

}  // namespace bessplan
