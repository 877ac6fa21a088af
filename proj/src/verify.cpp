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

#include "bessplan/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "bessplan/dp.hpp"
#include "bessplan/random.hpp"
#include "bessplan/single_mg.hpp"
#include "bessplan/transfer_policy.hpp"
#include "bessplan/two_mg_sizing.hpp"

namespace bessplan {

namespace {

std::string format(const char* fmt, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), fmt, a, b);
    return buf;
}

CheckResult check_bound_dominance(std::uint64_t seed) {
    GaussianStream rng(seed, 0, 0x0bcd);
    auto u = [&] { return rng.next_uniform(); };
    int bad = 0;
    double worst = -1e300;
    for (int i = 0; i < 200; ++i) {
        SystemParams p;
        p.sigma = 0.2 + 2.8 * u();
        p.b_max = 0.5 + 4.5 * u();
        p.delta = 0.001 + 0.5 * u();
        p.t_f = 0.5 + 19.5 * u();
        p.alpha = 0.02 + 0.96 * u();
        const double scale =
            std::sqrt(2.0 * p.sigma * p.sigma * p.t_f * std::log(2.0 / p.delta)) /
            (p.b_max * std::min(p.alpha, 1.0 - p.alpha));
        const double n = std::max(1e-6, 2.0 * scale * u());
        const double gap = exact_violation_prob(p, n) - chernoff_bound_f(p, n);
        worst = std::max(worst, gap);
        if (gap > 1e-12) ++bad;
    }
    CheckResult r;
    r.name = "bound-dominance";
    r.passed = bad == 0;
    r.detail = format("violations=%.0f of 200, worst gap=%.3g (required <= 1e-12)",
                      static_cast<double>(bad), worst);
    return r;
}

CheckResult check_alpha_optimality(const SystemParams& base) {
    SystemParams p = base;
    p.alpha = 0.5;
    const double n_half = n_of_alpha(p);
    bool ok = true;
    double worst_gap = 1e300, worst_sym = 0.0;
    for (int k = 1; k <= 99; ++k) {
        p.alpha = k / 100.0;
        const double nk = n_of_alpha(p);
        if (k != 50) {
            worst_gap = std::min(worst_gap, nk - n_half);
            if (!(nk - n_half > 0.0)) ok = false;
        }
        if (k < 50) {
            p.alpha = (100 - k) / 100.0;
            const double nm = n_of_alpha(p);
            const double sym = std::abs(nk - nm) / n_half;
            worst_sym = std::max(worst_sym, sym);
            if (sym > 1e-9) ok = false;
        }
    }
    CheckResult r;
    r.name = "alpha-optimality";
    r.passed = ok;
    r.detail = format("min off-center excess=%.3g (>0 required), worst symmetry=%.3g "
                      "(<=1e-9 required)",
                      worst_gap, worst_sym);
    return r;
}

struct DpInstance {
    double n_b = 2.0, p_line = 3.0, sigma = 1.0, t_f = 0.5;
    int k_steps = 6, grid = 41;
};

CheckResult check_dp_oracle(const VerifyOptions& opt, const ValueGrid& vstar,
                            const DpInstance& inst) {
    const double dt = inst.t_f / inst.k_steps;
    const double flip = opt.fault == FaultMode::FlipPolicySign ? -1.0 : 1.0;
    TransferLaw kkt_law = [&](double x1, double x2, int) {
        return flip * kkt_transfer({x1, x2, inst.n_b}, inst.p_line, dt);
    };
    const ValueGrid vkkt = dp_policy_value(inst.n_b, inst.p_line, inst.sigma, inst.t_f,
                                           inst.k_steps, inst.grid, kkt_law);

    double sup = 0.0;
    const std::size_t nodes = vstar.values[0].size();
    for (std::size_t i = 0; i < nodes; ++i)
        sup = std::max(sup, std::abs(vstar.values[0][i] - vkkt.values[0][i]));

    // Feasible comparison policies; the fixed law must not lose to any of
    // them by more than the oracle tolerance anywhere on the box.
    std::vector<std::pair<const char*, TransferLaw>> rivals;
    rivals.emplace_back("zero", [](double, double, int) { return 0.0; });
    rivals.emplace_back("constant", [&](double, double, int) { return 0.5 * inst.p_line; });
    rivals.emplace_back("proportional", [&](double x1, double x2, int) {
        return std::clamp((x1 - x2) / (8.0 * dt), -inst.p_line, inst.p_line);
    });
    const std::uint64_t rescale = opt.seed;
    rivals.emplace_back("random", [&, rescale](double x1, double x2, int k) {
        std::uint64_t h = mix64(mix64(rescale + static_cast<std::uint64_t>(k)) +
                                (static_cast<std::uint64_t>(std::llround(x1 * 4096.0)) << 20) +
                                static_cast<std::uint64_t>(std::llround(x2 * 4096.0)));
        const double uu = static_cast<double>(h >> 11) * 0x1.0p-53;
        return inst.p_line * (2.0 * uu - 1.0);
    });

    double worst_margin = 1e300;
    for (const auto& [name, law] : rivals) {
        const ValueGrid vp = dp_policy_value(inst.n_b, inst.p_line, inst.sigma, inst.t_f,
                                             inst.k_steps, inst.grid, law);
        for (std::size_t i = 0; i < nodes; ++i)
            worst_margin = std::min(worst_margin, vkkt.values[0][i] - vp.values[0][i]);
    }

    CheckResult r;
    r.name = "dp-oracle";
    r.passed = sup <= 1e-3 && worst_margin >= -1e-3;
    r.detail = format("sup|V*-V^pi|=%.3g (<=1e-3 required), worst rival margin=%.3g "
                      "(>=-1e-3 required)",
                      sup, worst_margin);
    return r;
}

CheckResult check_inclusion(const TwoMgParams& params, const VerifyOptions& opt) {
    TwoMgParams p = params;
    if (p.beta_kwh <= 0.0) p.beta_kwh = 2.0;
    const std::uint64_t n_paths = opt.quick ? 1000 : 5000;
    const SizingOutcome sizing = solve_two_mg(p, RoundingMode::Floor);
    const double n = std::max(1.0, static_cast<double>(sizing.n_units));
    const Proposition1Report report =
        proposition1_empirical_check(p, n, n_paths, opt.seed, 600);
    CheckResult r;
    r.name = "pathwise-inclusion";
    r.passed = report.per_path_failures == 0;
    r.detail = format("pathwise failures=%.0f of %.0f (0 required)",
                      static_cast<double>(report.per_path_failures),
                      static_cast<double>(n_paths));
    return r;
}

CheckResult check_concavity(const ValueGrid& vstar) {
    long long total = 0;
    double worst = -1e300;
    for (int k = 0; k <= vstar.k_steps; ++k) {
        const ConcavityReport rep = concavity_check(vstar, k, 1e-9);
        total += rep.violations;
        worst = std::max(worst, rep.worst_margin);
    }
    // One-step value at deployment scale: the last backward step from the
    // constant terminal layer, evaluated in closed form.
    const ValueGrid one_step = dp_value_iteration(10.0, 15.0, 1.0, 1.0 / 120.0, 1, 41);
    const ConcavityReport rep = concavity_check(one_step, 0, 1e-9);
    total += rep.violations;
    worst = std::max(worst, rep.worst_margin);

    CheckResult r;
    r.name = "value-concavity";
    r.passed = total == 0;
    r.detail = format("violations=%.0f (0 required at tol 1e-9), worst midpoint "
                      "deficit=%.3g",
                      static_cast<double>(total), worst);
    return r;
}

}  // namespace

std::vector<CheckResult> run_verification(const TwoMgParams& params,
                                          const VerifyOptions& options) {
    params.validate();
    std::vector<CheckResult> checks;
    checks.push_back(check_bound_dominance(options.seed));
    checks.push_back(check_alpha_optimality(params.base));

    DpInstance inst;
    if (options.quick) {
        inst.k_steps = 4;
        inst.grid = 21;
    }
    const ValueGrid vstar = dp_value_iteration(inst.n_b, inst.p_line, inst.sigma,
                                               inst.t_f, inst.k_steps, inst.grid);
    checks.push_back(check_dp_oracle(options, vstar, inst));
    checks.push_back(check_inclusion(params, options));
    checks.push_back(check_concavity(vstar));
    return checks;
}

}  // namespace bessplan
