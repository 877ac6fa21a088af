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

#include "bessplan/single_mg.hpp"
#include "bessplan/two_mg_sizing.hpp"

using namespace bessplan;

namespace {
TwoMgParams deployment_params() {
    TwoMgParams p;
    p.base.sigma = 1.0;
    p.base.b_max = 1.0;
    p.base.delta = 0.02;
    p.base.t_f = 5.0;
    p.base.alpha = 0.5;
    p.p_line_kw = 15.0;
    p.beta_kwh = 0.0;
    return p;
}
}  // namespace

TEST_CASE("connected-pair size: frozen value, beta linearity, floor deployment") {
    const TwoMgParams p = deployment_params();
    const SizingOutcome s = solve_two_mg(p);
    // sqrt(80 ln 200)/2 (mpmath): 10.2939956931679709
    CHECK(std::abs(s.n_continuous - 10.293995693167971) <= 1e-12 * s.n_continuous);
    CHECK(s.alpha == 0.5);
    CHECK(s.n_units == 11);  // ceil default

    const SizingOutcome floor = solve_two_mg(p, RoundingMode::Floor);
    CHECK(floor.n_units == 10);
    CHECK(floor.total_capacity_kwh == 10.0);
    CHECK(floor.initial_energy_kwh == 5.0);

    TwoMgParams pb = p;
    pb.beta_kwh = 1.0;
    CHECK(solve_two_mg(pb).n_continuous ==
          doctest::Approx(s.n_continuous + 1.0).epsilon(1e-14));
}

TEST_CASE("the connected size is the half-tolerance sum-process size") {
    const TwoMgParams p = deployment_params();
    SystemParams sum_process;
    sum_process.sigma = std::sqrt(2.0) * p.base.sigma;
    sum_process.b_max = 2.0 * p.base.b_max;
    sum_process.delta = p.base.delta / 2.0;
    sum_process.t_f = p.base.t_f;
    const double per_mg = solve_two_mg(p).n_continuous;
    CHECK(std::abs(solve_single_mg(sum_process).n_continuous - per_mg) <=
          1e-12 * per_mg);
}

TEST_CASE("Eq-style monotonicity of the connected size") {
    TwoMgParams p = deployment_params();
    double prev = solve_two_mg(p).n_continuous;
    for (double beta : {0.5, 1.0, 2.0}) {
        p.beta_kwh = beta;
        const double n = solve_two_mg(p).n_continuous;
        CHECK(n > prev);
        prev = n;
    }
    p.beta_kwh = 0.0;
    prev = solve_two_mg(p).n_continuous;
    for (double delta : {0.05, 0.1, 0.3}) {
        p.base.delta = delta;
        const double n = solve_two_mg(p).n_continuous;
        CHECK(n < prev);
        prev = n;
    }
}

TEST_CASE("limiting sizes and their ratio (frozen, 1e-12)") {
    const TwoMgParams p = deployment_params();
    const LimitingSizes sizes = limiting_sizes(p);
    // mpmath: 14.5579083202883740, 9.59705182437616242, 1.51691463031509496
    CHECK(std::abs(sizes.n_disconnected - 14.557908320288374) <= 1e-12 * 14.557908320288374);
    CHECK(std::abs(sizes.n_infinite - 9.597051824376162) <= 1e-12 * 9.597051824376162);
    CHECK(std::abs(sizes.ratio - 1.5169146303150950) <= 1e-12);
    CHECK(std::abs(sizes.n_disconnected / sizes.n_infinite - sizes.ratio) <= 1e-12);

    // Ordering against the finite-line bound.
    const double connected = solve_two_mg(p).n_continuous;
    CHECK(sizes.n_infinite < connected);
    CHECK(connected < sizes.n_disconnected);
}

TEST_CASE("the limiting ratio does not depend on scale parameters") {
    TwoMgParams a = deployment_params();
    TwoMgParams b = deployment_params();
    b.base.sigma = 3.7;
    b.base.b_max = 0.25;
    b.base.t_f = 42.0;
    CHECK(std::abs(limiting_sizes(a).ratio - limiting_sizes(b).ratio) <= 1e-12);
}

TEST_CASE("beta calibration: preconditions") {
    TwoMgParams p = deployment_params();
    p.p_line_kw = 0.0;
    CHECK_THROWS_AS(calibrate_beta(p, 10000, 1), std::invalid_argument);
    p.p_line_kw = 15.0;
    CHECK_THROWS_AS(calibrate_beta(p, 9999, 1), std::invalid_argument);
}

TEST_CASE("beta calibration: deployment line, stability, huge line capacity") {
    const TwoMgParams p = deployment_params();
    const BetaCalibration cal = calibrate_beta(p, 10000, 2026);
    CHECK(cal.beta_kwh >= 0.1);
    CHECK(cal.beta_kwh <= 2.0);
    CHECK(cal.p_upper3 < p.base.delta / 2.0);

    // Doubling the ensemble moves the result at most one grid step.
    const BetaCalibration cal2 = calibrate_beta(p, 20000, 2026);
    CHECK(std::abs(cal2.beta_kwh - cal.beta_kwh) <= 0.1 + 1e-12);

    // A very strong line pins the difference at the grid floor.
    TwoMgParams strong = p;
    strong.p_line_kw = 1000.0;
    CHECK(calibrate_beta(strong, 10000, 7).beta_kwh == doctest::Approx(0.1));
}

TEST_CASE("pathwise inclusion at the deployment configuration") {
    TwoMgParams p = deployment_params();
    p.beta_kwh = 2.0;
    const Proposition1Report rep = proposition1_empirical_check(p, 10.0, 5000, 40, 600);
    CHECK(rep.per_path_failures == 0);
    CHECK(rep.union_rate >= 0.0005);
    CHECK(rep.union_rate <= 0.015);
    CHECK(rep.union_rate <= rep.rhs_rate_sum + 1e-15);
}

TEST_CASE("a box-sized beta empties the difference event") {
    TwoMgParams p = deployment_params();
    const double n = 10.0;
    p.beta_kwh = 2.0 * n * p.base.b_max;
    const Proposition1Report rep = proposition1_empirical_check(p, n, 2000, 41, 300);
    CHECK(rep.diff_count == 0);
    CHECK(rep.per_path_failures == 0);
}
