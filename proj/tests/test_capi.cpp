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
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "bessplan.h"

namespace {

bp_system_params reference_params() {
    return {1.0, 1.0, 0.02, 5.0, 0.5};
}

bp_two_mg_params deployment_params() {
    return {reference_params(), 15.0, 0.0};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("C API: sizing round trip and named-field errors") {
    const bp_system_params p = reference_params();
    bp_sizing out;
    REQUIRE(bp_size_single(&p, BP_ROUND_CEIL, &out) == BP_OK);
    CHECK(std::abs(out.n_continuous - 13.572280848830224) <= 1e-12);
    CHECK(out.n_units == 14);
    CHECK(out.initial_energy_kwh == 7.0);

    REQUIRE(bp_size_single(&p, BP_ROUND_FLOOR, &out) == BP_OK);
    CHECK(out.n_units == 13);
    CHECK(out.initial_energy_kwh == 6.5);

    bp_system_params bad = p;
    bad.delta = 0.0;
    CHECK(bp_size_single(&bad, BP_ROUND_CEIL, &out) == BP_ERR_INVALID);
    CHECK(std::strstr(bp_last_error(), "delta") != nullptr);

    CHECK(bp_size_single(nullptr, BP_ROUND_CEIL, &out) == BP_ERR_INVALID);
}

TEST_CASE("C API: scalar analytics agree with each other") {
    const bp_system_params p = reference_params();
    double f = 0.0, exact = 0.0, up = 0.0, lo = 0.0, n_alpha = 0.0;
    REQUIRE(bp_chernoff_bound(&p, 13.572280848830224, &f) == BP_OK);
    CHECK(std::abs(f - 0.02) <= 1e-12);
    REQUIRE(bp_exact_violation_prob(&p, 13.572280848830224, &exact) == BP_OK);
    REQUIRE(bp_first_passage_upper(&p, 13.572280848830224, &up) == BP_OK);
    REQUIRE(bp_first_passage_lower(&p, 13.572280848830224, &lo) == BP_OK);
    CHECK(exact == up + lo);
    CHECK(exact <= f);
    REQUIRE(bp_n_of_alpha(&p, &n_alpha) == BP_OK);
    CHECK(std::abs(n_alpha - 13.572280848830224) <= 1e-8);
}

TEST_CASE("C API: two-microgrid sizing surface") {
    const bp_two_mg_params p = deployment_params();
    bp_sizing out;
    REQUIRE(bp_size_two(&p, BP_ROUND_FLOOR, &out) == BP_OK);
    CHECK(out.n_units == 10);
    CHECK(out.initial_energy_kwh == 5.0);

    double n0 = 0.0, ninf = 0.0, ratio = 0.0;
    REQUIRE(bp_limiting_sizes(&p, &n0, &ninf, &ratio) == BP_OK);
    CHECK(std::abs(ratio - 1.5169146303150950) <= 1e-12);
    CHECK(n0 > ninf);
}

TEST_CASE("C API: ensembles, accessors and CSV writers") {
    const bp_system_params p = reference_params();
    bp_sim_config cfg = {};
    cfg.n_paths = 500;
    cfg.k_steps = 100;
    cfg.master_seed = 5;

    bp_ensemble* e = nullptr;
    REQUIRE(bp_simulate_single(&p, 13.0, &cfg, &e) == BP_OK);
    REQUIRE(e != nullptr);
    CHECK(bp_ensemble_paths(e) == 500);
    double lo = -1.0, hi = -1.0;
    bp_ensemble_wilson99(e, &lo, &hi);
    CHECK(lo <= bp_ensemble_rate(e));
    CHECK(bp_ensemble_rate(e) <= hi);
    REQUIRE(bp_ensemble_write_summary_csv(e, "capi_summary.csv", "single",
                                          "seed = 5\nn_paths = 500") == BP_OK);
    const std::string summary = slurp("capi_summary.csv");
    CHECK(summary.find("# seed = 5") != std::string::npos);
    bp_ensemble_free(e);
    std::remove("capi_summary.csv");

    const bp_two_mg_params p2 = deployment_params();
    bp_policy policy = {BP_POLICY_DISCRETE_KKT, 15.0, 5.0 / 100.0};
    e = nullptr;
    REQUIRE(bp_simulate_two(&p2, 10.0, &policy, &cfg, &e) == BP_OK);
    CHECK(bp_ensemble_paths(e) == 500);
    bp_ensemble_free(e);

    // Grid condition rejected through the C surface as well.
    bp_policy coarse = {BP_POLICY_DISCRETE_KKT, 15.0, 2.5};
    bp_sim_config bad_cfg = cfg;
    bad_cfg.k_steps = 2;
    CHECK(bp_simulate_two(&p2, 10.0, &coarse, &bad_cfg, &e) == BP_ERR_INVALID);
}

TEST_CASE("C API: value recursion handles") {
    bp_value_grid* g = nullptr;
    REQUIRE(bp_dp_solve(2.0, 3.0, 1.0, 0.5, 2, 15, nullptr, &g) == BP_OK);
    REQUIRE(g != nullptr);
    CHECK(bp_value_grid_points(g) == 15);
    CHECK(bp_value_grid_steps(g) == 2);
    CHECK(bp_value_grid_value(g, 2, 7, 7) == 1.0);
    const double v = bp_value_grid_value(g, 0, 7, 7);
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    REQUIRE(bp_value_grid_write_csv(g, "capi_grid.csv") == BP_OK);
    CHECK(!slurp("capi_grid.csv").empty());
    bp_value_grid_free(g);
    std::remove("capi_grid.csv");

    bp_policy policy = {BP_POLICY_DISCRETE_KKT, 3.0, 0.25};
    REQUIRE(bp_dp_solve(2.0, 3.0, 1.0, 0.5, 2, 15, &policy, &g) == BP_OK);
    bp_value_grid_free(g);

    CHECK(bp_dp_solve(2.0, 3.0, 1.0, 0.5, 2, 2, nullptr, &g) == BP_ERR_INVALID);
}

TEST_CASE("C API: sweep handles") {
    const bp_two_mg_params p = deployment_params();
    bp_sim_config cfg = {};
    cfg.n_paths = 400;
    cfg.k_steps = 150;
    cfg.master_seed = 6;
    const double grid[] = {0.0, 15.0};

    bp_sweep* s = nullptr;
    REQUIRE(bp_capacity_sweep(&p, grid, 2, &cfg, 1, &s) == BP_OK);
    REQUIRE(bp_sweep_size(s) == 2);
    double p_line = 0.0, cap = 0.0, rate = 0.0, lo = 0.0, hi = 0.0;
    int ok = 0;
    REQUIRE(bp_sweep_row(s, 1, &p_line, &cap, &rate, &lo, &hi, &ok) == BP_OK);
    CHECK(p_line == 15.0);
    CHECK(cap > 0.0);
    CHECK(ok == 1);
    CHECK(bp_sweep_row(s, 5, &p_line, &cap, &rate, &lo, &hi, &ok) == BP_ERR_INVALID);
    REQUIRE(bp_sweep_write_csv(s, "capi_sweep.csv", nullptr) == BP_OK);
    CHECK(!slurp("capi_sweep.csv").empty());
    bp_sweep_free(s);
    std::remove("capi_sweep.csv");
}

TEST_CASE("C API: verification battery with and without fault injection") {
    const bp_two_mg_params p = deployment_params();
    bp_report* r = nullptr;
    REQUIRE(bp_verify(&p, 1, BP_FAULT_NONE, 20260810, &r) == BP_OK);
    REQUIRE(r != nullptr);
    CHECK(bp_report_size(r) == 5);
    for (size_t i = 0; i < bp_report_size(r); ++i) {
        INFO(bp_report_name(r, i), ": ", bp_report_detail(r, i));
        CHECK(bp_report_passed(r, i) == 1);
    }
    CHECK(bp_report_all_passed(r) == 1);
    bp_report_free(r);

    REQUIRE(bp_verify(&p, 1, BP_FAULT_FLIP_POLICY_SIGN, 20260810, &r) == BP_OK);
    CHECK(bp_report_all_passed(r) == 0);
    bool dp_failed = false;
    for (size_t i = 0; i < bp_report_size(r); ++i)
        if (std::string(bp_report_name(r, i)) == "dp-oracle" && !bp_report_passed(r, i))
            dp_failed = true;
    CHECK(dp_failed);
    bp_report_free(r);
}
