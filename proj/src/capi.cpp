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

#include "bessplan.h"

#include <cstring>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bessplan/dp.hpp"
#include "bessplan/first_passage.hpp"
#include "bessplan/mc.hpp"
#include "bessplan/single_mg.hpp"
#include "bessplan/two_mg_sizing.hpp"
#include "bessplan/verify.hpp"

namespace {

thread_local std::string g_last_error;

template <typename Fn>
bp_status guarded(Fn&& fn) {
    try {
        fn();
        return BP_OK;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return BP_ERR_INVALID;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BP_ERR_RUNTIME;
    } catch (...) {
        g_last_error = "unknown error";
        return BP_ERR_RUNTIME;
    }
}

bessplan::SystemParams to_core(const bp_system_params& p) {
    bessplan::SystemParams out;
    out.sigma = p.sigma_kwh_per_sqrt_hour;
    out.b_max = p.b_max_kwh;
    out.delta = p.delta;
    out.t_f = p.t_f_hours;
    out.alpha = p.alpha;
    return out;
}

bessplan::TwoMgParams to_core(const bp_two_mg_params& p) {
    bessplan::TwoMgParams out;
    out.base = to_core(p.base);
    out.p_line_kw = p.p_line_kw;
    out.beta_kwh = p.beta_kwh;
    return out;
}

bessplan::RoundingMode to_core(bp_rounding r) {
    switch (r) {
        case BP_ROUND_CEIL: return bessplan::RoundingMode::Ceil;
        case BP_ROUND_NEAREST: return bessplan::RoundingMode::Nearest;
        case BP_ROUND_FLOOR: return bessplan::RoundingMode::Floor;
    }
    throw std::invalid_argument("rounding: unknown mode");
}

bessplan::TransferPolicy to_core(const bp_policy& p) {
    switch (p.kind) {
        case BP_POLICY_DISCONNECTED: return bessplan::TransferPolicy::disconnected();
        case BP_POLICY_BANG_BANG: return bessplan::TransferPolicy::bang_bang(p.p_line_kw);
        case BP_POLICY_DISCRETE_KKT:
            return bessplan::TransferPolicy::discrete_kkt(p.p_line_kw, p.dt_hours);
    }
    throw std::invalid_argument("policy: unknown kind");
}

bp_sizing to_c(const bessplan::SizingOutcome& s) {
    bp_sizing out;
    out.n_continuous = s.n_continuous;
    out.n_units = s.n_units;
    out.total_capacity_kwh = s.total_capacity_kwh;
    out.initial_energy_kwh = s.initial_energy_kwh;
    out.alpha = s.alpha;
    return out;
}

void require(const void* ptr, const char* what) {
    if (ptr == nullptr) throw std::invalid_argument(std::string(what) + ": null pointer");
}

bessplan::SimConfig to_core(const bp_sim_config& c) {
    bessplan::SimConfig out;
    out.n_paths = c.n_paths;
    out.k_steps = c.k_steps;
    out.master_seed = c.master_seed;
    out.record_traces = c.record_traces != 0;
    out.bridge_correction = c.bridge_correction != 0;
    out.n_threads = c.n_threads;
    return out;
}

bessplan::CsvHeader parse_header_lines(const char* header_lines) {
    bessplan::CsvHeader header;
    if (header_lines == nullptr) return header;
    std::istringstream in(header_lines);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            header.emplace_back(line, "");
            continue;
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        header.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return header;
}

}  // namespace

extern "C" {

struct bp_ensemble {
    bessplan::EnsembleResult result;
};

struct bp_sweep {
    std::vector<bessplan::SweepRow> rows;
};

struct bp_value_grid {
    bessplan::ValueGrid grid;
};

struct bp_report {
    std::vector<bessplan::CheckResult> checks;
};

const char* bp_last_error(void) { return g_last_error.c_str(); }

bp_status bp_size_single(const bp_system_params* params, bp_rounding rounding,
                         bp_sizing* out) {
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        *out = to_c(bessplan::solve_single_mg(to_core(*params), to_core(rounding)));
    });
}

bp_status bp_chernoff_bound(const bp_system_params* params, double n, double* out) {
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        *out = bessplan::chernoff_bound_f(to_core(*params), n);
    });
}

bp_status bp_exact_violation_prob(const bp_system_params* params, double n,
                                  double* out) {
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        *out = bessplan::exact_violation_prob(to_core(*params), n);
    });
}

bp_status bp_first_passage_upper(const bp_system_params* params, double n, double* out) {
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        *out = bessplan::first_passage_prob_upper(to_core(*params), n);
    });
}

bp_status bp_first_passage_lower(const bp_system_params* params, double n, double* out) {
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        *out = bessplan::first_passage_prob_lower(to_core(*params), n);
    });
}

bp_status bp_n_of_alpha(const bp_system_params* params, double* out) {
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        *out = bessplan::n_of_alpha(to_core(*params));
    });
}

bp_status bp_size_two(const bp_two_mg_params* params, bp_rounding rounding,
                      bp_sizing* out) {
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        *out = to_c(bessplan::solve_two_mg(to_core(*params), to_core(rounding)));
    });
}

bp_status bp_limiting_sizes(const bp_two_mg_params* params, double* n_disconnected,
                            double* n_infinite, double* ratio) {
    return guarded([&] {
        require(params, "params");
        const bessplan::LimitingSizes sizes = bessplan::limiting_sizes(to_core(*params));
        if (n_disconnected) *n_disconnected = sizes.n_disconnected;
        if (n_infinite) *n_infinite = sizes.n_infinite;
        if (ratio) *ratio = sizes.ratio;
    });
}

bp_status bp_calibrate_beta(const bp_two_mg_params* params, uint64_t n_paths,
                            uint64_t seed, double* beta_kwh, double* p_hat) {
    return guarded([&] {
        require(params, "params");
        require(beta_kwh, "beta_kwh");
        const bessplan::BetaCalibration cal =
            bessplan::calibrate_beta(to_core(*params), n_paths, seed);
        *beta_kwh = cal.beta_kwh;
        if (p_hat) *p_hat = cal.p_hat;
    });
}

bp_status bp_simulate_single(const bp_system_params* params, double n,
                             const bp_sim_config* cfg, bp_ensemble** out) {
    return guarded([&] {
        require(params, "params");
        require(cfg, "cfg");
        require(out, "out");
        auto handle = new bp_ensemble{
            bessplan::simulate_single(to_core(*params), n, to_core(*cfg))};
        *out = handle;
    });
}

bp_status bp_simulate_two(const bp_two_mg_params* params, double n,
                          const bp_policy* policy, const bp_sim_config* cfg,
                          bp_ensemble** out) {
    return guarded([&] {
        require(params, "params");
        require(policy, "policy");
        require(cfg, "cfg");
        require(out, "out");
        auto handle = new bp_ensemble{bessplan::simulate_two_mg(
            to_core(*params), n, to_core(*policy), to_core(*cfg))};
        *out = handle;
    });
}

uint64_t bp_ensemble_paths(const bp_ensemble* e) { return e ? e->result.n_paths : 0; }

uint64_t bp_ensemble_violations(const bp_ensemble* e) {
    return e ? e->result.violations : 0;
}

double bp_ensemble_rate(const bp_ensemble* e) { return e ? e->result.violation_rate : 0.0; }

void bp_ensemble_wilson99(const bp_ensemble* e, double* lo, double* hi) {
    if (!e) return;
    if (lo) *lo = e->result.wilson99.lo;
    if (hi) *hi = e->result.wilson99.hi;
}

bp_status bp_ensemble_write_summary_csv(const bp_ensemble* e, const char* path,
                                        const char* experiment,
                                        const char* header_lines) {
    return guarded([&] {
        require(e, "ensemble");
        require(path, "path");
        bessplan::write_summary_csv(e->result, path,
                                    experiment ? experiment : "experiment",
                                    parse_header_lines(header_lines));
    });
}

bp_status bp_ensemble_write_traces_csv(const bp_ensemble* e, const char* path,
                                       const char* header_lines) {
    return guarded([&] {
        require(e, "ensemble");
        require(path, "path");
        bessplan::write_traces_csv(e->result, path, parse_header_lines(header_lines));
    });
}

void bp_ensemble_free(bp_ensemble* e) { delete e; }

bp_status bp_capacity_sweep(const bp_two_mg_params* params, const double* p_line_grid,
                            size_t grid_size, const bp_sim_config* cfg,
                            unsigned replicates, bp_sweep** out) {
    return guarded([&] {
        require(params, "params");
        require(p_line_grid, "p_line_grid");
        require(cfg, "cfg");
        require(out, "out");
        auto handle = new bp_sweep{bessplan::capacity_sweep(
            to_core(*params), std::span<const double>(p_line_grid, grid_size),
            to_core(*cfg), replicates)};
        *out = handle;
    });
}

size_t bp_sweep_size(const bp_sweep* s) { return s ? s->rows.size() : 0; }

bp_status bp_sweep_row(const bp_sweep* s, size_t i, double* p_line_kw,
                       double* capacity_kwh, double* rate, double* ci_lo, double* ci_hi,
                       int* ok) {
    return guarded([&] {
        require(s, "sweep");
        if (i >= s->rows.size()) throw std::invalid_argument("sweep: row out of range");
        const bessplan::SweepRow& row = s->rows[i];
        if (p_line_kw) *p_line_kw = row.p_line_kw;
        if (capacity_kwh) *capacity_kwh = row.capacity_kwh;
        if (rate) *rate = row.rate;
        if (ci_lo) *ci_lo = row.wilson99.lo;
        if (ci_hi) *ci_hi = row.wilson99.hi;
        if (ok) *ok = row.ok ? 1 : 0;
    });
}

bp_status bp_sweep_write_csv(const bp_sweep* s, const char* path,
                             const char* header_lines) {
    return guarded([&] {
        require(s, "sweep");
        require(path, "path");
        bessplan::write_sweep_csv(s->rows, path, parse_header_lines(header_lines));
    });
}

void bp_sweep_free(bp_sweep* s) { delete s; }

bp_status bp_dp_solve(double n_b_kwh, double p_line_kw, double sigma, double t_f_hours,
                      uint32_t k_steps, uint32_t grid_points, const bp_policy* policy,
                      bp_value_grid** out) {
    return guarded([&] {
        require(out, "out");
        if (policy) {
            *out = new bp_value_grid{bessplan::dp_policy_value(
                n_b_kwh, p_line_kw, sigma, t_f_hours, static_cast<int>(k_steps),
                static_cast<int>(grid_points), to_core(*policy))};
        } else {
            *out = new bp_value_grid{bessplan::dp_value_iteration(
                n_b_kwh, p_line_kw, sigma, t_f_hours, static_cast<int>(k_steps),
                static_cast<int>(grid_points))};
        }
    });
}

uint32_t bp_value_grid_points(const bp_value_grid* g) {
    return g ? static_cast<uint32_t>(g->grid.grid_points) : 0;
}

uint32_t bp_value_grid_steps(const bp_value_grid* g) {
    return g ? static_cast<uint32_t>(g->grid.k_steps) : 0;
}

double bp_value_grid_value(const bp_value_grid* g, uint32_t k, uint32_t i, uint32_t j) {
    if (!g) return 0.0;
    return g->grid.value(static_cast<int>(k), static_cast<int>(i), static_cast<int>(j));
}

bp_status bp_value_grid_write_csv(const bp_value_grid* g, const char* path) {
    return guarded([&] {
        require(g, "value_grid");
        require(path, "path");
        g->grid.write_csv(path);
    });
}

void bp_value_grid_free(bp_value_grid* g) { delete g; }

bp_status bp_verify(const bp_two_mg_params* params, int quick, bp_fault fault,
                    uint64_t seed, bp_report** out) {
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        bessplan::VerifyOptions options;
        options.quick = quick != 0;
        options.fault = fault == BP_FAULT_FLIP_POLICY_SIGN
                            ? bessplan::FaultMode::FlipPolicySign
                            : bessplan::FaultMode::None;
        options.seed = seed;
        *out = new bp_report{bessplan::run_verification(to_core(*params), options)};
    });
}

size_t bp_report_size(const bp_report* r) { return r ? r->checks.size() : 0; }

int bp_report_passed(const bp_report* r, size_t i) {
    if (!r || i >= r->checks.size()) return 0;
    return r->checks[i].passed ? 1 : 0;
}

const char* bp_report_name(const bp_report* r, size_t i) {
    if (!r || i >= r->checks.size()) return "";
    return r->checks[i].name.c_str();
}

const char* bp_report_detail(const bp_report* r, size_t i) {
    if (!r || i >= r->checks.size()) return "";
    return r->checks[i].detail.c_str();
}

int bp_report_all_passed(const bp_report* r) {
    if (!r) return 0;
    for (const auto& c : r->checks)
        if (!c.passed) return 0;
    return 1;
}

void bp_report_free(bp_report* r) { delete r; }

}  // extern "C"
