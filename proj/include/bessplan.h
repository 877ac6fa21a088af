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

/* C interface of the bessplan shared library. All entry points return a
 * bp_status; outputs are written through pointers or returned as opaque
 * handles that must be released with the matching *_free call. On failure
 * bp_last_error() describes the problem for the calling thread. */

#ifndef BESSPLAN_H
#define BESSPLAN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bp_status {
    BP_OK = 0,
    BP_ERR_INVALID = 1, /* parameter or configuration validation failed */
    BP_ERR_RUNTIME = 2, /* an operation could not complete (I/O, calibration, ...) */
} bp_status;

/* Message for the last failing call on this thread. */
const char* bp_last_error(void);

typedef enum bp_rounding {
    BP_ROUND_CEIL = 0,
    BP_ROUND_NEAREST = 1,
    BP_ROUND_FLOOR = 2,
} bp_rounding;

typedef enum bp_policy_kind {
    BP_POLICY_DISCONNECTED = 0,
    BP_POLICY_BANG_BANG = 1,
    BP_POLICY_DISCRETE_KKT = 2,
} bp_policy_kind;

typedef struct bp_system_params {
    double sigma_kwh_per_sqrt_hour; /* nonzero */
    double b_max_kwh;               /* > 0 */
    double delta;                   /* in (0,1) */
    double t_f_hours;               /* > 0 */
    double alpha;                   /* in [0,1] */
} bp_system_params;

typedef struct bp_two_mg_params {
    bp_system_params base;
    double p_line_kw; /* >= 0 */
    double beta_kwh;  /* >= 0 */
} bp_two_mg_params;

typedef struct bp_policy {
    bp_policy_kind kind;
    double p_line_kw;
    double dt_hours; /* discrete-KKT law only */
} bp_policy;

typedef struct bp_sizing {
    double n_continuous;
    int64_t n_units;
    double total_capacity_kwh;
    double initial_energy_kwh;
    double alpha;
} bp_sizing;

typedef struct bp_sim_config {
    uint64_t n_paths;
    uint32_t k_steps; /* dt = t_f / k_steps */
    uint64_t master_seed;
    int record_traces;
    int bridge_correction;
    unsigned n_threads; /* 0 = auto; BESS_PLAN_THREADS caps either way */
} bp_sim_config;

/* --- sizing ------------------------------------------------------------ */

bp_status bp_size_single(const bp_system_params* params, bp_rounding rounding,
                         bp_sizing* out);
bp_status bp_chernoff_bound(const bp_system_params* params, double n, double* out);
bp_status bp_exact_violation_prob(const bp_system_params* params, double n,
                                  double* out);
bp_status bp_first_passage_upper(const bp_system_params* params, double n, double* out);
bp_status bp_first_passage_lower(const bp_system_params* params, double n, double* out);
bp_status bp_n_of_alpha(const bp_system_params* params, double* out);

bp_status bp_size_two(const bp_two_mg_params* params, bp_rounding rounding,
                      bp_sizing* out);
bp_status bp_limiting_sizes(const bp_two_mg_params* params, double* n_disconnected,
                            double* n_infinite, double* ratio);
bp_status bp_calibrate_beta(const bp_two_mg_params* params, uint64_t n_paths,
                            uint64_t seed, double* beta_kwh, double* p_hat);

/* --- Monte Carlo ensembles ---------------------------------------------- */

typedef struct bp_ensemble bp_ensemble;

bp_status bp_simulate_single(const bp_system_params* params, double n,
                             const bp_sim_config* cfg, bp_ensemble** out);
bp_status bp_simulate_two(const bp_two_mg_params* params, double n,
                          const bp_policy* policy, const bp_sim_config* cfg,
                          bp_ensemble** out);
uint64_t bp_ensemble_paths(const bp_ensemble* e);
uint64_t bp_ensemble_violations(const bp_ensemble* e);
double bp_ensemble_rate(const bp_ensemble* e);
void bp_ensemble_wilson99(const bp_ensemble* e, double* lo, double* hi);
/* header_lines: optional newline-separated "key = value" entries echoed as
 * CSV comments; pass NULL for none. */
bp_status bp_ensemble_write_summary_csv(const bp_ensemble* e, const char* path,
                                        const char* experiment,
                                        const char* header_lines);
bp_status bp_ensemble_write_traces_csv(const bp_ensemble* e, const char* path,
                                       const char* header_lines);
void bp_ensemble_free(bp_ensemble* e);

/* --- capacity sweep ------------------------------------------------------ */

typedef struct bp_sweep bp_sweep;

bp_status bp_capacity_sweep(const bp_two_mg_params* params, const double* p_line_grid,
                            size_t grid_size, const bp_sim_config* cfg,
                            unsigned replicates, bp_sweep** out);
size_t bp_sweep_size(const bp_sweep* s);
bp_status bp_sweep_row(const bp_sweep* s, size_t i, double* p_line_kw,
                       double* capacity_kwh, double* rate, double* ci_lo,
                       double* ci_hi, int* ok);
bp_status bp_sweep_write_csv(const bp_sweep* s, const char* path,
                             const char* header_lines);
void bp_sweep_free(bp_sweep* s);

/* --- value recursion ------------------------------------------------------ */

typedef struct bp_value_grid bp_value_grid;

/* policy == NULL maximizes the transfer per node; otherwise the fixed law is
 * evaluated. */
bp_status bp_dp_solve(double n_b_kwh, double p_line_kw, double sigma, double t_f_hours,
                      uint32_t k_steps, uint32_t grid_points, const bp_policy* policy,
                      bp_value_grid** out);
uint32_t bp_value_grid_points(const bp_value_grid* g);
uint32_t bp_value_grid_steps(const bp_value_grid* g);
double bp_value_grid_value(const bp_value_grid* g, uint32_t k, uint32_t i, uint32_t j);
bp_status bp_value_grid_write_csv(const bp_value_grid* g, const char* path);
void bp_value_grid_free(bp_value_grid* g);

/* --- verification battery ------------------------------------------------- */

typedef enum bp_fault {
    BP_FAULT_NONE = 0,
    BP_FAULT_FLIP_POLICY_SIGN = 1,
} bp_fault;

typedef struct bp_report bp_report;

/* Runs the bound/oracle verification battery. Returns BP_OK even when checks
 * fail; inspect the report. */
bp_status bp_verify(const bp_two_mg_params* params, int quick, bp_fault fault,
                    uint64_t seed, bp_report** out);
size_t bp_report_size(const bp_report* r);
int bp_report_passed(const bp_report* r, size_t i);
const char* bp_report_name(const bp_report* r, size_t i);
const char* bp_report_detail(const bp_report* r, size_t i);
int bp_report_all_passed(const bp_report* r);
void bp_report_free(bp_report* r);

#ifdef __cplusplus
}
#endif

#endif /* BESSPLAN_H */
