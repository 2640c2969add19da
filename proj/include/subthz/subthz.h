/* SPDX-License-Identifier: Apache-2.0
 *
 * subthz-stats: channel statistics and spatially consistent simulation for sub-THz routes
 * Copyright (C) 2026 subthz-stats contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * Public C interface of the subthz shared library.
 *
 * Conventions:
 *  - Every fallible function returns a subthz_status (0 on success). On
 *    failure, subthz_last_error() returns a thread-local message describing
 *    what went wrong; it stays valid until the next failing call on the
 *    same thread.
 *  - Status codes are grouped: 20..39 input parsing/validation, 40..59
 *    statistical preconditions, 60..79 convergence, 80+ environment.
 *    subthz_status_class() maps a status to the matching process exit code
 *    (0, 2, 3 or 4).
 *  - Output parameters are written only on success.
 *  - Objects returned through subthz_*_create/load functions must be
 *    released with the matching _free function.
 */

#ifndef SUBTHZ_H
#define SUBTHZ_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum subthz_status {
    SUBTHZ_OK = 0,
    SUBTHZ_ERR_INVALID_ARGUMENT = 1,

    SUBTHZ_ERR_PARSE = 20,
    SUBTHZ_ERR_DUPLICATE_LOCATION_ID = 21,
    SUBTHZ_ERR_UNKNOWN_RX_ID = 22,
    SUBTHZ_ERR_NON_MONOTONE_DELAYS = 23,
    SUBTHZ_ERR_NON_POSITIVE_POWER = 24,
    SUBTHZ_ERR_POWER_BELOW_THRESHOLD = 25,
    SUBTHZ_ERR_EMPTY_INPUT = 26,
    SUBTHZ_ERR_MIXED_RX_IDS = 27,
    SUBTHZ_ERR_DISTANCE_BELOW_REFERENCE = 28,
    SUBTHZ_ERR_VALIDATION = 29,

    SUBTHZ_ERR_ZERO_POWER = 40,
    SUBTHZ_ERR_RESULTANT_ZERO = 41,
    SUBTHZ_ERR_INSUFFICIENT_SAMPLES = 42,
    SUBTHZ_ERR_DEGENERATE_DISTANCES = 43,
    SUBTHZ_ERR_TOO_FEW_ENTRIES = 44,
    SUBTHZ_ERR_INSUFFICIENT_BINS = 45,

    SUBTHZ_ERR_NON_CONVERGENCE = 60,
    SUBTHZ_ERR_NEVER_CROSSES = 61,

    SUBTHZ_ERR_IO = 80,
    SUBTHZ_ERR_INTERNAL = 81
} subthz_status;

/* Correlation model families. */
#define SUBTHZ_CORR_EXP 0
#define SUBTHZ_CORR_EXPSIN 1

const char *subthz_version(void);

/* Stable name of a status code, e.g. "TooFewEntries". */
const char *subthz_status_name(int status);

/* Thread-local message of the last failing call on this thread. */
const char *subthz_last_error(void);

/* Process exit code for a status: 0 ok, 2 parse/validation (incl. I/O and
 * argument errors), 3 statistical precondition, 4 non-convergence,
 * 1 internal. */
int subthz_status_class(int status);

/* --- scalar channel statistics ------------------------------------- */

/* Free-space path loss at the 1 m reference distance. */
int subthz_fspl_1m_db(double freq_ghz, double *out_db);

/* Close-in model: FSPL(f,1m) + 10*ple*log10(d) + shadow_db. d >= 1 m. */
int subthz_ci_path_loss_db(double freq_ghz, double ple, double distance_m, double shadow_db,
                           double *out_db);

/* Least-squares path loss exponent over (distance, path loss) pairs with
 * the 1 m free-space anchor; out_sigma_db is the population RMS residual. */
int subthz_fit_ci(const double *distances_m, const double *path_loss_db, size_t n,
                  double freq_ghz, double *out_ple, double *out_sigma_db);

/* Power-weighted RMS spread of a delay profile. Order-free. */
int subthz_rms_delay_spread_ns(const double *delay_ns, const double *power_mw, size_t n,
                               double *out_ns);

/* Circular power-weighted azimuth spread sqrt(-2 ln |R|). */
int subthz_angular_spread_rad(const double *azimuth_rad, const double *power_mw, size_t n,
                              double *out_rad);

/* --- correlation models -------------------------------------------- */

/* family: SUBTHZ_CORR_EXP (d2_m ignored) or SUBTHZ_CORR_EXPSIN. */
int subthz_corr_model_eval(int family, double d1_m, double d2_m, double distance_m,
                           double *out_rho);

/* First crossing below 1/e, forward scan at step_m then bisection to 1e-3 m. */
int subthz_correlation_distance_m(int family, double d1_m, double d2_m, double d_max_m,
                                  double step_m, double *out_m);

/* --- spatial autocorrelation ---------------------------------------- */

typedef struct subthz_autocorr subthz_autocorr;

/* Distance-binned autocorrelation of values observed at (x, y) positions.
 * Bin k collects pairs within delta_d_m/2 of k*delta_d_m; bins with fewer
 * than min_pairs pairs (>= 2) or zero variance are omitted. */
int subthz_estimate_autocorr(const double *x_m, const double *y_m, const double *values,
                             size_t n, double delta_d_m, size_t min_pairs,
                             subthz_autocorr **out);

/* Loads an autocorrelation CSV written by this library. */
int subthz_autocorr_read(const char *path, subthz_autocorr **out);

size_t subthz_autocorr_bin_count(const subthz_autocorr *estimate);
double subthz_autocorr_delta_d_m(const subthz_autocorr *estimate);
int subthz_autocorr_bin(const subthz_autocorr *estimate, size_t index, double *out_lag_m,
                        double *out_rho, size_t *out_pair_count);
void subthz_autocorr_free(subthz_autocorr *estimate);

/* Deterministic grid + local-refinement least-squares fit of a correlation
 * model to the binned estimate. weighted != 0 weights bins by pair count.
 * out_corr_distance_m receives NaN when the fit never drops below 1/e. */
int subthz_fit_corr_model(const subthz_autocorr *estimate, int family, int weighted,
                          double *out_d1_m, double *out_d2_m, double *out_rmse,
                          double *out_corr_distance_m);

/* --- correlated field sampling -------------------------------------- */

/* One realization of a correlated Gaussian field at n (x, y) points:
 * mean + std_dev * (L z) where L factors the (PSD-repaired) correlation
 * matrix of the model. has_clip != 0 floors values at clip_min. The output
 * is a pure function of the inputs, identical across platforms. */
int subthz_sample_field(const double *x_m, const double *y_m, size_t n, int family,
                        double d1_m, double d2_m, double mean, double std_dev, int has_clip,
                        double clip_min, uint64_t seed, double *out_values);

/* --- route scenarios and simulation ---------------------------------- */

typedef struct subthz_scenario subthz_scenario;

/* Loads a scenario description file (key = value format). */
int subthz_scenario_load(const char *path, subthz_scenario **out);

/* Built-in 142 GHz urban-microcell street-canyon route (34 waypoints). */
int subthz_scenario_umi_default(subthz_scenario **out);

int subthz_scenario_set_seed(subthz_scenario *scenario, uint64_t seed);
size_t subthz_scenario_waypoint_count(const subthz_scenario *scenario);
void subthz_scenario_free(subthz_scenario *scenario);

/* Draws n_realizations correlated parameter maps and writes
 * locations_r####.csv per realization, pooled autocorr_{sf,ds,as}.csv and
 * summary.json into out_dir. delta_d_m/min_pairs configure the ensemble
 * autocorrelation (pass 0 for the defaults 0.05 m / 2). Returns the first
 * recorded statistical issue as a status (outputs are still written). */
int subthz_simulate_to_dir(const subthz_scenario *scenario, size_t n_realizations,
                           const char *out_dir, double delta_d_m, size_t min_pairs);

/* --- file-level analysis --------------------------------------------- */

/* Analyzes a campaign CSV or locations CSV and writes locations.csv,
 * autocorr_{sf,ds,as}.csv (where computable) and fits.json into out_dir.
 * family: SUBTHZ_CORR_EXP/EXPSIN for the correlation fits. Pass 0 for
 * delta_d_m/min_pairs defaults. If analysis sections fail while outputs are
 * still produced, the first issue's status is returned. */
int subthz_analyze_file(const char *input_path, const char *out_dir, double delta_d_m,
                        size_t min_pairs, int family, int weighted);

/* Fits a correlation model to an autocorrelation CSV; *out_json receives a
 * malloc'd JSON document, release it with subthz_string_free. */
int subthz_fit_file_json(const char *autocorr_csv_path, int family, int weighted,
                         char **out_json);

void subthz_string_free(char *s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SUBTHZ_H */
