// SPDX-License-Identifier: Apache-2.0
//
// subthz-stats: channel statistics and spatially consistent simulation for sub-THz routes
// Copyright (C) 2026 subthz-stats contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "subthz/subthz.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/field_gen.hpp"
#include "core/io.hpp"
#include "core/pathloss.hpp"
#include "core/pdp_stats.hpp"
#include "core/route_sim.hpp"
#include "core/spatial_stats.hpp"
#include "core/types.hpp"

using namespace subthz;

namespace {

thread_local std::string g_last_error;

void set_error(const std::string &message)
{
    g_last_error = message;
}

// Exceptions never cross the C boundary; they are converted to status codes
// here and the message is parked for subthz_last_error().
template <typename Fn> int guarded(Fn &&fn)
{
    try
    {
        return fn();
    }
    catch (const Error &e)
    {
        set_error(e.what());
        return static_cast<int>(e.code());
    }
    catch (const std::bad_alloc &)
    {
        set_error("InternalError: out of memory");
        return SUBTHZ_ERR_INTERNAL;
    }
    catch (const std::exception &e)
    {
        set_error(std::string("InternalError: ") + e.what());
        return SUBTHZ_ERR_INTERNAL;
    }
}

int require(bool condition, const char *message)
{
    if (condition)
        return SUBTHZ_OK;
    set_error(std::string("InvalidArgument: ") + message);
    return SUBTHZ_ERR_INVALID_ARGUMENT;
}

CorrModel make_model(int family, double d1_m, double d2_m)
{
    if (family != SUBTHZ_CORR_EXP && family != SUBTHZ_CORR_EXPSIN)
        throw Error(ErrorCode::InvalidArgument, "family must be SUBTHZ_CORR_EXP or SUBTHZ_CORR_EXPSIN");
    CorrModel m;
    m.family = family == SUBTHZ_CORR_EXP ? CorrFamily::Exponential : CorrFamily::ExpDecaySinusoid;
    m.d1_m = d1_m;
    m.d2_m = family == SUBTHZ_CORR_EXP ? 0.0 : d2_m;
    return m;
}

// Status of the first recorded issue, used when outputs were produced but
// some analysis sections could not run.
int first_issue_status(const std::vector<Issue> &issues)
{
    if (issues.empty())
        return SUBTHZ_OK;
    std::string all;
    for (const Issue &issue : issues)
    {
        if (!all.empty())
            all += "; ";
        all += issue.message;
    }
    set_error(all);
    return static_cast<int>(issues.front().code);
}

} // namespace

struct subthz_autocorr {
    AutocorrEstimate estimate;
};

struct subthz_scenario {
    RouteScenario scenario;
};

extern "C" {

const char *subthz_version(void)
{
    return "0.1.0";
}

const char *subthz_status_name(int status)
{
    if (status == SUBTHZ_OK)
        return "Ok";
    return error_code_name(static_cast<ErrorCode>(status));
}

const char *subthz_last_error(void)
{
    return g_last_error.c_str();
}

int subthz_status_class(int status)
{
    if (status == SUBTHZ_OK)
        return 0;
    if (status >= 40 && status < 60)
        return 3;
    if (status >= 60 && status < 80)
        return 4;
    if (status == SUBTHZ_ERR_INTERNAL)
        return 1;
    return 2; // parse, validation, argument and I/O problems
}

int subthz_fspl_1m_db(double freq_ghz, double *out_db)
{
    if (int rc = require(out_db != nullptr, "out_db is null"))
        return rc;
    return guarded([&] {
        *out_db = fspl_1m_db(freq_ghz);
        return SUBTHZ_OK;
    });
}

int subthz_ci_path_loss_db(double freq_ghz, double ple, double distance_m, double shadow_db,
                           double *out_db)
{
    if (int rc = require(out_db != nullptr, "out_db is null"))
        return rc;
    return guarded([&] {
        *out_db = ci_path_loss_db({freq_ghz, ple, 0.0}, distance_m, shadow_db);
        return SUBTHZ_OK;
    });
}

int subthz_fit_ci(const double *distances_m, const double *path_loss_db, size_t n,
                  double freq_ghz, double *out_ple, double *out_sigma_db)
{
    if (int rc = require(distances_m && path_loss_db && out_ple && out_sigma_db,
                         "array or output pointer is null"))
        return rc;
    return guarded([&] {
        std::vector<PathLossSample> samples(n);
        for (size_t i = 0; i < n; i++)
            samples[i] = {int(i), distances_m[i], path_loss_db[i], std::nullopt};
        CiModel m = fit_ci(samples, freq_ghz);
        *out_ple = m.ple;
        *out_sigma_db = m.sigma_db;
        return SUBTHZ_OK;
    });
}

int subthz_rms_delay_spread_ns(const double *delay_ns, const double *power_mw, size_t n,
                               double *out_ns)
{
    if (int rc = require(delay_ns && power_mw && out_ns, "array or output pointer is null"))
        return rc;
    return guarded([&] {
        std::vector<PdpSample> samples(n);
        for (size_t i = 0; i < n; i++)
            samples[i] = {delay_ns[i], power_mw[i]};
        *out_ns = rms_delay_spread_ns(std::span<const PdpSample>(samples));
        return SUBTHZ_OK;
    });
}

int subthz_angular_spread_rad(const double *azimuth_rad, const double *power_mw, size_t n,
                              double *out_rad)
{
    if (int rc = require(azimuth_rad && power_mw && out_rad, "array or output pointer is null"))
        return rc;
    return guarded([&] {
        std::vector<Mpc> spectrum(n);
        for (size_t i = 0; i < n; i++)
            spectrum[i] = {azimuth_rad[i], power_mw[i]};
        *out_rad = angular_spread_rad(spectrum);
        return SUBTHZ_OK;
    });
}

int subthz_corr_model_eval(int family, double d1_m, double d2_m, double distance_m,
                           double *out_rho)
{
    if (int rc = require(out_rho != nullptr, "out_rho is null"))
        return rc;
    return guarded([&] {
        *out_rho = eval_corr_model(make_model(family, d1_m, d2_m), distance_m);
        return SUBTHZ_OK;
    });
}

int subthz_correlation_distance_m(int family, double d1_m, double d2_m, double d_max_m,
                                  double step_m, double *out_m)
{
    if (int rc = require(out_m != nullptr, "out_m is null"))
        return rc;
    return guarded([&] {
        *out_m = correlation_distance_m(make_model(family, d1_m, d2_m), d_max_m, step_m);
        return SUBTHZ_OK;
    });
}

int subthz_estimate_autocorr(const double *x_m, const double *y_m, const double *values,
                             size_t n, double delta_d_m, size_t min_pairs, subthz_autocorr **out)
{
    if (int rc = require(x_m && y_m && values && out, "array or output pointer is null"))
        return rc;
    return guarded([&] {
        std::vector<ParamEntry> entries(n);
        for (size_t i = 0; i < n; i++)
            entries[i] = {{int(i), x_m[i], y_m[i], 0.0}, values[i]};
        auto handle = new subthz_autocorr{estimate_autocorr(entries, delta_d_m, min_pairs)};
        *out = handle;
        return SUBTHZ_OK;
    });
}

int subthz_autocorr_read(const char *path, subthz_autocorr **out)
{
    if (int rc = require(path && out, "path or output pointer is null"))
        return rc;
    return guarded([&] {
        auto handle = new subthz_autocorr{read_autocorr_csv(path)};
        *out = handle;
        return SUBTHZ_OK;
    });
}

size_t subthz_autocorr_bin_count(const subthz_autocorr *estimate)
{
    return estimate ? estimate->estimate.bins.size() : 0;
}

double subthz_autocorr_delta_d_m(const subthz_autocorr *estimate)
{
    return estimate ? estimate->estimate.delta_d_m : 0.0;
}

int subthz_autocorr_bin(const subthz_autocorr *estimate, size_t index, double *out_lag_m,
                        double *out_rho, size_t *out_pair_count)
{
    if (int rc = require(estimate != nullptr, "estimate is null"))
        return rc;
    if (int rc = require(index < estimate->estimate.bins.size(), "bin index out of range"))
        return rc;
    const AutocorrBin &b = estimate->estimate.bins[index];
    if (out_lag_m)
        *out_lag_m = b.distance_m;
    if (out_rho)
        *out_rho = b.rho;
    if (out_pair_count)
        *out_pair_count = b.pair_count;
    return SUBTHZ_OK;
}

void subthz_autocorr_free(subthz_autocorr *estimate)
{
    delete estimate;
}

int subthz_fit_corr_model(const subthz_autocorr *estimate, int family, int weighted,
                          double *out_d1_m, double *out_d2_m, double *out_rmse,
                          double *out_corr_distance_m)
{
    if (int rc = require(estimate != nullptr, "estimate is null"))
        return rc;
    return guarded([&] {
        CorrModel probe = make_model(family, 1.0, 1.0); // validates the family id
        FittedCorrModel fit =
            fit_corr_model(estimate->estimate, probe.family, FitOptions{weighted != 0});
        if (out_d1_m)
            *out_d1_m = fit.model.d1_m;
        if (out_d2_m)
            *out_d2_m = fit.model.d2_m;
        if (out_rmse)
            *out_rmse = fit.rmse;
        if (out_corr_distance_m)
            *out_corr_distance_m = fit.corr_distance_m ? *fit.corr_distance_m : NAN;
        return SUBTHZ_OK;
    });
}

int subthz_sample_field(const double *x_m, const double *y_m, size_t n, int family,
                        double d1_m, double d2_m, double mean, double std_dev, int has_clip,
                        double clip_min, uint64_t seed, double *out_values)
{
    if (int rc = require(x_m && y_m && out_values, "array or output pointer is null"))
        return rc;
    return guarded([&] {
        std::vector<Location> points(n);
        for (size_t i = 0; i < n; i++)
            points[i] = {int(i), x_m[i], y_m[i], 0.0};
        FieldSpec spec;
        spec.corr_model = make_model(family, d1_m, d2_m);
        spec.mean = mean;
        spec.std_dev = std_dev;
        if (has_clip)
            spec.clip_min = clip_min;
        std::vector<double> values = sample_field(points, spec, seed);
        std::copy(values.begin(), values.end(), out_values);
        return SUBTHZ_OK;
    });
}

int subthz_scenario_load(const char *path, subthz_scenario **out)
{
    if (int rc = require(path && out, "path or output pointer is null"))
        return rc;
    return guarded([&] {
        RouteScenario s = read_scenario(path);
        validate_scenario(s);
        *out = new subthz_scenario{std::move(s)};
        return SUBTHZ_OK;
    });
}

int subthz_scenario_umi_default(subthz_scenario **out)
{
    if (int rc = require(out != nullptr, "output pointer is null"))
        return rc;
    return guarded([&] {
        *out = new subthz_scenario{default_umi_scenario()};
        return SUBTHZ_OK;
    });
}

int subthz_scenario_set_seed(subthz_scenario *scenario, uint64_t seed)
{
    if (int rc = require(scenario != nullptr, "scenario is null"))
        return rc;
    scenario->scenario.seed = seed;
    return SUBTHZ_OK;
}

size_t subthz_scenario_waypoint_count(const subthz_scenario *scenario)
{
    return scenario ? scenario->scenario.waypoints.size() : 0;
}

void subthz_scenario_free(subthz_scenario *scenario)
{
    delete scenario;
}

int subthz_simulate_to_dir(const subthz_scenario *scenario, size_t n_realizations,
                           const char *out_dir, double delta_d_m, size_t min_pairs)
{
    if (int rc = require(scenario && out_dir, "scenario or out_dir is null"))
        return rc;
    return guarded([&] {
        AnalyzeOptions opt;
        if (delta_d_m > 0.0)
            opt.delta_d_m = delta_d_m;
        if (min_pairs > 0)
            opt.min_pairs = min_pairs;
        std::vector<SimRealization> reals = simulate(scenario->scenario, n_realizations);
        EnsembleSummary summary = summarize_ensemble(scenario->scenario, reals, opt);
        write_simulate_outputs(reals, summary, out_dir);
        return first_issue_status(summary.issues);
    });
}

int subthz_analyze_file(const char *input_path, const char *out_dir, double delta_d_m,
                        size_t min_pairs, int family, int weighted)
{
    if (int rc = require(input_path && out_dir, "input_path or out_dir is null"))
        return rc;
    return guarded([&] {
        AnalyzeOptions opt;
        if (delta_d_m > 0.0)
            opt.delta_d_m = delta_d_m;
        if (min_pairs > 0)
            opt.min_pairs = min_pairs;
        opt.family = make_model(family, 1.0, 1.0).family;
        opt.weighted = weighted != 0;
        AnalyzeResult result = analyze_input_file(input_path, opt);
        write_analyze_outputs(result, out_dir);
        return first_issue_status(result.report.issues);
    });
}

int subthz_fit_file_json(const char *autocorr_csv_path, int family, int weighted,
                         char **out_json)
{
    if (int rc = require(autocorr_csv_path && out_json, "path or output pointer is null"))
        return rc;
    return guarded([&] {
        AutocorrEstimate est = read_autocorr_csv(autocorr_csv_path);
        CorrModel probe = make_model(family, 1.0, 1.0);
        FittedCorrModel fit = fit_corr_model(est, probe.family, FitOptions{weighted != 0});
        std::string text = corr_fit_json(fit);
        char *buf = static_cast<char *>(std::malloc(text.size() + 1));
        if (!buf)
            throw std::bad_alloc();
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *out_json = buf;
        return SUBTHZ_OK;
    });
}

void subthz_string_free(char *s)
{
    std::free(s);
}

} // extern "C"
