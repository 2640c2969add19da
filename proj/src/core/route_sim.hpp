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

#ifndef SUBTHZ_CORE_ROUTE_SIM_HPP
#define SUBTHZ_CORE_ROUTE_SIM_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/pathloss.hpp"
#include "core/spatial_stats.hpp"
#include "core/types.hpp"

namespace subthz {

struct ClassStats {
    double mean = 0.0;
    double std_dev = 0.0;
};

struct Waypoint {
    Location location;
    LosClass los = LosClass::Los;
    std::optional<double> excess_loss_db;
};

// Everything needed to generate spatially consistent large-scale parameters
// along a 2D route: per-class path loss models, correlation models for
// shadow fading (SF), delay spread (DS) and azimuth spread (AS), and
// per-class marginal statistics for DS and AS.
struct RouteScenario {
    double freq_ghz = 0.0;
    Location tx;
    std::vector<Waypoint> waypoints;
    CiModel los_model, nlos_model;
    CorrModel sf_corr, ds_corr, as_corr;
    ClassStats ds_los_ns, ds_nlos_ns;
    ClassStats as_los_rad, as_nlos_rad;
    std::uint64_t seed = 1;
};

// Built-in scenario: a 142 GHz urban-microcell street-canyon route. 34
// receiver positions, 3 m apart, around a 39 m x 12 m rectangle; link
// distances span 24 to 53 m. Two positions carry a vegetation excess loss.
RouteScenario default_umi_scenario();

// Structural checks; throws on the first violation. Notable cases:
//   DistanceBelowReference  a waypoint closer than the 1 m model anchor
//   DuplicateLocationId     two waypoints share an id
//   ValidationError         non-finite or out-of-range scenario numbers
void validate_scenario(const RouteScenario &scenario);

struct SimRealization {
    std::size_t index = 0;
    std::vector<RxRecord> records;  // one per waypoint, scenario order
    std::vector<double> shadow_db;  // generated shadow fading per waypoint
};

// Draws n_realizations independent parameter maps over the scenario route.
// Per realization and parameter, a correlated standard normal field is
// generated (see sample_field); shadow fading scales it by the class sigma,
// DS and AS map it through a lognormal with moment-matched class mean and
// standard deviation, keeping both strictly positive. Path loss combines the
// class model, the shadow value and any waypoint excess loss.
//
// Generated numbers are quantized to the file precision (path loss and
// angles 1e-6, delays 1e-3 ns) so that writing records to disk and reading
// them back is lossless. Seeds for (parameter, realization) streams are
// derived from scenario.seed; output is reproducible bit for bit.
std::vector<SimRealization> simulate(const RouteScenario &scenario, std::size_t n_realizations);

struct AnalyzeOptions {
    double delta_d_m = 0.05;
    std::size_t min_pairs = 2;
    CorrFamily family = CorrFamily::ExpDecaySinusoid;
    bool weighted = false;
};

struct Issue {
    ErrorCode code;
    std::string message;
};

// Analysis chain of one parameter series: binned autocorrelation, model fit,
// correlation distance. Stages that cannot run are skipped and recorded.
struct ParamAnalysis {
    std::optional<AutocorrEstimate> autocorr;
    std::optional<FittedCorrModel> fit;
    std::vector<Issue> issues;
};

struct ClassFit {
    CiModel model;
    std::size_t n_samples = 0; // samples used in the fit (annotated ones excluded)
};

// Full statistical description extracted from one set of route records.
struct RouteReport {
    double freq_ghz = 0.0;
    std::optional<ClassFit> los_fit, nlos_fit;
    // Per input record: residual against the fitted class model, with any
    // excess loss removed first. Empty when the record's class has no fit.
    std::vector<std::optional<double>> shadow_db;
    ParamAnalysis shadow, delay_spread, angular_spread;
    std::optional<ClassStats> ds_los_ns, ds_nlos_ns, as_los_rad, as_nlos_rad;
    std::vector<Issue> issues; // union of section issues, reporting order
};

// Runs the measurement-analysis pipeline on route records: per-class path
// loss fits (excess-annotated records excluded), shadow fading extraction,
// and the autocorrelation chain for SF, DS and AS. Sections that fail their
// preconditions are recorded as issues; everything computable is returned.
// Throws TooFewEntries when `records` is empty.
RouteReport analyze_route(std::span<const RxRecord> records, double freq_ghz,
                          const AnalyzeOptions &options = {});

struct WaypointStat {
    int rx_id = 0;
    double mean_path_loss_db = 0.0;
    double std_path_loss_db = 0.0;
};

struct FitStats {
    double mean_ple = 0.0;
    double mean_sigma_db = 0.0;
    std::size_t n_realizations = 0;
};

// Ensemble statistics across simulate() realizations: per-waypoint path loss
// moments, mean per-realization class fits, pooled autocorrelation (pairs
// from all realizations share the distance bins) with model fits, and pooled
// per-class DS/AS moments.
struct EnsembleSummary {
    std::size_t n_realizations = 0;
    std::uint64_t seed = 0;
    double freq_ghz = 0.0;
    std::vector<WaypointStat> waypoints;
    std::optional<FitStats> los_fit, nlos_fit;
    ParamAnalysis shadow, delay_spread, angular_spread;
    std::optional<ClassStats> ds_los_ns, ds_nlos_ns, as_los_rad, as_nlos_rad;
    std::vector<Issue> issues;
};

EnsembleSummary summarize_ensemble(const RouteScenario &scenario,
                                   std::span<const SimRealization> realizations,
                                   const AnalyzeOptions &options = {});

// Collapses a validated measurement campaign into one record per receiver
// that has captures: the synthesized omni profile feeds path loss and delay
// spread, the azimuth power spectrum feeds angular spread. Requires
// campaign.tx_position for link distances (ValidationError otherwise);
// receivers without captures are skipped.
std::vector<RxRecord> records_from_campaign(const Campaign &campaign);

} // namespace subthz

#endif
