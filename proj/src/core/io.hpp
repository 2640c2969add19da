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
//
// File formats. All text, all deterministic.
//
// Campaign CSV (input): directional capture samples, one per row. Rows with
// the same rx and pointing angles form one capture while contiguous.
//
//   # subthz-campaign v1
//   # center_freq_ghz = 142
//   # tx_power_dbm = 0
//   # tx_gain_dbi = 27
//   # rx_gain_dbi = 27
//   # noise_threshold_db = 25
//   # delay_bin_width_ns = 2
//   # tx_position_m = 0.5 -24 4
//   rx_id,x_m,y_m,z_m,los,tx_az_deg,tx_el_deg,rx_az_deg,rx_el_deg,delay_ns,power_dbm,excess_loss_db
//
// Locations CSV (output of analyze/simulate, accepted back as input): one
// row per route point. Power-like columns carry 6 decimals, delays 3.
//
//   # subthz-locations v1
//   # center_freq_ghz = 142
//   rx_id,x_m,y_m,z_m,los,tr_distance_m,path_loss_db,shadow_fading_db,
//   delay_spread_ns,angular_spread_rad,excess_loss_db
//
// Autocorrelation CSV: lag_m,rho,pair_count rows under the bin width header.
//
// Scenario file: `key = value` lines (see read_scenario for the key list).

#ifndef SUBTHZ_CORE_IO_HPP
#define SUBTHZ_CORE_IO_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/route_sim.hpp"
#include "core/spatial_stats.hpp"
#include "core/types.hpp"

namespace subthz {

inline constexpr const char *CAMPAIGN_MAGIC = "# subthz-campaign v1";
inline constexpr const char *LOCATIONS_MAGIC = "# subthz-locations v1";
inline constexpr const char *AUTOCORR_MAGIC = "# subthz-autocorr v1";
inline constexpr const char *SCENARIO_MAGIC = "# subthz-scenario v1";

// Fixed-point text for CSV cells; never emits "-0.000...".
std::string format_fixed(double value, int decimals);

// Parse errors carry `path:line:` context and name the offending column or
// key. Unknown columns and header keys are rejected by name.
Campaign read_campaign_csv(const std::string &path);

struct LocationsFile {
    double freq_ghz = 0.0;
    std::vector<RxRecord> records;
    std::vector<std::optional<double>> shadow_db; // parallel to records, may be empty cells
};

LocationsFile read_locations_csv(const std::string &path);
void write_locations_csv(const std::string &path, double freq_ghz,
                         std::span<const RxRecord> records,
                         std::span<const std::optional<double>> shadow_db);

AutocorrEstimate read_autocorr_csv(const std::string &path);
void write_autocorr_csv(const std::string &path, const AutocorrEstimate &estimate);

RouteScenario read_scenario(const std::string &path);

enum class InputKind { CampaignCsv, LocationsCsv };
InputKind detect_input_kind(const std::string &path);

std::string fits_json(const RouteReport &report);
std::string summary_json(const EnsembleSummary &summary);
std::string corr_fit_json(const FittedCorrModel &fit);

// Writes via a temp file in the same directory plus rename, so readers never
// observe a half-written file.
void write_text_file(const std::string &path, const std::string &content);

// End-to-end analysis of a campaign or locations file.
struct AnalyzeResult {
    double freq_ghz = 0.0;
    std::vector<RxRecord> records;
    RouteReport report;
};

AnalyzeResult analyze_input_file(const std::string &path, const AnalyzeOptions &options);

// locations.csv + autocorr_{sf,ds,as}.csv (where estimates exist) + fits.json
void write_analyze_outputs(const AnalyzeResult &result, const std::string &out_dir);

// locations_r%04zu.csv per realization + ensemble autocorr CSVs + summary.json
void write_simulate_outputs(std::span<const SimRealization> realizations,
                            const EnsembleSummary &summary, const std::string &out_dir);

} // namespace subthz

#endif
