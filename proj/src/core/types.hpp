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

#ifndef SUBTHZ_CORE_TYPES_HPP
#define SUBTHZ_CORE_TYPES_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace subthz {

enum class LosClass { Los, Nlos };

const char *los_class_name(LosClass c);
LosClass los_class_from_name(const std::string &name);

struct Location {
    int id = 0;
    double x_m = 0.0;
    double y_m = 0.0;
    double z_m = 0.0;
};

// Horizontal separation. Route geometry and field correlation are planar;
// antenna heights enter only through the 3D variant used for link distances.
double distance_2d_m(const Location &a, const Location &b);
double distance_3d_m(const Location &a, const Location &b);

struct PointingAngle {
    double azimuth_deg = 0.0;   // [0, 360)
    double elevation_deg = 0.0; // [-90, 90]
};

struct PdpSample {
    double delay_ns = 0.0;
    double power_mw = 0.0;
};

// One power delay profile captured with a fixed TX/RX antenna pointing pair.
// Delays are absolute propagation delays.
struct DirectionalPdp {
    int rx_id = 0;
    PointingAngle tx_pointing;
    PointingAngle rx_pointing;
    std::vector<PdpSample> samples;
};

// Direction-less profile synthesized from directional captures. Delays sit on
// the synthesis grid (left bin edges, integer multiples of the bin width).
struct OmniPdp {
    int rx_id = 0;
    double bin_width_ns = 0.0;
    std::vector<PdpSample> samples;
};

// Azimuth spectrum entry: total received power arriving from one direction.
struct Mpc {
    double azimuth_rad = 0.0;
    double power_mw = 0.0;
};

struct LinkBudget {
    double tx_power_dbm = 0.0;
    double tx_gain_dbi = 0.0;
    double rx_gain_dbi = 0.0;
};

struct DelayGrid {
    double bin_width_ns = 2.0;
};

// Per-receiver annotations that ride along with the measured profiles.
// excess_loss_db marks locations with a known obstruction whose extra loss is
// not part of the propagation class being fitted.
struct RxMeta {
    LosClass los = LosClass::Los;
    std::optional<double> excess_loss_db;
};

// A validated measurement campaign: receiver grid plus directional captures
// grouped by receiver. `locations` keeps input order; `location_index` maps
// receiver id to its position in `locations` and `meta`.
struct Campaign {
    double center_freq_ghz = 0.0;
    LinkBudget budget;
    DelayGrid grid;
    double noise_threshold_db = 25.0;
    std::optional<Location> tx_position;
    std::vector<Location> locations;
    std::vector<RxMeta> meta;
    std::map<int, std::size_t> location_index;
    std::map<int, std::vector<DirectionalPdp>> pdps;
};

// Checks structural invariants and cross-references, then regroups the flat
// capture list by receiver id. Throws subthz::Error on the first violation:
//   DuplicateLocationId  two locations share an id
//   UnknownRxId          a capture references a receiver that has no location
//   EmptyInput           no locations, or a capture without samples
//   NonMonotoneDelays    delays not strictly increasing by >= one bin width
//   NonPositivePower     a sample power <= 0 mW
//   PowerBelowThreshold  a sample more than noise_threshold_db below the peak
//                        of its own capture
//   ValidationError      non-finite coordinates or pointing out of range
Campaign validate_campaign(std::vector<DirectionalPdp> pdps,
                           std::vector<Location> locations,
                           std::vector<RxMeta> meta,
                           double center_freq_ghz,
                           const LinkBudget &budget,
                           const DelayGrid &grid,
                           double noise_threshold_db,
                           std::optional<Location> tx_position = std::nullopt);

// One analyzed or simulated route point: large-scale parameters at a
// receiver location.
struct RxRecord {
    Location location;
    LosClass los = LosClass::Los;
    double tr_distance_m = 0.0;
    double path_loss_db = 0.0;
    double delay_spread_ns = 0.0;
    double angular_spread_rad = 0.0;
    std::optional<double> excess_loss_db;
};

} // namespace subthz

#endif
