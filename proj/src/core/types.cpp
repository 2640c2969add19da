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

#include "core/types.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/units.hpp"

namespace subthz {

const char *los_class_name(LosClass c)
{
    return c == LosClass::Los ? "LOS" : "NLOS";
}

LosClass los_class_from_name(const std::string &name)
{
    if (name == "LOS")
        return LosClass::Los;
    if (name == "NLOS")
        return LosClass::Nlos;
    throw Error(ErrorCode::ParseError, "los class must be LOS or NLOS, got '" + name + "'");
}

double distance_2d_m(const Location &a, const Location &b)
{
    return std::hypot(a.x_m - b.x_m, a.y_m - b.y_m);
}

double distance_3d_m(const Location &a, const Location &b)
{
    return std::hypot(a.x_m - b.x_m, a.y_m - b.y_m, a.z_m - b.z_m);
}

static void check_location(const Location &loc)
{
    if (!std::isfinite(loc.x_m) || !std::isfinite(loc.y_m) || !std::isfinite(loc.z_m))
        throw Error(ErrorCode::ValidationError,
                    "location " + std::to_string(loc.id) + " has non-finite coordinates");
}

static void check_pointing(const PointingAngle &p, int rx_id, const char *which)
{
    if (!std::isfinite(p.azimuth_deg) || p.azimuth_deg < 0.0 || p.azimuth_deg >= 360.0)
        throw Error(ErrorCode::ValidationError,
                    std::string(which) + " azimuth for rx " + std::to_string(rx_id) +
                        " must lie in [0, 360), got " + std::to_string(p.azimuth_deg));
    if (!std::isfinite(p.elevation_deg) || p.elevation_deg < -90.0 || p.elevation_deg > 90.0)
        throw Error(ErrorCode::ValidationError,
                    std::string(which) + " elevation for rx " + std::to_string(rx_id) +
                        " must lie in [-90, 90], got " + std::to_string(p.elevation_deg));
}

Campaign validate_campaign(std::vector<DirectionalPdp> pdps,
                           std::vector<Location> locations,
                           std::vector<RxMeta> meta,
                           double center_freq_ghz,
                           const LinkBudget &budget,
                           const DelayGrid &grid,
                           double noise_threshold_db,
                           std::optional<Location> tx_position)
{
    if (locations.empty())
        throw Error(ErrorCode::EmptyInput, "campaign has no receiver locations");
    if (!(center_freq_ghz > 0.0) || !std::isfinite(center_freq_ghz))
        throw Error(ErrorCode::ValidationError, "center frequency must be positive");
    if (!(grid.bin_width_ns > 0.0) || !std::isfinite(grid.bin_width_ns))
        throw Error(ErrorCode::ValidationError, "delay bin width must be positive");
    if (!(noise_threshold_db > 0.0) || !std::isfinite(noise_threshold_db))
        throw Error(ErrorCode::ValidationError, "noise threshold must be positive");
    if (meta.empty())
        meta.assign(locations.size(), RxMeta{});
    if (meta.size() != locations.size())
        throw Error(ErrorCode::ValidationError, "location metadata length mismatch");

    Campaign c;
    c.center_freq_ghz = center_freq_ghz;
    c.budget = budget;
    c.grid = grid;
    c.noise_threshold_db = noise_threshold_db;
    c.tx_position = tx_position;

    for (std::size_t i = 0; i < locations.size(); i++)
    {
        check_location(locations[i]);
        if (meta[i].excess_loss_db && !(*meta[i].excess_loss_db > 0.0))
            throw Error(ErrorCode::ValidationError,
                        "excess loss at location " + std::to_string(locations[i].id) +
                            " must be positive");
        auto [it, inserted] = c.location_index.emplace(locations[i].id, i);
        (void)it;
        if (!inserted)
            throw Error(ErrorCode::DuplicateLocationId,
                        "location id " + std::to_string(locations[i].id) + " appears twice");
    }
    c.locations = std::move(locations);
    c.meta = std::move(meta);

    double min_spacing_ns = grid.bin_width_ns - 1e-9;
    for (auto &pdp : pdps)
    {
        if (!c.location_index.count(pdp.rx_id))
            throw Error(ErrorCode::UnknownRxId,
                        "capture references rx id " + std::to_string(pdp.rx_id) +
                            " which has no location");
        check_pointing(pdp.tx_pointing, pdp.rx_id, "tx");
        check_pointing(pdp.rx_pointing, pdp.rx_id, "rx");
        if (pdp.samples.empty())
            throw Error(ErrorCode::EmptyInput,
                        "capture for rx " + std::to_string(pdp.rx_id) + " has no samples");

        double peak_mw = 0.0;
        for (std::size_t k = 0; k < pdp.samples.size(); k++)
        {
            const PdpSample &s = pdp.samples[k];
            if (!std::isfinite(s.delay_ns) || s.delay_ns < 0.0)
                throw Error(ErrorCode::ValidationError,
                            "rx " + std::to_string(pdp.rx_id) + ": delay must be >= 0 ns");
            if (k > 0 && s.delay_ns - pdp.samples[k - 1].delay_ns < min_spacing_ns)
                throw Error(ErrorCode::NonMonotoneDelays,
                            "rx " + std::to_string(pdp.rx_id) +
                                ": delays must increase by at least the bin width (" +
                                std::to_string(grid.bin_width_ns) + " ns)");
            if (!(s.power_mw > 0.0) || !std::isfinite(s.power_mw))
                throw Error(ErrorCode::NonPositivePower,
                            "rx " + std::to_string(pdp.rx_id) + ": sample power must be > 0 mW");
            peak_mw = std::max(peak_mw, s.power_mw);
        }

        // Dynamic-range check is per capture, relative to that capture's own
        // peak: each pointing pair has its own noise floor.
        double floor_mw = peak_mw * db_to_linear(-noise_threshold_db);
        for (const PdpSample &s : pdp.samples)
            if (s.power_mw < floor_mw * (1.0 - 1e-12))
                throw Error(ErrorCode::PowerBelowThreshold,
                            "rx " + std::to_string(pdp.rx_id) + ": sample more than " +
                                std::to_string(noise_threshold_db) + " dB below the capture peak");
    }

    for (auto &pdp : pdps)
        c.pdps[pdp.rx_id].push_back(std::move(pdp));

    return c;
}

} // namespace subthz
