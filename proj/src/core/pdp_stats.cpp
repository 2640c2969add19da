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

#include "core/pdp_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

#include "core/errors.hpp"
#include "core/units.hpp"

namespace subthz {

// Index of the bin [k*w, (k+1)*w) containing `delay`. floor() of the quotient
// is corrected against exact edge products so that left bin edges map back to
// their own bin for any representable width.
static std::int64_t bin_index(double delay_ns, double width_ns)
{
    auto k = static_cast<std::int64_t>(std::floor(delay_ns / width_ns));
    if (double(k + 1) * width_ns <= delay_ns)
        k++;
    else if (double(k) * width_ns > delay_ns)
        k--;
    return k;
}

static void check_grid(const DelayGrid &grid)
{
    if (!(grid.bin_width_ns > 0.0) || !std::isfinite(grid.bin_width_ns))
        throw Error(ErrorCode::InvalidArgument, "delay bin width must be positive");
}

OmniPdp synthesize_omni_pdp(std::span<const DirectionalPdp> pdps, const DelayGrid &grid)
{
    check_grid(grid);
    if (pdps.empty())
        throw Error(ErrorCode::EmptyInput, "omni synthesis needs at least one capture");
    int rx_id = pdps.front().rx_id;
    for (const DirectionalPdp &p : pdps)
        if (p.rx_id != rx_id)
            throw Error(ErrorCode::MixedRxIds,
                        "omni synthesis mixes rx ids " + std::to_string(rx_id) + " and " +
                            std::to_string(p.rx_id));

    std::map<std::int64_t, double> best;
    for (const DirectionalPdp &p : pdps)
        for (const PdpSample &s : p.samples)
        {
            auto k = bin_index(s.delay_ns, grid.bin_width_ns);
            auto [it, inserted] = best.emplace(k, s.power_mw);
            if (!inserted && s.power_mw > it->second)
                it->second = s.power_mw;
        }

    OmniPdp omni;
    omni.rx_id = rx_id;
    omni.bin_width_ns = grid.bin_width_ns;
    omni.samples.reserve(best.size());
    for (auto [k, p_mw] : best)
        omni.samples.push_back({double(k) * grid.bin_width_ns, p_mw});
    return omni;
}

double omni_path_loss_db(const OmniPdp &omni, const LinkBudget &budget)
{
    double total_mw = 0.0;
    for (const PdpSample &s : omni.samples)
        total_mw += s.power_mw;
    if (!(total_mw > 0.0))
        throw Error(ErrorCode::ZeroPower, "omni profile has no positive power");
    return budget.tx_power_dbm + budget.tx_gain_dbi + budget.rx_gain_dbi - linear_to_db(total_mw);
}

double rms_delay_spread_ns(std::span<const PdpSample> samples)
{
    double total = 0.0, m1 = 0.0, m2 = 0.0;
    for (const PdpSample &s : samples)
    {
        total += s.power_mw;
        m1 += s.power_mw * s.delay_ns;
        m2 += s.power_mw * s.delay_ns * s.delay_ns;
    }
    if (!(total > 0.0))
        throw Error(ErrorCode::ZeroPower, "delay spread needs positive total power");
    m1 /= total;
    m2 /= total;
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

double rms_delay_spread_ns(const OmniPdp &omni)
{
    return rms_delay_spread_ns(std::span<const PdpSample>(omni.samples));
}

std::vector<Mpc> angular_power_spectrum(std::span<const DirectionalPdp> pdps, const DelayGrid &grid)
{
    check_grid(grid);
    if (pdps.empty())
        throw Error(ErrorCode::EmptyInput, "angular spectrum needs at least one capture");

    // azimuth -> (bin -> max power); azimuth keys compare exactly, captures
    // meant to share a direction must carry the same RX azimuth value.
    std::map<double, std::map<std::int64_t, double>> per_dir;
    for (const DirectionalPdp &p : pdps)
    {
        auto &bins = per_dir[p.rx_pointing.azimuth_deg];
        for (const PdpSample &s : p.samples)
        {
            auto k = bin_index(s.delay_ns, grid.bin_width_ns);
            auto [it, inserted] = bins.emplace(k, s.power_mw);
            if (!inserted && s.power_mw > it->second)
                it->second = s.power_mw;
        }
    }

    std::vector<Mpc> spectrum;
    spectrum.reserve(per_dir.size());
    for (auto &[az_deg, bins] : per_dir)
    {
        double total = 0.0;
        for (auto [k, p_mw] : bins)
            total += p_mw;
        spectrum.push_back({deg_to_rad(az_deg), total});
    }
    return spectrum;
}

double angular_spread_rad(std::span<const Mpc> spectrum)
{
    double total = 0.0, re = 0.0, im = 0.0;
    for (const Mpc &m : spectrum)
    {
        total += m.power_mw;
        re += m.power_mw * std::cos(m.azimuth_rad);
        im += m.power_mw * std::sin(m.azimuth_rad);
    }
    if (!(total > 0.0))
        throw Error(ErrorCode::ZeroPower, "angular spread needs positive total power");
    double resultant = std::hypot(re, im) / total;
    if (resultant < 1e-12)
        throw Error(ErrorCode::ResultantZero,
                    "angular spread undefined: power-weighted resultant vanishes");
    resultant = std::min(resultant, 1.0);
    return std::sqrt(-2.0 * std::log(resultant));
}

} // namespace subthz
