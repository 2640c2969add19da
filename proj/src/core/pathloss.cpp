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

#include "core/pathloss.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/units.hpp"

namespace subthz {

double fspl_1m_db(double freq_ghz)
{
    if (!(freq_ghz > 0.0) || !std::isfinite(freq_ghz))
        throw Error(ErrorCode::InvalidArgument, "frequency must be positive");
    double freq_hz = freq_ghz * 1e9;
    return 20.0 * std::log10(4.0 * PI * freq_hz / SPEED_OF_LIGHT_M_S);
}

double ci_path_loss_db(const CiModel &model, double distance_m, double shadow_db)
{
    if (!(distance_m >= 1.0))
        throw Error(ErrorCode::DistanceBelowReference,
                    "distance below 1 m reference, got " + std::to_string(distance_m) + " m");
    return fspl_1m_db(model.freq_ghz) + 10.0 * model.ple * std::log10(distance_m) + shadow_db;
}

CiModel fit_ci(std::span<const PathLossSample> samples, double freq_ghz)
{
    if (samples.size() < 2)
        throw Error(ErrorCode::InsufficientSamples,
                    "path loss fit needs at least 2 samples, got " +
                        std::to_string(samples.size()));

    double fspl = fspl_1m_db(freq_ghz);
    double d_min = samples.front().distance_m, d_max = d_min;
    double sum_ab = 0.0, sum_bb = 0.0;
    for (const PathLossSample &s : samples)
    {
        if (!(s.distance_m >= 1.0))
            throw Error(ErrorCode::DistanceBelowReference,
                        "location " + std::to_string(s.location_id) +
                            ": distance below 1 m reference");
        d_min = std::min(d_min, s.distance_m);
        d_max = std::max(d_max, s.distance_m);
        double a = s.path_loss_db - fspl;
        double b = 10.0 * std::log10(s.distance_m);
        sum_ab += a * b;
        sum_bb += b * b;
    }
    if (d_max - d_min < 1e-9 * std::max(1.0, d_max))
        throw Error(ErrorCode::DegenerateDistances,
                    "path loss fit needs at least two distinct distances");

    CiModel model;
    model.freq_ghz = freq_ghz;
    model.ple = sum_ab / sum_bb;

    double ss = 0.0;
    for (const PathLossSample &s : samples)
    {
        double r = s.path_loss_db - fspl - 10.0 * model.ple * std::log10(s.distance_m);
        ss += r * r;
    }
    model.sigma_db = std::sqrt(ss / double(samples.size()));
    return model;
}

std::vector<PathLossSample> without_annotated(std::span<const PathLossSample> samples)
{
    std::vector<PathLossSample> kept;
    kept.reserve(samples.size());
    for (const PathLossSample &s : samples)
        if (!s.excess_loss_db)
            kept.push_back(s);
    return kept;
}

std::vector<ShadowSample> shadow_fading(std::span<const PathLossSample> samples,
                                        const CiModel &model)
{
    double fspl = fspl_1m_db(model.freq_ghz);
    std::vector<ShadowSample> out;
    out.reserve(samples.size());
    for (const PathLossSample &s : samples)
    {
        if (!(s.distance_m >= 1.0))
            throw Error(ErrorCode::DistanceBelowReference,
                        "location " + std::to_string(s.location_id) +
                            ": distance below 1 m reference");
        double r = s.path_loss_db - fspl - 10.0 * model.ple * std::log10(s.distance_m);
        out.push_back({s.location_id, r});
    }
    return out;
}

} // namespace subthz
