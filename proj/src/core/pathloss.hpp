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

#ifndef SUBTHZ_CORE_PATHLOSS_HPP
#define SUBTHZ_CORE_PATHLOSS_HPP

#include <optional>
#include <span>
#include <vector>

#include "core/types.hpp"

namespace subthz {

// Close-in free-space reference model with a 1 m anchor:
//   PL(d) = FSPL(f, 1 m) + 10 * ple * log10(d) + shadow
// The single slope parameter `ple` is the path loss exponent; `sigma_db` is
// the standard deviation of the shadow-fading residuals around the mean line.
struct CiModel {
    double freq_ghz = 0.0;
    double ple = 2.0;
    double sigma_db = 0.0;
};

struct PathLossSample {
    int location_id = 0;
    double distance_m = 0.0;
    double path_loss_db = 0.0;
    std::optional<double> excess_loss_db; // known obstruction, excluded from fits
};

struct ShadowSample {
    int location_id = 0;
    double shadow_db = 0.0;
};

// Free-space path loss at the 1 m reference distance.
double fspl_1m_db(double freq_ghz);

// Model evaluation at distance >= 1 m with an explicit shadow term.
double ci_path_loss_db(const CiModel &model, double distance_m, double shadow_db = 0.0);

// Least-squares fit of the path loss exponent. With the 1 m anchor fixed the
// minimizer is closed-form:
//   ple = sum(a_i * b_i) / sum(b_i^2),  a_i = PL_i - FSPL(f, 1 m),
//                                       b_i = 10 * log10(d_i)
// sigma_db is the population RMS (divide by N) of the fit residuals.
// Uses every sample it is given; callers drop samples with excess_loss_db
// beforehand (see without_annotated). Throws InsufficientSamples (< 2),
// DistanceBelowReference (d < 1 m) and DegenerateDistances (all d equal).
CiModel fit_ci(std::span<const PathLossSample> samples, double freq_ghz);

// Copy of `samples` without entries carrying an excess-loss annotation.
std::vector<PathLossSample> without_annotated(std::span<const PathLossSample> samples);

// Per-sample residuals against the model mean: PL_i - FSPL - 10*ple*log10(d_i).
std::vector<ShadowSample> shadow_fading(std::span<const PathLossSample> samples,
                                        const CiModel &model);

} // namespace subthz

#endif
