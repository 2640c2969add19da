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

#ifndef SUBTHZ_CORE_SPATIAL_STATS_HPP
#define SUBTHZ_CORE_SPATIAL_STATS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "core/types.hpp"

namespace subthz {

// One large-scale-parameter observation tied to a route position.
struct ParamEntry {
    Location location;
    double value = 0.0;
};

struct AutocorrBin {
    double distance_m = 0.0; // bin center k * delta_d
    double rho = 0.0;
    std::size_t pair_count = 0;
};

struct AutocorrEstimate {
    double delta_d_m = 0.0;
    std::vector<AutocorrBin> bins; // ascending distance, sparse (empty bins omitted)
};

// Distance-binned spatial autocorrelation. Every unordered pair (i, j), i < j,
// is assigned to the lag bin k = floor(d_ij / delta_d + 1/2), i.e. bin k
// collects separations within delta_d/2 of k * delta_d. Per bin, the Pearson
// correlation between first and second pair elements is computed with
// bin-local means:
//
//   rho_k = sum (v_i - m1)(v_j - m2) / sqrt( sum (v_i - m1)^2 sum (v_j - m2)^2 )
//
// Bins with fewer than min_pairs pairs, or with zero variance on either side,
// are omitted. Pair separations are horizontal (2D) distances.
//
// Throws TooFewEntries (< 2 entries) and InvalidArgument (delta_d <= 0 or
// min_pairs < 2; a single pair would always report rho = +/-1).
AutocorrEstimate estimate_autocorr(std::span<const ParamEntry> entries,
                                   double delta_d_m = 0.05,
                                   std::size_t min_pairs = 2);

// Same estimator over an ensemble: pair products from every realization are
// pooled into the shared distance bins before the per-bin correlation is
// formed. Pooling keeps the estimate unbiased when individual realizations
// contribute only a handful of pairs per bin. `values[r][i]` is the value of
// realization r at points[i].
AutocorrEstimate ensemble_autocorr(std::span<const Location> points,
                                   const std::vector<std::vector<double>> &values,
                                   double delta_d_m = 0.05,
                                   std::size_t min_pairs = 2);

enum class CorrFamily { Exponential, ExpDecaySinusoid };

const char *corr_family_name(CorrFamily family);
CorrFamily corr_family_from_name(const std::string &name);

// Parametric correlation-vs-distance models, both equal to 1 at d = 0:
//   Exponential       rho(d) = exp(-d / d1)
//   ExpDecaySinusoid  rho(d) = exp(-d / d1) * (cos(d / d2) + (d2 / d1) sin(d / d2))
// The sinusoid coefficients are tied so the slope at the origin is zero,
// which matches the flat-topped shape of measured large-scale parameter
// correlations. d2 is unused (0) for the exponential family.
struct CorrModel {
    CorrFamily family = CorrFamily::Exponential;
    double d1_m = 1.0;
    double d2_m = 0.0;
};

double eval_corr_model(const CorrModel &model, double distance_m);

// Smallest distance at which the model drops below 1/e, located by a forward
// scan (resolution `step_m`) followed by bisection to 1e-3 m. Dips narrower
// than the scan step cannot be detected. Throws NeverCrosses when the model
// stays at or above 1/e up to d_max_m.
double correlation_distance_m(const CorrModel &model, double d_max_m = 1000.0,
                              double step_m = 0.01);

struct FitOptions {
    bool weighted = false; // weight squared errors by bin pair counts
};

struct FittedCorrModel {
    CorrModel model;
    double rmse = 0.0;
    std::optional<double> corr_distance_m; // empty when the fit never crosses 1/e
};

// Least-squares fit of a correlation model to binned estimates: coarse
// log-spaced grid over d1, d2 in [0.1, 200] m, then deterministic local
// refinement (ternary search for the 1-parameter family, Nelder-Mead in log
// space for the 2-parameter family) clamped to the same box. The entire
// procedure is derivative-free and has no random element, so repeated fits
// of the same input give identical results. Throws InsufficientBins (< 3
// populated bins) and NonConvergence (refinement iteration cap, 10000).
FittedCorrModel fit_corr_model(const AutocorrEstimate &estimate, CorrFamily family,
                               const FitOptions &options = {});

} // namespace subthz

#endif
