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

#ifndef SUBTHZ_CORE_FIELD_GEN_HPP
#define SUBTHZ_CORE_FIELD_GEN_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "core/spatial_stats.hpp"
#include "core/types.hpp"

namespace subthz {

// Pairwise correlation matrix R_ij = rho(d_ij) from horizontal separations.
// Symmetric with unit diagonal by construction, but not necessarily positive
// semidefinite for every model/geometry combination.
Eigen::MatrixXd correlation_matrix(std::span<const Location> points, const CorrModel &model);

struct PsdRepair {
    Eigen::MatrixXd matrix;
    double frobenius_change = 0.0; // ||out - in||_F, 0 when input was already PSD
};

// Nearest-PSD projection for symmetric matrices with unit diagonal:
// eigenvalues below 1e-10 are raised to 1e-10 and the matrix is rebuilt, then
// rescaled back to an exactly unit diagonal. For an input that is already
// PSD the output differs only by eigensolver round-off.
PsdRepair nearest_psd(const Eigen::MatrixXd &matrix);

// Lower-triangular factor L with L * L^T equal to the (repaired) correlation
// matrix. Cholesky when the matrix is numerically positive definite, else the
// symmetric eigendecomposition square root.
Eigen::MatrixXd correlation_factor(const Eigen::MatrixXd &psd_matrix);

struct FieldSpec {
    CorrModel corr_model;
    double mean = 0.0;
    double std_dev = 1.0;
    std::optional<double> clip_min; // floor applied after correlation, if set
};

// One realization of a correlated Gaussian field over the given points:
// values = mean + std_dev * (L z) with z i.i.d. standard normal drawn from a
// SplitMix64/Box-Muller stream under `seed`. Identical inputs give identical
// output on every run and platform. Clipping (when configured) is applied
// last and perturbs the marginal distribution near the floor.
std::vector<double> sample_field(std::span<const Location> points, const FieldSpec &spec,
                                 std::uint64_t seed);

} // namespace subthz

#endif
