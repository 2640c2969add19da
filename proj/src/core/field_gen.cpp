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

#include "core/field_gen.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace subthz {

static constexpr double EIG_FLOOR = 1e-10;

Eigen::MatrixXd correlation_matrix(std::span<const Location> points, const CorrModel &model)
{
    if (points.empty())
        throw Error(ErrorCode::EmptyInput, "correlation matrix needs at least one point");
    auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd r(n, n);
    for (Eigen::Index i = 0; i < n; i++)
    {
        r(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; j++)
        {
            double rho = eval_corr_model(model, distance_2d_m(points[i], points[j]));
            r(i, j) = rho;
            r(j, i) = rho;
        }
    }
    return r;
}

PsdRepair nearest_psd(const Eigen::MatrixXd &matrix)
{
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0)
        throw Error(ErrorCode::InvalidArgument, "nearest_psd needs a square matrix");
    if (!matrix.isApprox(matrix.transpose(), 1e-12))
        throw Error(ErrorCode::InvalidArgument, "nearest_psd needs a symmetric matrix");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(matrix);
    if (eig.info() != Eigen::Success)
        throw Error(ErrorCode::InternalError, "eigendecomposition failed");

    if (eig.eigenvalues().minCoeff() >= EIG_FLOOR)
        return {matrix, 0.0};

    Eigen::VectorXd ev = eig.eigenvalues().cwiseMax(EIG_FLOOR);
    Eigen::MatrixXd out = eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();

    // Rebuilding moves the diagonal off 1; rescale to restore it exactly and
    // re-symmetrize against round-off.
    Eigen::VectorXd s = out.diagonal().cwiseSqrt().cwiseInverse();
    out = s.asDiagonal() * out * s.asDiagonal();
    out = 0.5 * (out + out.transpose()).eval();
    out.diagonal().setOnes();

    return {out, (out - matrix).norm()};
}

Eigen::MatrixXd correlation_factor(const Eigen::MatrixXd &psd_matrix)
{
    Eigen::LLT<Eigen::MatrixXd> llt(psd_matrix);
    if (llt.info() == Eigen::Success)
        return llt.matrixL();

    // Semidefinite after repair (eigenvalues at the floor): fall back to the
    // eigendecomposition square root, which is lower-triangular only up to
    // an orthogonal factor but reproduces the covariance exactly.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(psd_matrix);
    if (eig.info() != Eigen::Success)
        throw Error(ErrorCode::InternalError, "matrix factorization failed");
    Eigen::VectorXd ev = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * ev.asDiagonal();
}

std::vector<double> sample_field(std::span<const Location> points, const FieldSpec &spec,
                                 std::uint64_t seed)
{
    if (points.empty())
        throw Error(ErrorCode::EmptyInput, "field sampling needs at least one point");
    if (!(spec.std_dev >= 0.0) || !std::isfinite(spec.std_dev) || !std::isfinite(spec.mean))
        throw Error(ErrorCode::InvalidArgument, "field spec needs finite mean and std_dev >= 0");

    Eigen::MatrixXd l = correlation_factor(nearest_psd(correlation_matrix(points, spec.corr_model)).matrix);

    auto n = static_cast<Eigen::Index>(points.size());
    NormalSampler normals(seed);
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; i++)
        z(i) = normals.next();

    Eigen::VectorXd u = l * z;
    std::vector<double> out(points.size());
    for (Eigen::Index i = 0; i < n; i++)
    {
        double v = spec.mean + spec.std_dev * u(i);
        if (spec.clip_min && v < *spec.clip_min)
            v = *spec.clip_min;
        out[std::size_t(i)] = v;
    }
    return out;
}

} // namespace subthz
