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

#include "core/spatial_stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "core/errors.hpp"

namespace subthz {

static std::int64_t lag_bin(double distance_m, double delta_d_m)
{
    return static_cast<std::int64_t>(std::floor(distance_m / delta_d_m + 0.5));
}

namespace {

struct BinAccum {
    double sum_first = 0.0, sum_second = 0.0;
    std::size_t n = 0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
};

// Shared two-pass core: pass 1 collects bin-local sums of first and second
// pair elements, pass 2 accumulates centered products against those means.
// Two passes cost an extra sweep over all pairs but keep the quotient free of
// the cancellation a single-pass raw-moment formula would suffer.
AutocorrEstimate pooled_autocorr(std::span<const Location> points,
                                 const std::vector<std::vector<double>> &values,
                                 double delta_d_m, std::size_t min_pairs)
{
    if (!(delta_d_m > 0.0) || !std::isfinite(delta_d_m))
        throw Error(ErrorCode::InvalidArgument, "lag bin width must be positive");
    if (min_pairs < 2)
        throw Error(ErrorCode::InvalidArgument,
                    "min_pairs must be at least 2; a single pair always correlates to +/-1");
    if (points.size() < 2)
        throw Error(ErrorCode::TooFewEntries,
                    "autocorrelation needs at least 2 entries, got " +
                        std::to_string(points.size()));
    if (values.empty())
        throw Error(ErrorCode::TooFewEntries, "autocorrelation needs at least one realization");
    for (const auto &v : values)
    {
        if (v.size() != points.size())
            throw Error(ErrorCode::InvalidArgument,
                        "realization length does not match the number of points");
        for (double x : v)
            if (!std::isfinite(x))
                throw Error(ErrorCode::ValidationError, "parameter values must be finite");
    }

    const std::size_t n_pts = points.size();
    std::vector<std::int64_t> bin_of_pair(n_pts * (n_pts - 1) / 2);
    {
        std::size_t p = 0;
        for (std::size_t i = 0; i + 1 < n_pts; i++)
            for (std::size_t j = i + 1; j < n_pts; j++)
                bin_of_pair[p++] = lag_bin(distance_2d_m(points[i], points[j]), delta_d_m);
    }

    std::map<std::int64_t, BinAccum> acc;
    for (const auto &v : values)
    {
        std::size_t p = 0;
        for (std::size_t i = 0; i + 1 < n_pts; i++)
            for (std::size_t j = i + 1; j < n_pts; j++)
            {
                BinAccum &b = acc[bin_of_pair[p++]];
                b.sum_first += v[i];
                b.sum_second += v[j];
                b.n++;
            }
    }
    for (const auto &v : values)
    {
        std::size_t p = 0;
        for (std::size_t i = 0; i + 1 < n_pts; i++)
            for (std::size_t j = i + 1; j < n_pts; j++)
            {
                BinAccum &b = acc.find(bin_of_pair[p++])->second;
                double di = v[i] - b.sum_first / double(b.n);
                double dj = v[j] - b.sum_second / double(b.n);
                b.sxy += di * dj;
                b.sxx += di * di;
                b.syy += dj * dj;
            }
    }

    AutocorrEstimate est;
    est.delta_d_m = delta_d_m;
    for (const auto &[k, b] : acc)
    {
        if (b.n < min_pairs || !(b.sxx > 0.0) || !(b.syy > 0.0))
            continue;
        double rho = b.sxy / std::sqrt(b.sxx * b.syy);
        est.bins.push_back({double(k) * delta_d_m, std::clamp(rho, -1.0, 1.0), b.n});
    }
    return est;
}

} // namespace

AutocorrEstimate estimate_autocorr(std::span<const ParamEntry> entries, double delta_d_m,
                                   std::size_t min_pairs)
{
    std::vector<Location> points;
    std::vector<double> vals;
    points.reserve(entries.size());
    vals.reserve(entries.size());
    for (const ParamEntry &e : entries)
    {
        points.push_back(e.location);
        vals.push_back(e.value);
    }
    return pooled_autocorr(points, {std::move(vals)}, delta_d_m, min_pairs);
}

AutocorrEstimate ensemble_autocorr(std::span<const Location> points,
                                   const std::vector<std::vector<double>> &values,
                                   double delta_d_m, std::size_t min_pairs)
{
    return pooled_autocorr(points, values, delta_d_m, min_pairs);
}

const char *corr_family_name(CorrFamily family)
{
    return family == CorrFamily::Exponential ? "exp" : "expsin";
}

CorrFamily corr_family_from_name(const std::string &name)
{
    if (name == "exp")
        return CorrFamily::Exponential;
    if (name == "expsin")
        return CorrFamily::ExpDecaySinusoid;
    throw Error(ErrorCode::ParseError, "correlation family must be exp or expsin, got '" + name + "'");
}

static void check_model(const CorrModel &model)
{
    if (!(model.d1_m > 0.0) || !std::isfinite(model.d1_m))
        throw Error(ErrorCode::InvalidArgument, "correlation model needs d1 > 0");
    if (model.family == CorrFamily::ExpDecaySinusoid &&
        (!(model.d2_m > 0.0) || !std::isfinite(model.d2_m)))
        throw Error(ErrorCode::InvalidArgument, "correlation model needs d2 > 0");
}

double eval_corr_model(const CorrModel &model, double distance_m)
{
    check_model(model);
    if (!(distance_m >= 0.0) || !std::isfinite(distance_m))
        throw Error(ErrorCode::InvalidArgument, "distance must be >= 0");
    double decay = std::exp(-distance_m / model.d1_m);
    if (model.family == CorrFamily::Exponential)
        return decay;
    double u = distance_m / model.d2_m;
    return decay * (std::cos(u) + (model.d2_m / model.d1_m) * std::sin(u));
}

double correlation_distance_m(const CorrModel &model, double d_max_m, double step_m)
{
    check_model(model);
    if (!(d_max_m > 0.0) || !(step_m > 0.0))
        throw Error(ErrorCode::InvalidArgument, "scan range and step must be positive");

    const double target = std::exp(-1.0);
    double lo = 0.0; // rho(0) = 1 for both families
    double hi = -1.0;
    for (std::int64_t k = 1; double(k) * step_m <= d_max_m * (1.0 + 1e-12); k++)
    {
        double d = double(k) * step_m;
        if (eval_corr_model(model, d) < target)
        {
            hi = d;
            break;
        }
        lo = d;
    }
    if (hi < 0.0)
        throw Error(ErrorCode::NeverCrosses,
                    "correlation stays at or above 1/e up to " + std::to_string(d_max_m) + " m");

    while (hi - lo > 1e-3)
    {
        double mid = 0.5 * (lo + hi);
        if (eval_corr_model(model, mid) < target)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

constexpr double FIT_BOX_LO_M = 0.1;
constexpr double FIT_BOX_HI_M = 200.0;
constexpr int FIT_ITER_CAP = 10000;

struct FitData {
    std::vector<double> d, rho, w;
    double w_total = 0.0;
};

double fit_rmse(const FitData &data, const CorrModel &model)
{
    double ss = 0.0;
    for (std::size_t i = 0; i < data.d.size(); i++)
    {
        double e = eval_corr_model(model, data.d[i]) - data.rho[i];
        ss += data.w[i] * e * e;
    }
    return std::sqrt(ss / data.w_total);
}

std::vector<double> log_spaced(double lo, double hi, int n)
{
    std::vector<double> g(n);
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; i++)
        g[i] = std::exp(llo + (lhi - llo) * double(i) / double(n - 1));
    return g;
}

double clamp_box(double v)
{
    return std::clamp(v, FIT_BOX_LO_M, FIT_BOX_HI_M);
}

CorrModel fit_exponential(const FitData &data, double &rmse_out)
{
    auto obj = [&](double log_d1) {
        return fit_rmse(data, {CorrFamily::Exponential, clamp_box(std::exp(log_d1)), 0.0});
    };

    auto grid = log_spaced(FIT_BOX_LO_M, FIT_BOX_HI_M, 400);
    int best = 0;
    double best_f = obj(std::log(grid[0]));
    for (int i = 1; i < int(grid.size()); i++)
    {
        double f = obj(std::log(grid[i]));
        if (f < best_f)
        {
            best_f = f;
            best = i;
        }
    }

    // Ternary search between the grid neighbors of the best point. A fixed
    // iteration count shrinks the bracket far below the reporting precision
    // and keeps the routine deterministic.
    double lo = std::log(grid[std::max(0, best - 1)]);
    double hi = std::log(grid[std::min(int(grid.size()) - 1, best + 1)]);
    for (int it = 0; it < 200; it++)
    {
        double m1 = lo + (hi - lo) / 3.0;
        double m2 = hi - (hi - lo) / 3.0;
        if (obj(m1) < obj(m2))
            hi = m2;
        else
            lo = m1;
    }
    double log_d1 = 0.5 * (lo + hi);
    CorrModel model{CorrFamily::Exponential, clamp_box(std::exp(log_d1)), 0.0};
    rmse_out = fit_rmse(data, model);
    if (best_f < rmse_out)
    {
        model.d1_m = grid[best];
        rmse_out = best_f;
    }
    return model;
}

CorrModel fit_exp_decay_sinusoid(const FitData &data, double &rmse_out)
{
    using Point = std::array<double, 2>; // log-space coordinates
    auto to_model = [](const Point &p) {
        return CorrModel{CorrFamily::ExpDecaySinusoid, clamp_box(std::exp(p[0])),
                         clamp_box(std::exp(p[1]))};
    };
    auto obj = [&](const Point &p) { return fit_rmse(data, to_model(p)); };

    auto grid = log_spaced(FIT_BOX_LO_M, FIT_BOX_HI_M, 120);
    Point best_p{std::log(grid[0]), std::log(grid[0])};
    double best_f = obj(best_p);
    for (double g1 : grid)
        for (double g2 : grid)
        {
            Point p{std::log(g1), std::log(g2)};
            double f = obj(p);
            if (f < best_f)
            {
                best_f = f;
                best_p = p;
            }
        }

    // Nelder-Mead on the log-space pair, started one grid step wide. All
    // candidate points evaluate through the box clamp, so the walk cannot
    // leave the fit domain; convergence is measured on the clamped
    // parameters in meters.
    const double h = (std::log(FIT_BOX_HI_M) - std::log(FIT_BOX_LO_M)) / double(grid.size() - 1);
    std::array<Point, 3> x{best_p, Point{best_p[0] + h, best_p[1]}, Point{best_p[0], best_p[1] + h}};
    std::array<double, 3> f{obj(x[0]), obj(x[1]), obj(x[2])};

    int iter = 0;
    for (; iter < FIT_ITER_CAP; iter++)
    {
        std::array<int, 3> ord{0, 1, 2};
        std::sort(ord.begin(), ord.end(), [&](int a, int b) {
            return f[a] != f[b] ? f[a] < f[b] : a < b;
        });
        std::array<Point, 3> xs{x[ord[0]], x[ord[1]], x[ord[2]]};
        std::array<double, 3> fs{f[ord[0]], f[ord[1]], f[ord[2]]};
        x = xs;
        f = fs;

        double spread = 0.0;
        for (int c = 0; c < 2; c++)
        {
            double pmin = clamp_box(std::exp(x[0][c])), pmax = pmin;
            for (int v = 1; v < 3; v++)
            {
                double pv = clamp_box(std::exp(x[v][c]));
                pmin = std::min(pmin, pv);
                pmax = std::max(pmax, pv);
            }
            spread = std::max(spread, pmax - pmin);
        }
        if (spread < 1e-7)
            break;

        Point c{0.5 * (x[0][0] + x[1][0]), 0.5 * (x[0][1] + x[1][1])};
        auto line = [&](double t) {
            return Point{c[0] + t * (c[0] - x[2][0]), c[1] + t * (c[1] - x[2][1])};
        };

        Point xr = line(1.0);
        double fr = obj(xr);
        if (fr < f[0])
        {
            Point xe = line(2.0);
            double fe = obj(xe);
            if (fe < fr)
            {
                x[2] = xe;
                f[2] = fe;
            }
            else
            {
                x[2] = xr;
                f[2] = fr;
            }
            continue;
        }
        if (fr < f[1])
        {
            x[2] = xr;
            f[2] = fr;
            continue;
        }
        Point xc = fr < f[2] ? line(0.5) : line(-0.5);
        double fc = obj(xc);
        if (fc < std::min(fr, f[2]))
        {
            x[2] = xc;
            f[2] = fc;
            continue;
        }
        for (int v = 1; v < 3; v++)
        {
            x[v] = Point{0.5 * (x[0][0] + x[v][0]), 0.5 * (x[0][1] + x[v][1])};
            f[v] = obj(x[v]);
        }
    }
    if (iter >= FIT_ITER_CAP)
        throw Error(ErrorCode::NonConvergence,
                    "correlation model refinement did not converge within " +
                        std::to_string(FIT_ITER_CAP) + " iterations");

    CorrModel model = to_model(x[0]);
    rmse_out = f[0];
    if (best_f < rmse_out)
    {
        model = to_model(best_p);
        rmse_out = best_f;
    }
    return model;
}

} // namespace

FittedCorrModel fit_corr_model(const AutocorrEstimate &estimate, CorrFamily family,
                               const FitOptions &options)
{
    if (estimate.bins.size() < 3)
        throw Error(ErrorCode::InsufficientBins,
                    "correlation fit needs at least 3 populated bins, got " +
                        std::to_string(estimate.bins.size()));

    FitData data;
    for (const AutocorrBin &b : estimate.bins)
    {
        if (!std::isfinite(b.rho) || !(b.distance_m >= 0.0))
            throw Error(ErrorCode::InvalidArgument, "autocorrelation bins must be finite");
        data.d.push_back(b.distance_m);
        data.rho.push_back(b.rho);
        double w = options.weighted ? double(b.pair_count) : 1.0;
        data.w.push_back(w);
        data.w_total += w;
    }

    FittedCorrModel fit;
    if (family == CorrFamily::Exponential)
        fit.model = fit_exponential(data, fit.rmse);
    else
        fit.model = fit_exp_decay_sinusoid(data, fit.rmse);

    try
    {
        fit.corr_distance_m = correlation_distance_m(fit.model);
    }
    catch (const Error &e)
    {
        if (e.code() != ErrorCode::NeverCrosses)
            throw;
    }
    return fit;
}

} // namespace subthz
