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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/spatial_stats.hpp"

using namespace subthz;

namespace {

std::vector<ParamEntry> line_entries(const std::vector<double> &values, double spacing_m)
{
    std::vector<ParamEntry> entries;
    for (std::size_t i = 0; i < values.size(); ++i)
        entries.push_back({{int(i + 1), double(i) * spacing_m, 0.0, 1.5}, values[i]});
    return entries;
}

// Straight-line re-implementation of the binned pair correlation, kept free
// of any shared code so the two can disagree.
std::map<std::int64_t, AutocorrBin> brute_force_bins(const std::vector<ParamEntry> &entries,
                                                     double delta_d, std::size_t min_pairs)
{
    struct Acc {
        std::vector<double> first, second;
    };
    std::map<std::int64_t, Acc> acc;
    for (std::size_t i = 0; i < entries.size(); ++i)
        for (std::size_t j = i + 1; j < entries.size(); ++j)
        {
            double d = std::hypot(entries[i].location.x_m - entries[j].location.x_m,
                                  entries[i].location.y_m - entries[j].location.y_m);
            auto k = static_cast<std::int64_t>(std::floor(d / delta_d + 0.5));
            acc[k].first.push_back(entries[i].value);
            acc[k].second.push_back(entries[j].value);
        }

    std::map<std::int64_t, AutocorrBin> out;
    for (auto &[k, a] : acc)
    {
        std::size_t n = a.first.size();
        if (n < min_pairs)
            continue;
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t t = 0; t < n; ++t)
        {
            m1 += a.first[t];
            m2 += a.second[t];
        }
        m1 /= double(n);
        m2 /= double(n);
        double sxy = 0.0, sxx = 0.0, syy = 0.0;
        for (std::size_t t = 0; t < n; ++t)
        {
            double u = a.first[t] - m1, v = a.second[t] - m2;
            sxy += u * v;
            sxx += u * u;
            syy += v * v;
        }
        if (sxx <= 0.0 || syy <= 0.0)
            continue;
        out[k] = {double(k) * delta_d, sxy / std::sqrt(sxx * syy), n};
    }
    return out;
}

} // namespace

TEST_CASE("autocorrelation matches a brute-force oracle", "[spatial]")
{
    // Irregular 2D geometry and values from a fixed pseudo-random stream.
    SplitMix64 g(2024);
    std::vector<ParamEntry> entries;
    for (int i = 0; i < 40; ++i)
        entries.push_back({{i + 1, 10.0 * g.uniform01(), 6.0 * g.uniform01(), 1.5},
                           4.0 * g.uniform01() - 2.0});

    const double delta_d = 0.5;
    AutocorrEstimate est = estimate_autocorr(entries, delta_d, 2);
    auto oracle = brute_force_bins(entries, delta_d, 2);

    REQUIRE(est.bins.size() == oracle.size());
    for (const AutocorrBin &bin : est.bins)
    {
        auto k = static_cast<std::int64_t>(std::floor(bin.distance_m / delta_d + 0.5));
        REQUIRE(oracle.count(k) == 1);
        CHECK(bin.pair_count == oracle[k].pair_count);
        CHECK(bin.rho == Catch::Approx(oracle[k].rho).margin(1e-12));
        CHECK(bin.distance_m == Catch::Approx(oracle[k].distance_m).margin(1e-12));
    }
    CHECK(est.delta_d_m == delta_d);
}

TEST_CASE("pair separations land in the nearest lag bin", "[spatial]")
{
    // Points at x = 0, 1.02, 2.04: separations 1.02, 1.02, 2.04. With
    // delta_d = 1, lags 1.02 round to bin 1 and 2.04 to bin 2.
    std::vector<ParamEntry> entries{
        {{1, 0.00, 0.0, 1.5}, 1.0}, {{2, 1.02, 0.0, 1.5}, -0.5}, {{3, 2.04, 0.0, 1.5}, 0.25}};
    AutocorrEstimate est = estimate_autocorr(entries, 1.0, 2);

    // Bin 1 holds two pairs; bin 2 only one pair and is dropped (min_pairs).
    REQUIRE(est.bins.size() == 1);
    CHECK(est.bins[0].distance_m == Catch::Approx(1.0).margin(1e-12));
    CHECK(est.bins[0].pair_count == 2);
}

TEST_CASE("identical series correlate to one at lag zero pairs", "[spatial]")
{
    // Two coincident points share a separation of 0; with distinct values in
    // the bin the correlation over (i, j) and (j, i)... only i < j pairs are
    // counted, so bin 0 needs several coincident pairs to be defined.
    std::vector<ParamEntry> entries{{{1, 0.0, 0.0, 1.5}, 1.0},
                                    {{2, 0.0, 0.0, 1.5}, 1.0},
                                    {{3, 5.0, 0.0, 1.5}, -1.0},
                                    {{4, 5.0, 0.0, 1.5}, -1.0}};
    AutocorrEstimate est = estimate_autocorr(entries, 0.5, 2);
    // Lag-0 bin: pairs (1,2) and (3,4) with values (1,1) and (-1,-1): rho = 1.
    REQUIRE_FALSE(est.bins.empty());
    CHECK(est.bins[0].distance_m == 0.0);
    CHECK(est.bins[0].rho == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("estimator output stays within [-1, 1] and is affine-invariant", "[spatial]")
{
    SplitMix64 g(77);
    std::vector<double> values;
    for (int i = 0; i < 60; ++i)
        values.push_back(g.uniform01() * 10.0);
    auto entries = line_entries(values, 0.7);
    AutocorrEstimate base = estimate_autocorr(entries, 0.7, 2);
    for (const auto &bin : base.bins)
    {
        CHECK(bin.rho <= 1.0 + 1e-12);
        CHECK(bin.rho >= -1.0 - 1e-12);
    }

    // A positive affine map of the values leaves every rho unchanged.
    std::vector<double> mapped;
    for (double v : values)
        mapped.push_back(3.5 * v - 12.0);
    AutocorrEstimate scaled = estimate_autocorr(line_entries(mapped, 0.7), 0.7, 2);
    REQUIRE(scaled.bins.size() == base.bins.size());
    for (std::size_t i = 0; i < base.bins.size(); ++i)
        CHECK(scaled.bins[i].rho == Catch::Approx(base.bins[i].rho).margin(1e-9));
}

TEST_CASE("bins with zero variance on either side are omitted", "[spatial]")
{
    // First elements of every 1-lag pair are constant: undefined correlation.
    std::vector<ParamEntry> entries{{{1, 0.0, 0.0, 1.5}, 2.0},
                                    {{2, 1.0, 0.0, 1.5}, 2.0},
                                    {{3, 2.0, 0.0, 1.5}, 2.0},
                                    {{4, 3.0, 0.0, 1.5}, 5.0}};
    AutocorrEstimate est = estimate_autocorr(entries, 1.0, 2);
    for (const auto &bin : est.bins)
        CHECK(bin.distance_m != Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("estimator argument validation", "[spatial]")
{
    std::vector<ParamEntry> entries{{{1, 0.0, 0.0, 1.5}, 1.0}, {{2, 1.0, 0.0, 1.5}, 2.0}};

    try
    {
        estimate_autocorr(entries, 0.0, 2);
        FAIL("expected throw");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::InvalidArgument);
    }

    // min_pairs below 2 would let single-pair bins report rho = +/-1.
    try
    {
        estimate_autocorr(entries, 0.05, 1);
        FAIL("expected throw");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::InvalidArgument);
    }

    std::vector<ParamEntry> single{{{1, 0.0, 0.0, 1.5}, 1.0}};
    try
    {
        estimate_autocorr(single, 0.05, 2);
        FAIL("expected throw");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::TooFewEntries);
    }
}

TEST_CASE("ensemble pooling matches brute force over stacked realizations", "[spatial]")
{
    SplitMix64 g(31);
    std::vector<Location> points;
    for (int i = 0; i < 12; ++i)
        points.push_back({i + 1, double(i) * 1.5, 0.0, 1.5});

    std::vector<std::vector<double>> values(5);
    for (auto &row : values)
        for (int i = 0; i < 12; ++i)
            row.push_back(2.0 * g.uniform01() - 1.0);

    AutocorrEstimate pooled = ensemble_autocorr(points, values, 1.5, 2);

    // Oracle: accumulate the same pairs realization by realization.
    struct Acc {
        std::vector<double> first, second;
    };
    std::map<std::int64_t, Acc> acc;
    for (const auto &row : values)
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t j = i + 1; j < points.size(); ++j)
            {
                double d = std::hypot(points[i].x_m - points[j].x_m,
                                      points[i].y_m - points[j].y_m);
                auto k = static_cast<std::int64_t>(std::floor(d / 1.5 + 0.5));
                acc[k].first.push_back(row[i]);
                acc[k].second.push_back(row[j]);
            }

    for (const AutocorrBin &bin : pooled.bins)
    {
        auto k = static_cast<std::int64_t>(std::floor(bin.distance_m / 1.5 + 0.5));
        REQUIRE(acc.count(k) == 1);
        const Acc &a = acc[k];
        REQUIRE(bin.pair_count == a.first.size());
        double n = double(a.first.size()), m1 = 0.0, m2 = 0.0;
        for (std::size_t t = 0; t < a.first.size(); ++t)
        {
            m1 += a.first[t];
            m2 += a.second[t];
        }
        m1 /= n;
        m2 /= n;
        double sxy = 0.0, sxx = 0.0, syy = 0.0;
        for (std::size_t t = 0; t < a.first.size(); ++t)
        {
            sxy += (a.first[t] - m1) * (a.second[t] - m2);
            sxx += (a.first[t] - m1) * (a.first[t] - m1);
            syy += (a.second[t] - m2) * (a.second[t] - m2);
        }
        CHECK(bin.rho == Catch::Approx(sxy / std::sqrt(sxx * syy)).margin(1e-12));
    }
}

TEST_CASE("ensemble rejects mismatched realization lengths", "[spatial]")
{
    std::vector<Location> points{{1, 0.0, 0.0, 1.5}, {2, 1.0, 0.0, 1.5}};
    std::vector<std::vector<double>> values{{1.0, 2.0}, {1.0}};
    try
    {
        ensemble_autocorr(points, values, 0.05, 2);
        FAIL("expected throw");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::InvalidArgument);
    }
}

TEST_CASE("correlation model evaluation anchors", "[spatial]")
{
    CorrModel exp_model{CorrFamily::Exponential, 13.0, 0.0};
    CHECK(eval_corr_model(exp_model, 0.0) == 1.0);
    CHECK(eval_corr_model(exp_model, 13.0) == Catch::Approx(std::exp(-1.0)).margin(1e-15));

    CorrModel es{CorrFamily::ExpDecaySinusoid, 6.2, 2.8};
    CHECK(eval_corr_model(es, 0.0) == 1.0);
    CHECK(eval_corr_model(es, 3.8) == Catch::Approx(0.35398333465484816).margin(1e-14));
}

TEST_CASE("sinusoid family has zero slope at the origin", "[spatial]")
{
    // The (d2/d1) sin term cancels the exponential's initial decay; a plain
    // exponential loses about h/d1 over the same step.
    CorrModel es{CorrFamily::ExpDecaySinusoid, 6.2, 2.8};
    double h = 1e-6;
    double slope = (eval_corr_model(es, h) - 1.0) / h;
    CHECK(std::abs(slope) < 1e-6);

    CorrModel ex{CorrFamily::Exponential, 6.2, 0.0};
    double exp_slope = (eval_corr_model(ex, h) - 1.0) / h;
    CHECK(std::abs(exp_slope) > 0.1);
}

TEST_CASE("correlation distance anchors", "[spatial]")
{
    CHECK(correlation_distance_m({CorrFamily::Exponential, 13.0, 0.0}) ==
          Catch::Approx(13.0).margin(1.1e-3));
    CHECK(correlation_distance_m({CorrFamily::ExpDecaySinusoid, 6.2, 2.8}) ==
          Catch::Approx(3.7391).margin(1.1e-3));
    CHECK(correlation_distance_m({CorrFamily::ExpDecaySinusoid, 25.5, 8.9}) ==
          Catch::Approx(11.7734).margin(1.1e-3));
    CHECK(correlation_distance_m({CorrFamily::ExpDecaySinusoid, 55.6, 9.4}) ==
          Catch::Approx(11.9547).margin(1.1e-3));
}

TEST_CASE("correlation distance reports models that never cross", "[spatial]")
{
    // Within 5 m an exponential with D = 100 never falls below 1/e.
    try
    {
        correlation_distance_m({CorrFamily::Exponential, 100.0, 0.0}, 5.0);
        FAIL("expected throw");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::NeverCrosses);
    }
}

TEST_CASE("family names round-trip", "[spatial]")
{
    CHECK(corr_family_name(CorrFamily::Exponential) == std::string("exp"));
    CHECK(corr_family_name(CorrFamily::ExpDecaySinusoid) == std::string("expsin"));
    CHECK(corr_family_from_name("exp") == CorrFamily::Exponential);
    CHECK(corr_family_from_name("expsin") == CorrFamily::ExpDecaySinusoid);
    CHECK_THROWS_AS(corr_family_from_name("gauss"), Error);
}

namespace {

AutocorrEstimate sampled_curve(const CorrModel &model, double start, double step, int n,
                               std::size_t pair_count = 50)
{
    AutocorrEstimate est;
    est.delta_d_m = step;
    for (int i = 0; i < n; ++i)
    {
        double d = start + i * step;
        est.bins.push_back({d, eval_corr_model(model, d), pair_count});
    }
    return est;
}

} // namespace

TEST_CASE("exponential fit recovers its generator exactly", "[spatial][fit]")
{
    CorrModel truth{CorrFamily::Exponential, 10.0, 0.0};
    AutocorrEstimate est = sampled_curve(truth, 0.5, 0.5, 80);

    FittedCorrModel fit = fit_corr_model(est, CorrFamily::Exponential);
    CHECK(fit.model.d1_m == Catch::Approx(10.0).margin(1e-6));
    CHECK(fit.rmse < 1e-9);
    REQUIRE(fit.corr_distance_m.has_value());
    CHECK(*fit.corr_distance_m == Catch::Approx(10.0).margin(1.1e-3));
}

TEST_CASE("sinusoid fit recovers its generator", "[spatial][fit]")
{
    CorrModel truth{CorrFamily::ExpDecaySinusoid, 25.5, 8.9};
    AutocorrEstimate est = sampled_curve(truth, 0.5, 0.5, 80);

    FittedCorrModel fit = fit_corr_model(est, CorrFamily::ExpDecaySinusoid);
    CHECK(fit.model.d1_m == Catch::Approx(25.5).margin(0.01));
    CHECK(fit.model.d2_m == Catch::Approx(8.9).margin(0.01));
    CHECK(fit.rmse < 1e-6);
    REQUIRE(fit.corr_distance_m.has_value());
    CHECK(*fit.corr_distance_m == Catch::Approx(11.7734).margin(1.1e-3));
}

TEST_CASE("fits are deterministic across repeated calls", "[spatial][fit]")
{
    AutocorrEstimate est = sampled_curve({CorrFamily::ExpDecaySinusoid, 6.2, 2.8}, 0.5, 0.5, 40);
    FittedCorrModel a = fit_corr_model(est, CorrFamily::ExpDecaySinusoid);
    FittedCorrModel b = fit_corr_model(est, CorrFamily::ExpDecaySinusoid);
    CHECK(a.model.d1_m == b.model.d1_m);
    CHECK(a.model.d2_m == b.model.d2_m);
    CHECK(a.rmse == b.rmse);
}

TEST_CASE("sinusoid fit of exponential data is grid-optimal", "[spatial][fit]")
{
    // The zero-slope family cannot reproduce a pure exponential near the
    // origin; the interesting property is optimality, not a small residual.
    // Compare against an independent dense grid evaluation of the objective.
    CorrModel truth{CorrFamily::Exponential, 10.0, 0.0};
    AutocorrEstimate est = sampled_curve(truth, 0.5, 0.5, 80);
    FittedCorrModel fit = fit_corr_model(est, CorrFamily::ExpDecaySinusoid);

    auto rmse_of = [&](double d1, double d2) {
        double s = 0.0;
        for (const auto &bin : est.bins)
        {
            double r = std::exp(-bin.distance_m / d1) *
                       (std::cos(bin.distance_m / d2) +
                        (d2 / d1) * std::sin(bin.distance_m / d2));
            s += (r - bin.rho) * (r - bin.rho);
        }
        return std::sqrt(s / double(est.bins.size()));
    };

    double best_grid = 1e9;
    for (int i = 0; i <= 300; ++i)
        for (int j = 0; j <= 300; ++j)
        {
            double d1 = 0.1 * std::pow(2000.0, i / 300.0);
            double d2 = 0.1 * std::pow(2000.0, j / 300.0);
            best_grid = std::min(best_grid, rmse_of(d1, d2));
        }

    CHECK(fit.rmse <= best_grid + 1e-9);
    CHECK(fit.rmse == Catch::Approx(rmse_of(fit.model.d1_m, fit.model.d2_m)).margin(1e-12));
}

TEST_CASE("weighted fit favors heavily populated bins", "[spatial][fit]")
{
    // Two-segment curve: low-distance bins follow exp(-d/5), a far outlier
    // bin is pinned at rho = 0.9. Weighting the outlier 1000x drags the
    // fitted scale upward compared to the unweighted fit.
    AutocorrEstimate est;
    est.delta_d_m = 0.5;
    CorrModel inner{CorrFamily::Exponential, 5.0, 0.0};
    for (int i = 1; i <= 20; ++i)
        est.bins.push_back({0.5 * i, eval_corr_model(inner, 0.5 * i), 2});
    est.bins.push_back({30.0, 0.9, 2000});

    FittedCorrModel flat = fit_corr_model(est, CorrFamily::Exponential);
    FittedCorrModel weighted = fit_corr_model(est, CorrFamily::Exponential, {true});
    CHECK(weighted.model.d1_m > 2.0 * flat.model.d1_m);
}

TEST_CASE("fit requires at least three bins", "[spatial][fit]")
{
    AutocorrEstimate est;
    est.delta_d_m = 0.5;
    est.bins = {{0.5, 0.9, 10}, {1.0, 0.8, 10}};
    try
    {
        fit_corr_model(est, CorrFamily::Exponential);
        FAIL("expected throw");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::InsufficientBins);
    }
}

TEST_CASE("noisy sinusoid fit stays close to the generator", "[spatial][fit]")
{
    CorrModel truth{CorrFamily::ExpDecaySinusoid, 25.5, 8.9};
    AutocorrEstimate est = sampled_curve(truth, 0.5, 0.5, 80);
    NormalSampler noise(4242);
    for (auto &bin : est.bins)
        bin.rho += 0.01 * noise.next();

    FittedCorrModel fit = fit_corr_model(est, CorrFamily::ExpDecaySinusoid);
    CHECK(fit.model.d1_m == Catch::Approx(25.5).margin(1.5));
    CHECK(fit.model.d2_m == Catch::Approx(8.9).margin(0.5));
    CHECK(fit.rmse < 0.02);
}
