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

#include "core/route_sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>

#include "core/field_gen.hpp"
#include "core/pdp_stats.hpp"
#include "core/rng.hpp"
#include "core/units.hpp"

namespace subthz {

RouteScenario default_umi_scenario()
{
    RouteScenario s;
    s.freq_ghz = 142.0;
    s.tx = {0, 0.5, -24.0, 4.0};

    // 34 stops, 3 m apart, walking the rectangle (0,0)-(39,12) from the
    // origin corner; the route covers 99 m of the 102 m perimeter.
    for (int i = 0; i < 34; i++)
    {
        double walk = 3.0 * i;
        double x, y;
        if (walk <= 39.0)
        {
            x = walk;
            y = 0.0;
        }
        else if (walk < 51.0)
        {
            x = 39.0;
            y = walk - 39.0;
        }
        else if (walk <= 90.0)
        {
            x = 39.0 - (walk - 51.0);
            y = 12.0;
        }
        else
        {
            x = 0.0;
            y = 12.0 - (walk - 90.0);
        }
        Waypoint wp;
        wp.location = {i + 1, x, y, 1.5};
        int id = i + 1;
        wp.los = (id <= 5 || id >= 23) ? LosClass::Los : LosClass::Nlos;
        if (id == 2)
            wp.excess_loss_db = 10.0; // foliage between TX and the stop
        if (id == 29)
            wp.excess_loss_db = 15.0;
        s.waypoints.push_back(wp);
    }

    s.los_model = {142.0, 2.01, 2.9};
    s.nlos_model = {142.0, 3.20, 7.1};
    s.sf_corr = {CorrFamily::ExpDecaySinusoid, 6.2, 2.8};
    s.ds_corr = {CorrFamily::ExpDecaySinusoid, 25.5, 8.9};
    s.as_corr = {CorrFamily::ExpDecaySinusoid, 55.6, 9.4};
    s.ds_los_ns = {5.7, 8.9};
    s.ds_nlos_ns = {21.9, 23.9};
    s.as_los_rad = {0.26, 0.22};
    s.as_nlos_rad = {0.65, 0.32};
    s.seed = 1;
    return s;
}

static void check_class_stats(const ClassStats &st, const char *what)
{
    if (!std::isfinite(st.mean) || !std::isfinite(st.std_dev) || st.mean < 0.0 || st.std_dev < 0.0)
        throw Error(ErrorCode::ValidationError,
                    std::string(what) + " statistics need finite mean >= 0 and std >= 0");
    if (st.mean == 0.0 && st.std_dev > 0.0)
        throw Error(ErrorCode::ValidationError,
                    std::string(what) + " statistics need a positive mean when std > 0");
}

static void check_ci_model(const CiModel &m, double freq_ghz, const char *what)
{
    if (!std::isfinite(m.ple) || !(m.sigma_db >= 0.0) || !std::isfinite(m.sigma_db))
        throw Error(ErrorCode::ValidationError,
                    std::string(what) + " model needs finite ple and sigma >= 0");
    if (std::abs(m.freq_ghz - freq_ghz) > 1e-9 * freq_ghz)
        throw Error(ErrorCode::ValidationError,
                    std::string(what) + " model frequency differs from the scenario frequency");
}

void validate_scenario(const RouteScenario &s)
{
    if (!(s.freq_ghz > 0.0) || !std::isfinite(s.freq_ghz))
        throw Error(ErrorCode::ValidationError, "scenario frequency must be positive");
    if (s.waypoints.size() < 2)
        throw Error(ErrorCode::ValidationError, "scenario needs at least 2 waypoints");
    if (!std::isfinite(s.tx.x_m) || !std::isfinite(s.tx.y_m) || !std::isfinite(s.tx.z_m))
        throw Error(ErrorCode::ValidationError, "tx position must be finite");

    std::vector<int> ids;
    for (const Waypoint &wp : s.waypoints)
    {
        if (!std::isfinite(wp.location.x_m) || !std::isfinite(wp.location.y_m) ||
            !std::isfinite(wp.location.z_m))
            throw Error(ErrorCode::ValidationError,
                        "waypoint " + std::to_string(wp.location.id) + " has non-finite coordinates");
        double d = distance_3d_m(s.tx, wp.location);
        if (d < 1.0)
            throw Error(ErrorCode::DistanceBelowReference,
                        "waypoint " + std::to_string(wp.location.id) +
                            ": distance below 1 m reference (" + std::to_string(d) + " m)");
        if (wp.excess_loss_db && !(*wp.excess_loss_db > 0.0))
            throw Error(ErrorCode::ValidationError,
                        "waypoint " + std::to_string(wp.location.id) +
                            ": excess loss must be positive");
        ids.push_back(wp.location.id);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw Error(ErrorCode::DuplicateLocationId, "waypoint ids must be unique");

    check_ci_model(s.los_model, s.freq_ghz, "los path loss");
    check_ci_model(s.nlos_model, s.freq_ghz, "nlos path loss");
    eval_corr_model(s.sf_corr, 0.0);
    eval_corr_model(s.ds_corr, 0.0);
    eval_corr_model(s.as_corr, 0.0);
    check_class_stats(s.ds_los_ns, "los delay spread");
    check_class_stats(s.ds_nlos_ns, "nlos delay spread");
    check_class_stats(s.as_los_rad, "los angular spread");
    check_class_stats(s.as_nlos_rad, "nlos angular spread");
}

// Rounds through the decimal text written to CSV files, so the in-memory
// value is bit-identical to what a reader parses back. round(v/unit)*unit
// would land one ulp away from the parsed decimal for many values.
static double quantize(double v, int decimals)
{
    char buf[64];
    int len = std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    double q = 0.0;
    std::from_chars(buf, buf + len, q);
    return q == 0.0 ? 0.0 : q;
}

namespace {

// Maps a standard normal draw to a positive value whose mean and standard
// deviation equal the requested class statistics (lognormal moment
// matching). Degenerate spreads collapse to the mean.
struct LognormalMap {
    double mu = 0.0, sigma = 0.0;
    bool constant = false;
    double constant_value = 0.0;

    explicit LognormalMap(const ClassStats &st)
    {
        if (st.mean == 0.0 || st.std_dev == 0.0)
        {
            constant = true;
            constant_value = st.mean;
            return;
        }
        double cv2 = (st.std_dev / st.mean) * (st.std_dev / st.mean);
        sigma = std::sqrt(std::log1p(cv2));
        mu = std::log(st.mean) - 0.5 * sigma * sigma;
    }

    double operator()(double u) const
    {
        return constant ? constant_value : std::exp(mu + sigma * u);
    }
};

// Parameter streams are fixed so a given (seed, realization) pair always
// produces the same fields regardless of how many realizations are drawn.
enum ParamStream : std::uint64_t { STREAM_SF = 0, STREAM_DS = 1, STREAM_AS = 2 };

} // namespace

std::vector<SimRealization> simulate(const RouteScenario &s, std::size_t n_realizations)
{
    validate_scenario(s);
    if (n_realizations < 1)
        throw Error(ErrorCode::InvalidArgument, "need at least one realization");

    std::vector<Location> points;
    points.reserve(s.waypoints.size());
    for (const Waypoint &wp : s.waypoints)
        points.push_back(wp.location);

    Eigen::MatrixXd l_sf = correlation_factor(nearest_psd(correlation_matrix(points, s.sf_corr)).matrix);
    Eigen::MatrixXd l_ds = correlation_factor(nearest_psd(correlation_matrix(points, s.ds_corr)).matrix);
    Eigen::MatrixXd l_as = correlation_factor(nearest_psd(correlation_matrix(points, s.as_corr)).matrix);

    LognormalMap ds_map_los(s.ds_los_ns), ds_map_nlos(s.ds_nlos_ns);
    LognormalMap as_map_los(s.as_los_rad), as_map_nlos(s.as_nlos_rad);

    auto n = static_cast<Eigen::Index>(points.size());
    auto correlated_unit_field = [&](const Eigen::MatrixXd &l, std::uint64_t stream,
                                     std::size_t realization) {
        NormalSampler normals(derive_seed(s.seed, stream, realization));
        Eigen::VectorXd z(n);
        for (Eigen::Index i = 0; i < n; i++)
            z(i) = normals.next();
        return Eigen::VectorXd(l * z);
    };

    std::vector<SimRealization> out;
    out.reserve(n_realizations);
    for (std::size_t r = 0; r < n_realizations; r++)
    {
        Eigen::VectorXd u_sf = correlated_unit_field(l_sf, STREAM_SF, r);
        Eigen::VectorXd u_ds = correlated_unit_field(l_ds, STREAM_DS, r);
        Eigen::VectorXd u_as = correlated_unit_field(l_as, STREAM_AS, r);

        SimRealization real;
        real.index = r;
        real.records.reserve(points.size());
        real.shadow_db.reserve(points.size());
        for (Eigen::Index i = 0; i < n; i++)
        {
            const Waypoint &wp = s.waypoints[std::size_t(i)];
            bool los = wp.los == LosClass::Los;
            const CiModel &model = los ? s.los_model : s.nlos_model;

            double shadow = quantize(model.sigma_db * u_sf(i), 6);
            double d = quantize(distance_3d_m(s.tx, wp.location), 6);
            double pl = ci_path_loss_db(model, d, shadow) + wp.excess_loss_db.value_or(0.0);

            RxRecord rec;
            rec.location = wp.location;
            rec.los = wp.los;
            rec.excess_loss_db = wp.excess_loss_db;
            rec.tr_distance_m = d;
            rec.path_loss_db = quantize(pl, 6);
            rec.delay_spread_ns = quantize((los ? ds_map_los : ds_map_nlos)(u_ds(i)), 3);
            rec.angular_spread_rad = quantize((los ? as_map_los : as_map_nlos)(u_as(i)), 6);
            real.records.push_back(rec);
            real.shadow_db.push_back(shadow);
        }
        out.push_back(std::move(real));
    }
    return out;
}

namespace {

ClassStats population_stats(const std::vector<double> &v)
{
    double mean = 0.0;
    for (double x : v)
        mean += x;
    mean /= double(v.size());
    double ss = 0.0;
    for (double x : v)
        ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / double(v.size()))};
}

void add_issue(std::vector<Issue> &issues, ErrorCode code, const std::string &message)
{
    issues.push_back({code, message});
}

// Per-class path loss fits and shadow residuals of one route snapshot.
// Excess-annotated records are excluded from the fits, and their annotated
// loss is removed before the residual is formed, so a known obstruction does
// not masquerade as a giant shadow value.
struct SnapshotFits {
    std::optional<ClassFit> los, nlos;
    std::vector<std::optional<double>> shadow_db; // per record
    std::vector<Issue> issues;
};

SnapshotFits fit_snapshot(std::span<const RxRecord> records, double freq_ghz)
{
    SnapshotFits out;
    out.shadow_db.resize(records.size());

    for (LosClass cls : {LosClass::Los, LosClass::Nlos})
    {
        std::vector<PathLossSample> samples;
        for (const RxRecord &r : records)
            if (r.los == cls)
                samples.push_back({r.location.id, r.tr_distance_m, r.path_loss_db, r.excess_loss_db});
        if (samples.empty())
            continue;

        auto &slot = cls == LosClass::Los ? out.los : out.nlos;
        auto kept = without_annotated(samples);
        std::string label = cls == LosClass::Los ? "los" : "nlos";
        if (kept.size() < 3)
        {
            add_issue(out.issues, ErrorCode::InsufficientSamples,
                      "fit_ci (" + label + "): InsufficientSamples: needs at least 3 samples, got " +
                          std::to_string(kept.size()));
            continue;
        }
        try
        {
            slot = ClassFit{fit_ci(kept, freq_ghz), kept.size()};
        }
        catch (const Error &e)
        {
            add_issue(out.issues, e.code(), "fit_ci (" + label + "): " + e.what());
        }
    }

    for (std::size_t i = 0; i < records.size(); i++)
    {
        const RxRecord &r = records[i];
        const auto &fit = r.los == LosClass::Los ? out.los : out.nlos;
        if (!fit)
            continue;
        double pl = r.path_loss_db - r.excess_loss_db.value_or(0.0);
        PathLossSample s{r.location.id, r.tr_distance_m, pl, std::nullopt};
        out.shadow_db[i] = shadow_fading(std::span(&s, 1), fit->model).front().shadow_db;
    }
    return out;
}

// Autocorrelation -> model fit -> correlation distance, with each stage
// guarded. `label` names the parameter in recorded issues.
ParamAnalysis analyze_param(const std::vector<Location> &points,
                            const std::vector<std::vector<double>> &values,
                            const AnalyzeOptions &opt, const std::string &label)
{
    ParamAnalysis pa;
    try
    {
        pa.autocorr = ensemble_autocorr(points, values, opt.delta_d_m, opt.min_pairs);
    }
    catch (const Error &e)
    {
        add_issue(pa.issues, e.code(), "estimate_autocorr (" + label + "): " + e.what());
        return pa;
    }
    try
    {
        pa.fit = fit_corr_model(*pa.autocorr, opt.family, {opt.weighted});
    }
    catch (const Error &e)
    {
        add_issue(pa.issues, e.code(), "fit_corr_model (" + label + "): " + e.what());
        return pa;
    }
    if (!pa.fit->corr_distance_m)
        add_issue(pa.issues, ErrorCode::NeverCrosses,
                  "correlation_distance (" + label + "): fitted model never drops below 1/e");
    return pa;
}

} // namespace

RouteReport analyze_route(std::span<const RxRecord> records, double freq_ghz,
                          const AnalyzeOptions &opt)
{
    if (records.empty())
        throw Error(ErrorCode::TooFewEntries, "route analysis needs at least one record");
    if (!(freq_ghz > 0.0) || !std::isfinite(freq_ghz))
        throw Error(ErrorCode::InvalidArgument, "frequency must be positive");

    RouteReport rep;
    rep.freq_ghz = freq_ghz;

    SnapshotFits fits = fit_snapshot(records, freq_ghz);
    rep.los_fit = fits.los;
    rep.nlos_fit = fits.nlos;
    rep.shadow_db = std::move(fits.shadow_db);
    rep.issues = std::move(fits.issues);

    std::vector<Location> sf_points, all_points;
    std::vector<double> sf_values, ds_values, as_values;
    for (std::size_t i = 0; i < records.size(); i++)
    {
        const RxRecord &r = records[i];
        if (rep.shadow_db[i])
        {
            sf_points.push_back(r.location);
            sf_values.push_back(*rep.shadow_db[i]);
        }
        all_points.push_back(r.location);
        ds_values.push_back(r.delay_spread_ns);
        as_values.push_back(r.angular_spread_rad);
    }

    rep.shadow = analyze_param(sf_points, {sf_values}, opt, "shadow_fading");
    rep.delay_spread = analyze_param(all_points, {ds_values}, opt, "delay_spread");
    rep.angular_spread = analyze_param(all_points, {as_values}, opt, "angular_spread");

    for (LosClass cls : {LosClass::Los, LosClass::Nlos})
    {
        std::vector<double> ds, as;
        for (const RxRecord &r : records)
            if (r.los == cls)
            {
                ds.push_back(r.delay_spread_ns);
                as.push_back(r.angular_spread_rad);
            }
        if (ds.empty())
            continue;
        if (cls == LosClass::Los)
        {
            rep.ds_los_ns = population_stats(ds);
            rep.as_los_rad = population_stats(as);
        }
        else
        {
            rep.ds_nlos_ns = population_stats(ds);
            rep.as_nlos_rad = population_stats(as);
        }
    }

    for (const auto &pa : {std::cref(rep.shadow), std::cref(rep.delay_spread),
                           std::cref(rep.angular_spread)})
        for (const Issue &issue : pa.get().issues)
            rep.issues.push_back(issue);
    return rep;
}

EnsembleSummary summarize_ensemble(const RouteScenario &s,
                                   std::span<const SimRealization> realizations,
                                   const AnalyzeOptions &opt)
{
    validate_scenario(s);
    if (realizations.empty())
        throw Error(ErrorCode::TooFewEntries, "ensemble summary needs at least one realization");
    const std::size_t n_wp = s.waypoints.size();
    for (const SimRealization &r : realizations)
        if (r.records.size() != n_wp)
            throw Error(ErrorCode::InvalidArgument,
                        "realization record count does not match the scenario waypoints");

    EnsembleSummary sum;
    sum.n_realizations = realizations.size();
    sum.seed = s.seed;
    sum.freq_ghz = s.freq_ghz;

    for (std::size_t i = 0; i < n_wp; i++)
    {
        std::vector<double> pl;
        pl.reserve(realizations.size());
        for (const SimRealization &r : realizations)
            pl.push_back(r.records[i].path_loss_db);
        ClassStats st = population_stats(pl);
        sum.waypoints.push_back({s.waypoints[i].location.id, st.mean, st.std_dev});
    }

    // Class fits are averaged over per-realization fits (mirroring how a
    // measurement campaign is processed one snapshot at a time); the same
    // fits provide the per-realization shadow residuals pooled below. The
    // waypoint subset with residuals is fixed by the scenario geometry, so
    // it is computed once.
    std::vector<Location> sf_points;
    std::vector<std::size_t> sf_index;
    std::vector<std::vector<double>> sf_values;
    std::vector<double> ple_los, sig_los, ple_nlos, sig_nlos;
    bool sf_points_ready = false;
    bool fit_issue_reported = false;
    for (const SimRealization &real : realizations)
    {
        SnapshotFits fits = fit_snapshot(real.records, s.freq_ghz);
        if (!fits.issues.empty() && !fit_issue_reported)
        {
            for (const Issue &issue : fits.issues)
                add_issue(sum.issues, issue.code, issue.message);
            fit_issue_reported = true;
        }
        if (fits.los)
        {
            ple_los.push_back(fits.los->model.ple);
            sig_los.push_back(fits.los->model.sigma_db);
        }
        if (fits.nlos)
        {
            ple_nlos.push_back(fits.nlos->model.ple);
            sig_nlos.push_back(fits.nlos->model.sigma_db);
        }
        if (!sf_points_ready)
        {
            for (std::size_t i = 0; i < n_wp; i++)
                if (fits.shadow_db[i])
                {
                    sf_points.push_back(real.records[i].location);
                    sf_index.push_back(i);
                }
            sf_points_ready = true;
        }
        std::vector<double> chi;
        chi.reserve(sf_index.size());
        bool complete = !sf_index.empty();
        for (std::size_t i : sf_index)
        {
            if (!fits.shadow_db[i])
            {
                complete = false;
                break;
            }
            chi.push_back(*fits.shadow_db[i]);
        }
        if (complete)
            sf_values.push_back(std::move(chi));
    }
    if (!ple_los.empty())
        sum.los_fit = FitStats{population_stats(ple_los).mean, population_stats(sig_los).mean,
                               ple_los.size()};
    if (!ple_nlos.empty())
        sum.nlos_fit = FitStats{population_stats(ple_nlos).mean, population_stats(sig_nlos).mean,
                                ple_nlos.size()};

    std::vector<Location> all_points;
    for (const Waypoint &wp : s.waypoints)
        all_points.push_back(wp.location);
    std::vector<std::vector<double>> ds_values, as_values;
    for (const SimRealization &real : realizations)
    {
        std::vector<double> ds, as;
        ds.reserve(n_wp);
        as.reserve(n_wp);
        for (const RxRecord &rec : real.records)
        {
            ds.push_back(rec.delay_spread_ns);
            as.push_back(rec.angular_spread_rad);
        }
        ds_values.push_back(std::move(ds));
        as_values.push_back(std::move(as));
    }

    if (!sf_values.empty())
        sum.shadow = analyze_param(sf_points, sf_values, opt, "shadow_fading");
    else
        add_issue(sum.shadow.issues, ErrorCode::InsufficientSamples,
                  "estimate_autocorr (shadow_fading): no realization produced shadow residuals");
    sum.delay_spread = analyze_param(all_points, ds_values, opt, "delay_spread");
    sum.angular_spread = analyze_param(all_points, as_values, opt, "angular_spread");

    for (LosClass cls : {LosClass::Los, LosClass::Nlos})
    {
        std::vector<double> ds, as;
        for (const SimRealization &real : realizations)
            for (std::size_t i = 0; i < n_wp; i++)
                if (s.waypoints[i].los == cls)
                {
                    ds.push_back(real.records[i].delay_spread_ns);
                    as.push_back(real.records[i].angular_spread_rad);
                }
        if (ds.empty())
            continue;
        if (cls == LosClass::Los)
        {
            sum.ds_los_ns = population_stats(ds);
            sum.as_los_rad = population_stats(as);
        }
        else
        {
            sum.ds_nlos_ns = population_stats(ds);
            sum.as_nlos_rad = population_stats(as);
        }
    }

    for (const auto &pa : {std::cref(sum.shadow), std::cref(sum.delay_spread),
                           std::cref(sum.angular_spread)})
        for (const Issue &issue : pa.get().issues)
            sum.issues.push_back(issue);
    return sum;
}

std::vector<RxRecord> records_from_campaign(const Campaign &campaign)
{
    if (!campaign.tx_position)
        throw Error(ErrorCode::ValidationError,
                    "campaign analysis needs the transmitter position (tx_position_m)");

    std::vector<RxRecord> records;
    for (std::size_t i = 0; i < campaign.locations.size(); i++)
    {
        const Location &loc = campaign.locations[i];
        auto it = campaign.pdps.find(loc.id);
        if (it == campaign.pdps.end() || it->second.empty())
            continue;
        const std::vector<DirectionalPdp> &pdps = it->second;

        OmniPdp omni = synthesize_omni_pdp(pdps, campaign.grid);
        std::vector<Mpc> spectrum = angular_power_spectrum(pdps, campaign.grid);

        RxRecord rec;
        rec.location = loc;
        rec.los = campaign.meta[i].los;
        rec.excess_loss_db = campaign.meta[i].excess_loss_db;
        rec.tr_distance_m = distance_3d_m(*campaign.tx_position, loc);
        rec.path_loss_db = omni_path_loss_db(omni, campaign.budget);
        rec.delay_spread_ns = rms_delay_spread_ns(omni);
        rec.angular_spread_rad = angular_spread_rad(spectrum);
        records.push_back(rec);
    }
    return records;
}

} // namespace subthz
