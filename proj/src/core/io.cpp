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

#include "core/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/units.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace subthz {

std::string format_fixed(double value, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    std::string s(buf);
    if (s[0] == '-' && s.find_first_not_of("0.", 1) == std::string::npos)
        s.erase(0, 1); // -0.000 carries no information, print it unsigned
    return s;
}

namespace {

struct Ctx {
    std::string path;
    std::size_t line_no = 0;
};

[[noreturn]] void parse_fail(const Ctx &ctx, const std::string &msg)
{
    throw Error(ErrorCode::ParseError,
                ctx.path + ":" + std::to_string(ctx.line_no) + ": " + msg);
}

std::vector<std::string> read_lines(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
    {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::string trim(const std::string &s)
{
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true)
    {
        auto pos = s.find(sep, start);
        if (pos == std::string::npos)
        {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string> split_ws(const std::string &s)
{
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok)
        out.push_back(tok);
    return out;
}

double parse_double(const Ctx &ctx, const std::string &text, const std::string &what)
{
    std::string t = trim(text);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        parse_fail(ctx, what + ": expected a number, got '" + text + "'");
    return v;
}

long long parse_int(const Ctx &ctx, const std::string &text, const std::string &what)
{
    std::string t = trim(text);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        parse_fail(ctx, what + ": expected an integer, got '" + text + "'");
    return v;
}

std::uint64_t parse_u64(const Ctx &ctx, const std::string &text, const std::string &what)
{
    std::string t = trim(text);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        parse_fail(ctx, what + ": expected an unsigned integer, got '" + text + "'");
    return v;
}

// Leading `# key = value` block after the magic line. Returns the index of
// the first line past the block.
std::size_t parse_header_block(const std::vector<std::string> &lines, Ctx &ctx,
                               std::map<std::string, std::string> &out)
{
    std::size_t i = 1;
    for (; i < lines.size(); i++)
    {
        const std::string &line = lines[i];
        if (trim(line).empty())
            continue;
        if (line[0] != '#')
            break;
        ctx.line_no = i + 1;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            parse_fail(ctx, "header line needs the form '# key = value'");
        std::string key = trim(line.substr(1, eq - 1));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            parse_fail(ctx, "header line has an empty key");
        if (!out.emplace(key, value).second)
            parse_fail(ctx, "duplicate header key '" + key + "'");
    }
    return i;
}

void check_header_keys(const Ctx &ctx_file, const std::map<std::string, std::string> &have,
                       const std::vector<std::string> &required)
{
    Ctx ctx = ctx_file;
    ctx.line_no = 1;
    for (const std::string &key : required)
        if (!have.count(key))
            parse_fail(ctx, "missing header key '" + key + "'");
    for (const auto &[key, value] : have)
        if (std::find(required.begin(), required.end(), key) == required.end())
            parse_fail(ctx, "unknown header key '" + key + "'");
}

// Column header: every name must be known, required ones present, none
// duplicated. Returns name -> index.
std::map<std::string, std::size_t> parse_columns(const Ctx &ctx, const std::string &line,
                                                 const std::vector<std::string> &required,
                                                 const std::vector<std::string> &optional)
{
    std::map<std::string, std::size_t> idx;
    auto names = split(line, ',');
    for (std::size_t i = 0; i < names.size(); i++)
    {
        std::string name = trim(names[i]);
        bool known = std::find(required.begin(), required.end(), name) != required.end() ||
                     std::find(optional.begin(), optional.end(), name) != optional.end();
        if (!known)
            parse_fail(ctx, "unknown column '" + name + "'");
        if (!idx.emplace(name, i).second)
            parse_fail(ctx, "duplicate column '" + name + "'");
    }
    for (const std::string &name : required)
        if (!idx.count(name))
            parse_fail(ctx, "missing column '" + name + "'");
    return idx;
}

Location parse_tx_position(const Ctx &ctx, const std::string &value)
{
    auto parts = split_ws(value);
    if (parts.size() != 3)
        parse_fail(ctx, "tx_position_m needs three coordinates 'x y z'");
    return {0, parse_double(ctx, parts[0], "tx_position_m x"),
            parse_double(ctx, parts[1], "tx_position_m y"),
            parse_double(ctx, parts[2], "tx_position_m z")};
}

} // namespace

InputKind detect_input_kind(const std::string &path)
{
    auto lines = read_lines(path);
    if (!lines.empty() && lines[0] == CAMPAIGN_MAGIC)
        return InputKind::CampaignCsv;
    if (!lines.empty() && lines[0] == LOCATIONS_MAGIC)
        return InputKind::LocationsCsv;
    throw Error(ErrorCode::ParseError,
                path + ":1: unrecognized input, expected '" + std::string(CAMPAIGN_MAGIC) +
                    "' or '" + std::string(LOCATIONS_MAGIC) + "'");
}

Campaign read_campaign_csv(const std::string &path)
{
    auto lines = read_lines(path);
    Ctx ctx{path, 1};
    if (lines.empty() || lines[0] != CAMPAIGN_MAGIC)
        parse_fail(ctx, "expected magic line '" + std::string(CAMPAIGN_MAGIC) + "'");

    std::map<std::string, std::string> header;
    std::size_t row0 = parse_header_block(lines, ctx, header);
    check_header_keys(ctx, header,
                      {"center_freq_ghz", "tx_power_dbm", "tx_gain_dbi", "rx_gain_dbi",
                       "noise_threshold_db", "delay_bin_width_ns", "tx_position_m"});

    ctx.line_no = 1;
    double freq_ghz = parse_double(ctx, header["center_freq_ghz"], "center_freq_ghz");
    LinkBudget budget{parse_double(ctx, header["tx_power_dbm"], "tx_power_dbm"),
                      parse_double(ctx, header["tx_gain_dbi"], "tx_gain_dbi"),
                      parse_double(ctx, header["rx_gain_dbi"], "rx_gain_dbi")};
    double noise_threshold_db = parse_double(ctx, header["noise_threshold_db"], "noise_threshold_db");
    DelayGrid grid{parse_double(ctx, header["delay_bin_width_ns"], "delay_bin_width_ns")};
    Location tx = parse_tx_position(ctx, header["tx_position_m"]);

    if (row0 >= lines.size())
        throw Error(ErrorCode::TooFewEntries, path + ": campaign file has no data rows");
    ctx.line_no = row0 + 1;
    auto col = parse_columns(ctx, lines[row0],
                             {"rx_id", "x_m", "y_m", "z_m", "los", "tx_az_deg", "tx_el_deg",
                              "rx_az_deg", "rx_el_deg", "delay_ns", "power_dbm"},
                             {"excess_loss_db"});
    const std::size_t n_cols = split(lines[row0], ',').size();
    const bool has_excess = col.count("excess_loss_db") > 0;

    std::vector<Location> locations;
    std::vector<RxMeta> meta;
    std::map<int, std::size_t> seen;
    std::vector<DirectionalPdp> pdps;
    bool have_current = false;
    int cur_rx = 0;
    PointingAngle cur_tx_pt, cur_rx_pt;

    std::size_t n_rows = 0;
    for (std::size_t li = row0 + 1; li < lines.size(); li++)
    {
        if (trim(lines[li]).empty())
            continue;
        ctx.line_no = li + 1;
        auto f = split(lines[li], ',');
        if (f.size() != n_cols)
            parse_fail(ctx, "expected " + std::to_string(n_cols) + " fields, got " +
                                std::to_string(f.size()));
        n_rows++;

        int rx_id = int(parse_int(ctx, f[col["rx_id"]], "rx_id"));
        Location loc{rx_id, parse_double(ctx, f[col["x_m"]], "x_m"),
                     parse_double(ctx, f[col["y_m"]], "y_m"),
                     parse_double(ctx, f[col["z_m"]], "z_m")};
        RxMeta m;
        try
        {
            m.los = los_class_from_name(trim(f[col["los"]]));
        }
        catch (const Error &e)
        {
            parse_fail(ctx, std::string("los: ") + e.what());
        }
        if (has_excess && !trim(f[col["excess_loss_db"]]).empty())
            m.excess_loss_db = parse_double(ctx, f[col["excess_loss_db"]], "excess_loss_db");

        auto it = seen.find(rx_id);
        if (it == seen.end())
        {
            seen.emplace(rx_id, locations.size());
            locations.push_back(loc);
            meta.push_back(m);
        }
        else
        {
            const Location &prev = locations[it->second];
            const RxMeta &pm = meta[it->second];
            if (prev.x_m != loc.x_m || prev.y_m != loc.y_m || prev.z_m != loc.z_m ||
                pm.los != m.los || pm.excess_loss_db != m.excess_loss_db)
                parse_fail(ctx, "conflicting location data for rx " + std::to_string(rx_id));
        }

        PointingAngle tx_pt{parse_double(ctx, f[col["tx_az_deg"]], "tx_az_deg"),
                            parse_double(ctx, f[col["tx_el_deg"]], "tx_el_deg")};
        PointingAngle rx_pt{parse_double(ctx, f[col["rx_az_deg"]], "rx_az_deg"),
                            parse_double(ctx, f[col["rx_el_deg"]], "rx_el_deg")};
        bool same_capture = have_current && cur_rx == rx_id &&
                            cur_tx_pt.azimuth_deg == tx_pt.azimuth_deg &&
                            cur_tx_pt.elevation_deg == tx_pt.elevation_deg &&
                            cur_rx_pt.azimuth_deg == rx_pt.azimuth_deg &&
                            cur_rx_pt.elevation_deg == rx_pt.elevation_deg;
        if (!same_capture)
        {
            pdps.push_back(DirectionalPdp{rx_id, tx_pt, rx_pt, {}});
            have_current = true;
            cur_rx = rx_id;
            cur_tx_pt = tx_pt;
            cur_rx_pt = rx_pt;
        }
        pdps.back().samples.push_back(
            {parse_double(ctx, f[col["delay_ns"]], "delay_ns"),
             db_to_linear(parse_double(ctx, f[col["power_dbm"]], "power_dbm"))});
    }
    if (n_rows == 0)
        throw Error(ErrorCode::TooFewEntries, path + ": campaign file has no data rows");

    return validate_campaign(std::move(pdps), std::move(locations), std::move(meta), freq_ghz,
                             budget, grid, noise_threshold_db, tx);
}

LocationsFile read_locations_csv(const std::string &path)
{
    auto lines = read_lines(path);
    Ctx ctx{path, 1};
    if (lines.empty() || lines[0] != LOCATIONS_MAGIC)
        parse_fail(ctx, "expected magic line '" + std::string(LOCATIONS_MAGIC) + "'");

    std::map<std::string, std::string> header;
    std::size_t row0 = parse_header_block(lines, ctx, header);
    check_header_keys(ctx, header, {"center_freq_ghz"});
    ctx.line_no = 1;
    LocationsFile out;
    out.freq_ghz = parse_double(ctx, header["center_freq_ghz"], "center_freq_ghz");

    if (row0 >= lines.size())
        throw Error(ErrorCode::TooFewEntries, path + ": locations file has no data rows");
    ctx.line_no = row0 + 1;
    auto col = parse_columns(ctx, lines[row0],
                             {"rx_id", "x_m", "y_m", "z_m", "los", "tr_distance_m",
                              "path_loss_db", "shadow_fading_db", "delay_spread_ns",
                              "angular_spread_rad", "excess_loss_db"},
                             {});
    const std::size_t n_cols = split(lines[row0], ',').size();

    std::map<int, std::size_t> seen;
    for (std::size_t li = row0 + 1; li < lines.size(); li++)
    {
        if (trim(lines[li]).empty())
            continue;
        ctx.line_no = li + 1;
        auto f = split(lines[li], ',');
        if (f.size() != n_cols)
            parse_fail(ctx, "expected " + std::to_string(n_cols) + " fields, got " +
                                std::to_string(f.size()));

        RxRecord rec;
        rec.location = {int(parse_int(ctx, f[col["rx_id"]], "rx_id")),
                        parse_double(ctx, f[col["x_m"]], "x_m"),
                        parse_double(ctx, f[col["y_m"]], "y_m"),
                        parse_double(ctx, f[col["z_m"]], "z_m")};
        try
        {
            rec.los = los_class_from_name(trim(f[col["los"]]));
        }
        catch (const Error &e)
        {
            parse_fail(ctx, std::string("los: ") + e.what());
        }
        rec.tr_distance_m = parse_double(ctx, f[col["tr_distance_m"]], "tr_distance_m");
        rec.path_loss_db = parse_double(ctx, f[col["path_loss_db"]], "path_loss_db");
        rec.delay_spread_ns = parse_double(ctx, f[col["delay_spread_ns"]], "delay_spread_ns");
        rec.angular_spread_rad = parse_double(ctx, f[col["angular_spread_rad"]], "angular_spread_rad");
        if (!trim(f[col["excess_loss_db"]]).empty())
            rec.excess_loss_db = parse_double(ctx, f[col["excess_loss_db"]], "excess_loss_db");

        if (!seen.emplace(rec.location.id, out.records.size()).second)
            throw Error(ErrorCode::DuplicateLocationId,
                        path + ":" + std::to_string(ctx.line_no) + ": location id " +
                            std::to_string(rec.location.id) + " appears twice");

        std::optional<double> shadow;
        if (!trim(f[col["shadow_fading_db"]]).empty())
            shadow = parse_double(ctx, f[col["shadow_fading_db"]], "shadow_fading_db");
        out.records.push_back(rec);
        out.shadow_db.push_back(shadow);
    }
    if (out.records.empty())
        throw Error(ErrorCode::TooFewEntries, path + ": locations file has no data rows");
    return out;
}

void write_locations_csv(const std::string &path, double freq_ghz,
                         std::span<const RxRecord> records,
                         std::span<const std::optional<double>> shadow_db)
{
    std::string s;
    s += LOCATIONS_MAGIC;
    s += "\n# center_freq_ghz = " + format_fixed(freq_ghz, 6) + "\n";
    s += "rx_id,x_m,y_m,z_m,los,tr_distance_m,path_loss_db,shadow_fading_db,"
         "delay_spread_ns,angular_spread_rad,excess_loss_db\n";
    for (std::size_t i = 0; i < records.size(); i++)
    {
        const RxRecord &r = records[i];
        s += std::to_string(r.location.id);
        s += ',' + format_fixed(r.location.x_m, 6);
        s += ',' + format_fixed(r.location.y_m, 6);
        s += ',' + format_fixed(r.location.z_m, 6);
        s += ',';
        s += los_class_name(r.los);
        s += ',' + format_fixed(r.tr_distance_m, 6);
        s += ',' + format_fixed(r.path_loss_db, 6);
        s += ',';
        if (i < shadow_db.size() && shadow_db[i])
            s += format_fixed(*shadow_db[i], 6);
        s += ',' + format_fixed(r.delay_spread_ns, 3);
        s += ',' + format_fixed(r.angular_spread_rad, 6);
        s += ',';
        if (r.excess_loss_db)
            s += format_fixed(*r.excess_loss_db, 6);
        s += '\n';
    }
    write_text_file(path, s);
}

AutocorrEstimate read_autocorr_csv(const std::string &path)
{
    auto lines = read_lines(path);
    Ctx ctx{path, 1};
    if (lines.empty() || lines[0] != AUTOCORR_MAGIC)
        parse_fail(ctx, "expected magic line '" + std::string(AUTOCORR_MAGIC) + "'");

    std::map<std::string, std::string> header;
    std::size_t row0 = parse_header_block(lines, ctx, header);
    check_header_keys(ctx, header, {"delta_d_m"});
    ctx.line_no = 1;
    AutocorrEstimate est;
    est.delta_d_m = parse_double(ctx, header["delta_d_m"], "delta_d_m");

    if (row0 >= lines.size())
        throw Error(ErrorCode::TooFewEntries, path + ": autocorrelation file has no data rows");
    ctx.line_no = row0 + 1;
    auto col = parse_columns(ctx, lines[row0], {"lag_m", "rho", "pair_count"}, {});
    const std::size_t n_cols = split(lines[row0], ',').size();

    for (std::size_t li = row0 + 1; li < lines.size(); li++)
    {
        if (trim(lines[li]).empty())
            continue;
        ctx.line_no = li + 1;
        auto f = split(lines[li], ',');
        if (f.size() != n_cols)
            parse_fail(ctx, "expected " + std::to_string(n_cols) + " fields, got " +
                                std::to_string(f.size()));
        AutocorrBin bin;
        bin.distance_m = parse_double(ctx, f[col["lag_m"]], "lag_m");
        bin.rho = parse_double(ctx, f[col["rho"]], "rho");
        bin.pair_count = std::size_t(parse_u64(ctx, f[col["pair_count"]], "pair_count"));
        est.bins.push_back(bin);
    }
    return est;
}

void write_autocorr_csv(const std::string &path, const AutocorrEstimate &estimate)
{
    std::string s;
    s += AUTOCORR_MAGIC;
    s += "\n# delta_d_m = " + format_fixed(estimate.delta_d_m, 6) + "\n";
    s += "lag_m,rho,pair_count\n";
    for (const AutocorrBin &b : estimate.bins)
    {
        s += format_fixed(b.distance_m, 6);
        s += ',' + format_fixed(b.rho, 9);
        s += ',' + std::to_string(b.pair_count);
        s += '\n';
    }
    write_text_file(path, s);
}

namespace {

CorrModel parse_corr_value(const Ctx &ctx, const std::string &value, const std::string &key)
{
    auto parts = split_ws(value);
    if (parts.empty())
        parse_fail(ctx, key + ": expected 'exp D1' or 'expsin D1 D2'");
    CorrModel model;
    try
    {
        model.family = corr_family_from_name(parts[0]);
    }
    catch (const Error &e)
    {
        parse_fail(ctx, key + ": " + e.what());
    }
    if (model.family == CorrFamily::Exponential)
    {
        if (parts.size() != 2)
            parse_fail(ctx, key + ": exp model needs exactly one length, 'exp D1'");
        model.d1_m = parse_double(ctx, parts[1], key + " d1");
    }
    else
    {
        if (parts.size() != 3)
            parse_fail(ctx, key + ": expsin model needs two lengths, 'expsin D1 D2'");
        model.d1_m = parse_double(ctx, parts[1], key + " d1");
        model.d2_m = parse_double(ctx, parts[2], key + " d2");
    }
    return model;
}

} // namespace

RouteScenario read_scenario(const std::string &path)
{
    auto lines = read_lines(path);
    Ctx ctx{path, 1};
    if (lines.empty() || lines[0] != SCENARIO_MAGIC)
        parse_fail(ctx, "expected magic line '" + std::string(SCENARIO_MAGIC) + "'");

    static const std::vector<std::string> scalar_keys = {
        "freq_ghz", "seed", "tx_position_m",
        "los_ple", "los_sigma_db", "nlos_ple", "nlos_sigma_db",
        "sf_corr", "ds_corr", "as_corr",
        "ds_los_mean_ns", "ds_los_std_ns", "ds_nlos_mean_ns", "ds_nlos_std_ns",
        "as_los_mean_rad", "as_los_std_rad", "as_nlos_mean_rad", "as_nlos_std_rad"};

    std::map<std::string, std::pair<std::string, std::size_t>> kv; // key -> (value, line)
    RouteScenario s;
    bool any_waypoint = false;

    for (std::size_t li = 1; li < lines.size(); li++)
    {
        std::string line = trim(lines[li]);
        if (line.empty() || line[0] == '#')
            continue;
        ctx.line_no = li + 1;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            parse_fail(ctx, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        if (key == "waypoint")
        {
            auto parts = split_ws(value);
            if (parts.size() != 5 && parts.size() != 6)
                parse_fail(ctx, "waypoint needs 'id x y z LOS|NLOS [excess_loss_db]'");
            Waypoint wp;
            wp.location = {int(parse_int(ctx, parts[0], "waypoint id")),
                           parse_double(ctx, parts[1], "waypoint x"),
                           parse_double(ctx, parts[2], "waypoint y"),
                           parse_double(ctx, parts[3], "waypoint z")};
            try
            {
                wp.los = los_class_from_name(parts[4]);
            }
            catch (const Error &e)
            {
                parse_fail(ctx, std::string("waypoint los: ") + e.what());
            }
            if (parts.size() == 6)
                wp.excess_loss_db = parse_double(ctx, parts[5], "waypoint excess_loss_db");
            s.waypoints.push_back(wp);
            any_waypoint = true;
            continue;
        }

        if (std::find(scalar_keys.begin(), scalar_keys.end(), key) == scalar_keys.end())
            parse_fail(ctx, "unknown key '" + key + "'");
        if (!kv.emplace(key, std::make_pair(value, li + 1)).second)
            parse_fail(ctx, "duplicate key '" + key + "'");
    }

    auto need = [&](const std::string &key) -> std::pair<std::string, Ctx> {
        auto it = kv.find(key);
        if (it == kv.end())
        {
            Ctx c{path, 1};
            parse_fail(c, "missing key '" + key + "'");
        }
        return {it->second.first, Ctx{path, it->second.second}};
    };

    {
        auto [v, c] = need("freq_ghz");
        s.freq_ghz = parse_double(c, v, "freq_ghz");
    }
    {
        auto [v, c] = need("tx_position_m");
        s.tx = parse_tx_position(c, v);
    }
    if (auto it = kv.find("seed"); it != kv.end())
        s.seed = parse_u64(Ctx{path, it->second.second}, it->second.first, "seed");

    auto [lp, lpc] = need("los_ple");
    auto [ls, lsc] = need("los_sigma_db");
    auto [np, npc] = need("nlos_ple");
    auto [ns, nsc] = need("nlos_sigma_db");
    s.los_model = {s.freq_ghz, parse_double(lpc, lp, "los_ple"), parse_double(lsc, ls, "los_sigma_db")};
    s.nlos_model = {s.freq_ghz, parse_double(npc, np, "nlos_ple"), parse_double(nsc, ns, "nlos_sigma_db")};

    {
        auto [v, c] = need("sf_corr");
        s.sf_corr = parse_corr_value(c, v, "sf_corr");
    }
    {
        auto [v, c] = need("ds_corr");
        s.ds_corr = parse_corr_value(c, v, "ds_corr");
    }
    {
        auto [v, c] = need("as_corr");
        s.as_corr = parse_corr_value(c, v, "as_corr");
    }

    auto stat = [&](const char *mean_key, const char *std_key) {
        auto [mv, mc] = need(mean_key);
        auto [sv, sc] = need(std_key);
        return ClassStats{parse_double(mc, mv, mean_key), parse_double(sc, sv, std_key)};
    };
    s.ds_los_ns = stat("ds_los_mean_ns", "ds_los_std_ns");
    s.ds_nlos_ns = stat("ds_nlos_mean_ns", "ds_nlos_std_ns");
    s.as_los_rad = stat("as_los_mean_rad", "as_los_std_rad");
    s.as_nlos_rad = stat("as_nlos_mean_rad", "as_nlos_std_rad");

    if (!any_waypoint)
    {
        Ctx c{path, 1};
        parse_fail(c, "missing key 'waypoint' (need at least two)");
    }
    return s;
}

namespace {

json class_stats_json(const std::optional<ClassStats> &los, const std::optional<ClassStats> &nlos)
{
    json j = json::object();
    if (los)
        j["los"] = {{"mean", los->mean}, {"std", los->std_dev}};
    if (nlos)
        j["nlos"] = {{"mean", nlos->mean}, {"std", nlos->std_dev}};
    return j;
}

json fit_json(const FittedCorrModel &fit)
{
    json j;
    j["family"] = corr_family_name(fit.model.family);
    j["d1_m"] = fit.model.d1_m;
    if (fit.model.family == CorrFamily::ExpDecaySinusoid)
        j["d2_m"] = fit.model.d2_m;
    j["rmse"] = fit.rmse;
    j["corr_distance_m"] = fit.corr_distance_m ? json(*fit.corr_distance_m) : json(nullptr);
    return j;
}

json param_json(const ParamAnalysis &pa)
{
    json j = json::object();
    if (pa.autocorr)
        j["autocorr"] = {{"delta_d_m", pa.autocorr->delta_d_m},
                         {"n_bins", pa.autocorr->bins.size()}};
    if (pa.fit)
        j["fit"] = fit_json(*pa.fit);
    return j;
}

json issues_json(const std::vector<Issue> &issues)
{
    json j = json::array();
    for (const Issue &issue : issues)
        j.push_back(issue.message);
    return j;
}

} // namespace

std::string fits_json(const RouteReport &report)
{
    json j;
    j["freq_ghz"] = report.freq_ghz;
    json pl = json::object();
    pl["fspl_1m_db"] = fspl_1m_db(report.freq_ghz);
    if (report.los_fit)
        pl["los"] = {{"ple", report.los_fit->model.ple},
                     {"sigma_db", report.los_fit->model.sigma_db},
                     {"n_samples", report.los_fit->n_samples}};
    if (report.nlos_fit)
        pl["nlos"] = {{"ple", report.nlos_fit->model.ple},
                      {"sigma_db", report.nlos_fit->model.sigma_db},
                      {"n_samples", report.nlos_fit->n_samples}};
    j["path_loss"] = pl;
    j["params"] = {{"sf", param_json(report.shadow)},
                   {"ds", param_json(report.delay_spread)},
                   {"as", param_json(report.angular_spread)}};
    j["class_stats"] = {{"ds_ns", class_stats_json(report.ds_los_ns, report.ds_nlos_ns)},
                        {"as_rad", class_stats_json(report.as_los_rad, report.as_nlos_rad)}};
    j["issues"] = issues_json(report.issues);
    return j.dump(2) + "\n";
}

std::string summary_json(const EnsembleSummary &summary)
{
    json j;
    j["n_realizations"] = summary.n_realizations;
    j["seed"] = summary.seed;
    j["freq_ghz"] = summary.freq_ghz;
    json wps = json::array();
    for (const WaypointStat &w : summary.waypoints)
        wps.push_back({{"rx_id", w.rx_id},
                       {"mean_path_loss_db", w.mean_path_loss_db},
                       {"std_path_loss_db", w.std_path_loss_db}});
    j["waypoints"] = wps;
    json pl = json::object();
    if (summary.los_fit)
        pl["los"] = {{"mean_ple", summary.los_fit->mean_ple},
                     {"mean_sigma_db", summary.los_fit->mean_sigma_db},
                     {"n_realizations", summary.los_fit->n_realizations}};
    if (summary.nlos_fit)
        pl["nlos"] = {{"mean_ple", summary.nlos_fit->mean_ple},
                      {"mean_sigma_db", summary.nlos_fit->mean_sigma_db},
                      {"n_realizations", summary.nlos_fit->n_realizations}};
    j["path_loss"] = pl;
    j["params"] = {{"sf", param_json(summary.shadow)},
                   {"ds", param_json(summary.delay_spread)},
                   {"as", param_json(summary.angular_spread)}};
    j["class_stats"] = {{"ds_ns", class_stats_json(summary.ds_los_ns, summary.ds_nlos_ns)},
                        {"as_rad", class_stats_json(summary.as_los_rad, summary.as_nlos_rad)}};
    j["issues"] = issues_json(summary.issues);
    return j.dump(2) + "\n";
}

std::string corr_fit_json(const FittedCorrModel &fit)
{
    return fit_json(fit).dump(2) + "\n";
}

void write_text_file(const std::string &path, const std::string &content)
{
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec)
        throw Error(ErrorCode::IoError,
                    "cannot move " + tmp.string() + " to " + path + ": " + ec.message());
}

AnalyzeResult analyze_input_file(const std::string &path, const AnalyzeOptions &options)
{
    AnalyzeResult res;
    if (detect_input_kind(path) == InputKind::CampaignCsv)
    {
        Campaign campaign = read_campaign_csv(path);
        res.freq_ghz = campaign.center_freq_ghz;
        res.records = records_from_campaign(campaign);
    }
    else
    {
        LocationsFile lf = read_locations_csv(path);
        res.freq_ghz = lf.freq_ghz;
        res.records = std::move(lf.records);
    }
    res.report = analyze_route(res.records, res.freq_ghz, options);
    return res;
}

static void ensure_dir(const std::string &dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::IoError, "cannot create directory " + dir + ": " + ec.message());
}

void write_analyze_outputs(const AnalyzeResult &result, const std::string &out_dir)
{
    ensure_dir(out_dir);
    fs::path dir(out_dir);
    write_locations_csv((dir / "locations.csv").string(), result.freq_ghz, result.records,
                        result.report.shadow_db);
    if (result.report.shadow.autocorr)
        write_autocorr_csv((dir / "autocorr_sf.csv").string(), *result.report.shadow.autocorr);
    if (result.report.delay_spread.autocorr)
        write_autocorr_csv((dir / "autocorr_ds.csv").string(), *result.report.delay_spread.autocorr);
    if (result.report.angular_spread.autocorr)
        write_autocorr_csv((dir / "autocorr_as.csv").string(),
                           *result.report.angular_spread.autocorr);
    write_text_file((dir / "fits.json").string(), fits_json(result.report));
}

void write_simulate_outputs(std::span<const SimRealization> realizations,
                            const EnsembleSummary &summary, const std::string &out_dir)
{
    ensure_dir(out_dir);
    fs::path dir(out_dir);
    for (const SimRealization &real : realizations)
    {
        char name[32];
        std::snprintf(name, sizeof(name), "locations_r%04zu.csv", real.index);
        std::vector<std::optional<double>> shadow(real.shadow_db.begin(), real.shadow_db.end());
        write_locations_csv((dir / name).string(), summary.freq_ghz, real.records, shadow);
    }
    if (summary.shadow.autocorr)
        write_autocorr_csv((dir / "autocorr_sf.csv").string(), *summary.shadow.autocorr);
    if (summary.delay_spread.autocorr)
        write_autocorr_csv((dir / "autocorr_ds.csv").string(), *summary.delay_spread.autocorr);
    if (summary.angular_spread.autocorr)
        write_autocorr_csv((dir / "autocorr_as.csv").string(), *summary.angular_spread.autocorr);
    write_text_file((dir / "summary.json").string(), summary_json(summary));
}

} // namespace subthz
