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

#include <fstream>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "core/io.hpp"
#include "core/route_sim.hpp"
#include "core/spatial_stats.hpp"

using nlohmann::json;
using namespace subthz;

namespace {

json load_json_file(const std::string &path)
{
    std::ifstream in(path);
    REQUIRE(in.good());
    return json::parse(in);
}

// Validator for the subset of JSON Schema the shipped schemas use: type,
// required, properties, additionalProperties:false, items, enum,
// minimum/exclusiveMinimum and $ref into $defs (same file or sibling file).
class SchemaSet {
  public:
    void add(const std::string &name, json schema) { schemas_[name] = std::move(schema); }

    bool validate(const std::string &schema_name, const json &doc, std::string &why) const
    {
        const json &root = schemas_.at(schema_name);
        return check(root, root, doc, "$", why);
    }

  private:
    std::map<std::string, json> schemas_;

    const json &resolve(const json &root, const std::string &ref, const json *&new_root) const
    {
        auto hash = ref.find('#');
        REQUIRE(hash != std::string::npos);
        std::string file = ref.substr(0, hash);
        std::string pointer = ref.substr(hash + 1);
        new_root = file.empty() ? &root : &schemas_.at(file);
        return new_root->at(json::json_pointer(pointer));
    }

    static bool type_matches(const std::string &t, const json &doc)
    {
        if (t == "object")
            return doc.is_object();
        if (t == "array")
            return doc.is_array();
        if (t == "string")
            return doc.is_string();
        if (t == "number")
            return doc.is_number();
        if (t == "integer")
            return doc.is_number_integer() || doc.is_number_unsigned();
        if (t == "boolean")
            return doc.is_boolean();
        if (t == "null")
            return doc.is_null();
        FAIL("unknown schema type " + t);
        return false;
    }

    bool check(const json &root, const json &schema, const json &doc, const std::string &at,
               std::string &why) const
    {
        if (schema.contains("$ref"))
        {
            const json *ref_root = nullptr;
            const json &target = resolve(root, schema["$ref"].get<std::string>(), ref_root);
            return check(*ref_root, target, doc, at, why);
        }
        if (schema.contains("enum"))
        {
            for (const json &v : schema["enum"])
                if (v == doc)
                    return true;
            why = at + ": value not in enum";
            return false;
        }
        if (schema.contains("type"))
        {
            const json &t = schema["type"];
            bool ok = t.is_array() ? std::any_of(t.begin(), t.end(),
                                                 [&](const json &u) {
                                                     return type_matches(u.get<std::string>(),
                                                                         doc);
                                                 })
                                   : type_matches(t.get<std::string>(), doc);
            if (!ok)
            {
                why = at + ": type mismatch";
                return false;
            }
        }
        if (doc.is_number())
        {
            double v = doc.get<double>();
            if (schema.contains("minimum") && v < schema["minimum"].get<double>())
            {
                why = at + ": below minimum";
                return false;
            }
            if (schema.contains("exclusiveMinimum") &&
                v <= schema["exclusiveMinimum"].get<double>())
            {
                why = at + ": not above exclusiveMinimum";
                return false;
            }
        }
        if (doc.is_object())
        {
            if (schema.contains("required"))
                for (const json &k : schema["required"])
                    if (!doc.contains(k.get<std::string>()))
                    {
                        why = at + ": missing required key " + k.get<std::string>();
                        return false;
                    }
            const json props = schema.value("properties", json::object());
            for (auto it = doc.begin(); it != doc.end(); ++it)
            {
                if (props.contains(it.key()))
                {
                    if (!check(root, props[it.key()], it.value(), at + "." + it.key(), why))
                        return false;
                }
                else if (schema.value("additionalProperties", json(true)) == json(false))
                {
                    why = at + ": unexpected key " + it.key();
                    return false;
                }
            }
        }
        if (doc.is_array() && schema.contains("items"))
        {
            for (std::size_t i = 0; i < doc.size(); i++)
                if (!check(root, schema["items"], doc[i], at + "[" + std::to_string(i) + "]",
                           why))
                    return false;
        }
        return true;
    }
};

SchemaSet load_schemas()
{
    SchemaSet set;
    const std::string dir = SUBTHZ_SCHEMA_DIR;
    set.add("fits.schema.json", load_json_file(dir + "/fits.schema.json"));
    set.add("summary.schema.json", load_json_file(dir + "/summary.schema.json"));
    set.add("corr_fit.schema.json", load_json_file(dir + "/corr_fit.schema.json"));
    return set;
}

void expect_valid(const SchemaSet &set, const std::string &schema, const json &doc)
{
    std::string why;
    bool ok = set.validate(schema, doc, why);
    INFO(why);
    CHECK(ok);
}

void expect_invalid(const SchemaSet &set, const std::string &schema, const json &doc)
{
    std::string why;
    CHECK_FALSE(set.validate(schema, doc, why));
}

} // namespace

TEST_CASE("generated documents validate against the shipped schemas", "[schemas]")
{
    SchemaSet set = load_schemas();

    RouteScenario scenario = default_umi_scenario();
    scenario.seed = 11;
    auto realizations = simulate(scenario, 3);
    EnsembleSummary summary = summarize_ensemble(scenario, realizations);
    expect_valid(set, "summary.schema.json", json::parse(summary_json(summary)));

    RouteReport report = analyze_route(realizations[0].records, scenario.freq_ghz);
    expect_valid(set, "fits.schema.json", json::parse(fits_json(report)));

    REQUIRE(report.shadow.autocorr.has_value());
    for (CorrFamily family : {CorrFamily::Exponential, CorrFamily::ExpDecaySinusoid})
    {
        FittedCorrModel fit = fit_corr_model(*report.shadow.autocorr, family, {});
        expect_valid(set, "corr_fit.schema.json", json::parse(corr_fit_json(fit)));
    }
}

TEST_CASE("schema validation rejects malformed documents", "[schemas]")
{
    SchemaSet set = load_schemas();

    json good = {{"family", "exp"},
                 {"d1_m", 10.0},
                 {"rmse", 0.1},
                 {"corr_distance_m", 10.0}};
    expect_valid(set, "corr_fit.schema.json", good);

    json null_dist = good;
    null_dist["corr_distance_m"] = nullptr;
    expect_valid(set, "corr_fit.schema.json", null_dist);

    json missing = good;
    missing.erase("rmse");
    expect_invalid(set, "corr_fit.schema.json", missing);

    json extra = good;
    extra["bogus"] = 1;
    expect_invalid(set, "corr_fit.schema.json", extra);

    json bad_family = good;
    bad_family["family"] = "gauss";
    expect_invalid(set, "corr_fit.schema.json", bad_family);

    json bad_type = good;
    bad_type["d1_m"] = "ten";
    expect_invalid(set, "corr_fit.schema.json", bad_type);

    json bad_sign = good;
    bad_sign["d1_m"] = 0.0;
    expect_invalid(set, "corr_fit.schema.json", bad_sign);
}

TEST_CASE("fits schema checks nested sections", "[schemas]")
{
    SchemaSet set = load_schemas();

    RouteScenario scenario = default_umi_scenario();
    scenario.seed = 4;
    auto realizations = simulate(scenario, 1);
    json doc = json::parse(fits_json(analyze_route(realizations[0].records, scenario.freq_ghz)));

    json bad = doc;
    bad["path_loss"]["los"]["n_samples"] = 1; // below the fit precondition
    expect_invalid(set, "fits.schema.json", bad);

    bad = doc;
    bad["params"].erase("ds");
    expect_invalid(set, "fits.schema.json", bad);

    bad = doc;
    bad["class_stats"]["ds_ns"]["los"]["std"] = -1.0;
    expect_invalid(set, "fits.schema.json", bad);

    bad = doc;
    bad["issues"] = json::array({42});
    expect_invalid(set, "fits.schema.json", bad);

    // Cross-file $ref from the summary schema into the fits schema $defs.
    EnsembleSummary summary = summarize_ensemble(scenario, realizations);
    json sdoc = json::parse(summary_json(summary));
    expect_valid(set, "summary.schema.json", sdoc);
    sdoc["params"]["sf"]["fit"]["family"] = "gauss";
    expect_invalid(set, "summary.schema.json", sdoc);
}
