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
//
// Command line front end. Talks to the library exclusively through the
// public C interface.
//
// Exit codes: 0 success, 2 parse/validation/usage, 3 statistical
// precondition, 4 non-convergence, 1 internal error.

#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include <subthz/subthz.h>

namespace {

int family_id(const std::string &name)
{
    return name == "exp" ? SUBTHZ_CORR_EXP : SUBTHZ_CORR_EXPSIN;
}

int fail(const char *command, int status)
{
    std::fprintf(stderr, "subthz %s: [%s] %s\n", command, subthz_status_name(status),
                 subthz_last_error());
    int cls = subthz_status_class(status);
    return cls == 0 ? 1 : cls;
}

// SUBTHZ_SEED overrides the scenario file seed; an explicit --seed flag
// overrides both.
bool env_seed(uint64_t &seed, bool &present)
{
    const char *text = std::getenv("SUBTHZ_SEED");
    if (!text || !*text)
    {
        present = false;
        return true;
    }
    char *end = nullptr;
    unsigned long long v = std::strtoull(text, &end, 10);
    if (!end || *end != '\0')
        return false;
    seed = v;
    present = true;
    return true;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"sub-THz channel statistics: route analysis and spatially consistent simulation"};
    app.set_version_flag("--version", std::string(subthz_version()));
    app.require_subcommand(1);

    std::string input_path, out_dir, family = "expsin";
    double delta_d = 0.05;
    std::size_t min_pairs = 2;
    bool weighted = false;

    CLI::App *analyze = app.add_subcommand(
        "analyze", "Extract path loss fits, spreads and spatial autocorrelation from a "
                   "campaign or locations CSV");
    analyze->add_option("input", input_path, "campaign CSV or locations CSV")->required();
    analyze->add_option("-o,--out", out_dir, "output directory")->required();
    analyze->add_option("--delta-d", delta_d, "autocorrelation lag bin width in meters");
    analyze->add_option("--min-pairs", min_pairs, "minimum pairs per reported lag bin");
    analyze->add_option("--family", family, "correlation model family")
        ->check(CLI::IsMember({"exp", "expsin"}));
    analyze->add_flag("--weighted", weighted, "weight correlation fits by bin pair counts");

    std::string scenario_path;
    bool umi_default = false;
    std::size_t n_realizations = 1;
    uint64_t seed_flag = 0;
    bool seed_given = false;

    CLI::App *simulate = app.add_subcommand(
        "simulate", "Generate spatially consistent large-scale parameters along a route");
    simulate->add_option("scenario", scenario_path, "scenario description file");
    simulate->add_flag("--umi-default", umi_default,
                       "use the built-in 142 GHz street-canyon route");
    simulate->add_option("-n,--realizations", n_realizations, "number of realizations")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed_flag, "override the scenario seed")
        ->each([&](const std::string &) { seed_given = true; });
    simulate->add_option("-o,--out", out_dir, "output directory")->required();
    simulate->add_option("--delta-d", delta_d, "autocorrelation lag bin width in meters");
    simulate->add_option("--min-pairs", min_pairs, "minimum pairs per reported lag bin");

    std::string autocorr_path;
    CLI::App *fit = app.add_subcommand(
        "fit", "Fit a correlation model to an autocorrelation CSV and print it as JSON");
    fit->add_option("input", autocorr_path, "autocorrelation CSV")->required();
    fit->add_option("--family", family, "correlation model family")
        ->check(CLI::IsMember({"exp", "expsin"}));
    fit->add_flag("--weighted", weighted, "weight the fit by bin pair counts");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 2;
    }

    if (analyze->parsed())
    {
        int rc = subthz_analyze_file(input_path.c_str(), out_dir.c_str(), delta_d, min_pairs,
                                     family_id(family), weighted ? 1 : 0);
        return rc == SUBTHZ_OK ? 0 : fail("analyze", rc);
    }

    if (simulate->parsed())
    {
        if (scenario_path.empty() == !umi_default)
        {
            std::fprintf(stderr, "subthz simulate: pass either a scenario file or "
                                 "--umi-default (not both)\n");
            return 2;
        }
        subthz_scenario *scenario = nullptr;
        int rc = umi_default ? subthz_scenario_umi_default(&scenario)
                               : subthz_scenario_load(scenario_path.c_str(), &scenario);
        if (rc != SUBTHZ_OK)
            return fail("simulate", rc);

        uint64_t seed_env = 0;
        bool env_present = false;
        if (!env_seed(seed_env, env_present))
        {
            std::fprintf(stderr, "subthz simulate: SUBTHZ_SEED: expected an unsigned integer\n");
            subthz_scenario_free(scenario);
            return 2;
        }
        if (env_present)
            subthz_scenario_set_seed(scenario, seed_env);
        if (seed_given)
            subthz_scenario_set_seed(scenario, seed_flag);

        rc = subthz_simulate_to_dir(scenario, n_realizations, out_dir.c_str(), delta_d, min_pairs);
        subthz_scenario_free(scenario);
        return rc == SUBTHZ_OK ? 0 : fail("simulate", rc);
    }

    // fit
    char *json = nullptr;
    int rc = subthz_fit_file_json(autocorr_path.c_str(), family_id(family), weighted ? 1 : 0,
                                  &json);
    if (rc != SUBTHZ_OK)
        return fail("fit", rc);
    std::fputs(json, stdout);
    subthz_string_free(json);
    return 0;
}
