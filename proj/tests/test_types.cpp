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
#include <vector>

#include "core/errors.hpp"
#include "core/types.hpp"

using namespace subthz;

namespace {

DirectionalPdp make_capture(int rx_id, double az = 0.0,
                            std::vector<PdpSample> samples = {{100.0, 1e-6}, {102.0, 5e-7}})
{
    DirectionalPdp p;
    p.rx_id = rx_id;
    p.tx_pointing = {az, 0.0};
    p.rx_pointing = {az, 0.0};
    p.samples = std::move(samples);
    return p;
}

Campaign validate_one(DirectionalPdp pdp, double threshold_db = 25.0, DelayGrid grid = {2.0})
{
    std::vector<Location> locs{{pdp.rx_id, 0.0, 0.0, 1.5}};
    return validate_campaign({std::move(pdp)}, std::move(locs), {}, 142.0, {}, grid, threshold_db);
}

} // namespace

TEST_CASE("los class names round-trip", "[types]")
{
    CHECK(los_class_name(LosClass::Los) == std::string("LOS"));
    CHECK(los_class_name(LosClass::Nlos) == std::string("NLOS"));
    CHECK(los_class_from_name("LOS") == LosClass::Los);
    CHECK(los_class_from_name("NLOS") == LosClass::Nlos);
    CHECK_THROWS_AS(los_class_from_name("los"), Error);
}

TEST_CASE("distances split 2D and 3D as expected", "[types]")
{
    Location a{1, 0.0, 0.0, 1.5};
    Location b{2, 3.0, 4.0, 5.5};
    CHECK(distance_2d_m(a, b) == Catch::Approx(5.0).margin(1e-15));
    CHECK(distance_3d_m(a, b) == Catch::Approx(std::sqrt(41.0)).margin(1e-12));
    CHECK(distance_2d_m(a, a) == 0.0);
}

TEST_CASE("validate_campaign accepts a well-formed campaign", "[types]")
{
    std::vector<Location> locs{{1, 0, 0, 1.5}, {2, 3, 0, 1.5}};
    std::vector<RxMeta> meta{{LosClass::Los, std::nullopt}, {LosClass::Nlos, 10.0}};
    std::vector<DirectionalPdp> pdps{make_capture(1, 0.0), make_capture(1, 90.0),
                                     make_capture(2, 45.0)};
    Location tx{0, 0.5, -24.0, 4.0};

    Campaign c = validate_campaign(pdps, locs, meta, 142.0, {0.0, 27.0, 27.0}, {2.0}, 25.0, tx);

    CHECK(c.center_freq_ghz == 142.0);
    CHECK(c.locations.size() == 2);
    CHECK(c.location_index.at(1) == 0);
    CHECK(c.location_index.at(2) == 1);
    CHECK(c.pdps.at(1).size() == 2);
    CHECK(c.pdps.at(2).size() == 1);
    CHECK(c.meta[1].excess_loss_db == 10.0);
    REQUIRE(c.tx_position.has_value());
    CHECK(c.tx_position->y_m == -24.0);
}

TEST_CASE("validate_campaign defaults missing metadata to LOS", "[types]")
{
    std::vector<Location> locs{{1, 0, 0, 1.5}};
    Campaign c = validate_campaign({make_capture(1)}, locs, {}, 142.0, {}, {2.0}, 25.0);
    REQUIRE(c.meta.size() == 1);
    CHECK(c.meta[0].los == LosClass::Los);
    CHECK_FALSE(c.meta[0].excess_loss_db.has_value());
}

TEST_CASE("validate_campaign rejects duplicate location ids", "[types]")
{
    std::vector<Location> locs{{1, 0, 0, 1.5}, {1, 3, 0, 1.5}};
    try
    {
        validate_campaign({}, locs, {}, 142.0, {}, {2.0}, 25.0);
        FAIL("expected throw");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::DuplicateLocationId);
    }
}

TEST_CASE("validate_campaign rejects captures for unknown receivers", "[types]")
{
    std::vector<Location> locs{{1, 0, 0, 1.5}};
    try
    {
        validate_campaign({make_capture(7)}, locs, {}, 142.0, {}, {2.0}, 25.0);
        FAIL("expected throw");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::UnknownRxId);
    }
}

TEST_CASE("validate_campaign rejects empty inputs", "[types]")
{
    try
    {
        validate_campaign({}, {}, {}, 142.0, {}, {2.0}, 25.0);
        FAIL("expected throw");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::EmptyInput);
    }

    try
    {
        validate_one(make_capture(1, 0.0, {}));
        FAIL("expected throw");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::EmptyInput);
    }
}

TEST_CASE("validate_campaign enforces delay spacing of one bin width", "[types]")
{
    // 1.5 ns gap under a 2 ns grid: two samples would land in the same bin.
    try
    {
        validate_one(make_capture(1, 0.0, {{100.0, 1e-6}, {101.5, 5e-7}}));
        FAIL("expected throw");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::NonMonotoneDelays);
    }

    // Exactly one bin width apart is fine.
    CHECK_NOTHROW(validate_one(make_capture(1, 0.0, {{100.0, 1e-6}, {102.0, 5e-7}})));

    // Decreasing delays fail the same check.
    try
    {
        validate_one(make_capture(1, 0.0, {{102.0, 1e-6}, {100.0, 5e-7}}));
        FAIL("expected throw");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::NonMonotoneDelays);
    }
}

TEST_CASE("validate_campaign rejects non-positive powers", "[types]")
{
    for (double bad : {0.0, -1e-9})
    {
        try
        {
            validate_one(make_capture(1, 0.0, {{100.0, 1e-6}, {102.0, bad}}));
            FAIL("expected throw");
        }
        catch (const Error &e)
        {
            CHECK(e.code() == ErrorCode::NonPositivePower);
        }
    }
}

TEST_CASE("noise threshold applies per capture against its own peak", "[types]")
{
    // 25 dB below peak 1e-6 mW is 10^-8.5 mW. A sample just above passes,
    // just below fails.
    double floor_mw = 1e-6 * std::pow(10.0, -2.5);
    CHECK_NOTHROW(validate_one(make_capture(1, 0.0, {{100.0, 1e-6}, {102.0, floor_mw * 1.001}})));
    try
    {
        validate_one(make_capture(1, 0.0, {{100.0, 1e-6}, {102.0, floor_mw * 0.999}}));
        FAIL("expected throw");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::PowerBelowThreshold);
    }

    // A sample exactly at the floor is kept.
    CHECK_NOTHROW(validate_one(make_capture(1, 0.0, {{100.0, 1e-6}, {102.0, floor_mw}})));

    // The same weak sample in its own capture is the peak there, so two
    // separate captures pass where one combined capture fails.
    std::vector<Location> locs{{1, 0, 0, 1.5}};
    std::vector<DirectionalPdp> two{make_capture(1, 0.0, {{100.0, 1e-6}}),
                                    make_capture(1, 90.0, {{100.0, floor_mw * 0.5}})};
    CHECK_NOTHROW(validate_campaign(two, locs, {}, 142.0, {}, {2.0}, 25.0));
}

TEST_CASE("validate_campaign rejects out-of-range pointing", "[types]")
{
    auto bad_az = make_capture(1);
    bad_az.tx_pointing.azimuth_deg = 360.0;
    try
    {
        validate_one(std::move(bad_az));
        FAIL("expected throw");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::ValidationError);
    }

    auto bad_el = make_capture(1);
    bad_el.rx_pointing.elevation_deg = 91.0;
    try
    {
        validate_one(std::move(bad_el));
        FAIL("expected throw");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::ValidationError);
    }
}

TEST_CASE("validate_campaign rejects non-finite coordinates and bad excess", "[types]")
{
    std::vector<Location> nan_loc{{1, std::nan(""), 0, 1.5}};
    try
    {
        validate_campaign({}, nan_loc, {}, 142.0, {}, {2.0}, 25.0);
        FAIL("expected throw");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::ValidationError);
    }

    std::vector<Location> locs{{1, 0, 0, 1.5}};
    std::vector<RxMeta> meta{{LosClass::Los, -3.0}};
    try
    {
        validate_campaign({}, locs, meta, 142.0, {}, {2.0}, 25.0);
        FAIL("expected throw");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::ValidationError);
    }
}

TEST_CASE("error messages start with the code name", "[errors]")
{
    Error e(ErrorCode::ZeroPower, "total power is zero");
    CHECK(std::string(e.what()) == "ZeroPower: total power is zero");
    CHECK(std::string(error_code_name(ErrorCode::NeverCrosses)) == "NeverCrosses");
    CHECK(static_cast<int>(ErrorCode::IoError) == 80);
}
