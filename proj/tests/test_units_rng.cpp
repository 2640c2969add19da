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
#include <set>
#include <vector>

#include "core/rng.hpp"
#include "core/units.hpp"

using namespace subthz;

TEST_CASE("dB and linear conversions round-trip", "[units]")
{
    for (double db : {-120.0, -30.0, -3.0, 0.0, 0.5, 10.0, 27.0, 96.0})
    {
        CHECK(linear_to_db(db_to_linear(db)) == Catch::Approx(db).margin(1e-12));
    }
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(db_to_linear(10.0) == Catch::Approx(10.0).epsilon(1e-15));
    CHECK(db_to_linear(-30.0) == Catch::Approx(1e-3).epsilon(1e-15));
    CHECK(linear_to_db(100.0) == Catch::Approx(20.0).margin(1e-13));
}

TEST_CASE("degree and radian conversions round-trip", "[units]")
{
    for (double deg : {-180.0, -45.0, 0.0, 30.0, 90.0, 359.0})
    {
        CHECK(rad_to_deg(deg_to_rad(deg)) == Catch::Approx(deg).margin(1e-12));
    }
    CHECK(deg_to_rad(180.0) == Catch::Approx(PI).margin(1e-15));
}

TEST_CASE("speed of light constant is exact SI", "[units]")
{
    CHECK(SPEED_OF_LIGHT_M_S == 299792458.0);
}

TEST_CASE("SplitMix64 matches reference vectors", "[rng]")
{
    // First three outputs for seed 1234567, from the published reference
    // implementation (Steele, Lea, Flood 2014).
    SplitMix64 g(1234567);
    CHECK(g.next() == UINT64_C(6457827717110365317));
    CHECK(g.next() == UINT64_C(3203168211198807973));
    CHECK(g.next() == UINT64_C(9817491932198370423));
}

TEST_CASE("SplitMix64 is deterministic per seed", "[rng]")
{
    SplitMix64 a(42), b(42), c(43);
    std::vector<std::uint64_t> va, vb, vc;
    for (int i = 0; i < 100; ++i)
    {
        va.push_back(a.next());
        vb.push_back(b.next());
        vc.push_back(c.next());
    }
    CHECK(va == vb);
    CHECK(va != vc);
}

TEST_CASE("uniform01 stays in [0, 1) and fills the range", "[rng]")
{
    SplitMix64 g(7);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
    {
        double u = g.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo < 0.001);
    CHECK(hi > 0.999);
    CHECK(sum / n == Catch::Approx(0.5).margin(0.01));
}

TEST_CASE("derive_seed separates streams and indices", "[rng]")
{
    std::set<std::uint64_t> seeds;
    for (std::uint64_t stream = 0; stream < 4; ++stream)
        for (std::uint64_t index = 0; index < 64; ++index)
            seeds.insert(derive_seed(1, stream, index));
    CHECK(seeds.size() == 4 * 64);

    // Stable across calls, sensitive to every argument.
    CHECK(derive_seed(1, 0, 0) == derive_seed(1, 0, 0));
    CHECK(derive_seed(1, 0, 0) != derive_seed(2, 0, 0));
    CHECK(derive_seed(1, 0, 0) != derive_seed(1, 1, 0));
    CHECK(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
}

TEST_CASE("derived child streams are pairwise decorrelated", "[rng]")
{
    // Correlation between normal streams seeded from adjacent indices must be
    // statistically indistinguishable from zero.
    const int n = 20000;
    NormalSampler a(derive_seed(1, 0, 0));
    NormalSampler b(derive_seed(1, 0, 1));
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (int i = 0; i < n; ++i)
    {
        double x = a.next(), y = b.next();
        sab += x * y;
        saa += x * x;
        sbb += y * y;
    }
    double corr = sab / std::sqrt(saa * sbb);
    CHECK(std::abs(corr) < 0.03);
}

TEST_CASE("NormalSampler moments match a standard normal", "[rng]")
{
    NormalSampler s(99);
    const int n = 200000;
    double m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        double x = s.next();
        m1 += x;
        m2 += x * x;
        m3 += x * x * x;
        m4 += x * x * x * x;
    }
    m1 /= n;
    m2 /= n;
    m3 /= n;
    m4 /= n;
    CHECK(m1 == Catch::Approx(0.0).margin(0.01));
    CHECK(m2 == Catch::Approx(1.0).margin(0.02));
    CHECK(m3 == Catch::Approx(0.0).margin(0.05));
    CHECK(m4 == Catch::Approx(3.0).margin(0.1));
}

TEST_CASE("NormalSampler sequence is deterministic and finite", "[rng]")
{
    NormalSampler a(5), b(5);
    for (int i = 0; i < 1000; ++i)
    {
        double x = a.next();
        REQUIRE(std::isfinite(x));
        REQUIRE(x == b.next());
    }
}
