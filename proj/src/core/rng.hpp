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

#ifndef SUBTHZ_CORE_RNG_HPP
#define SUBTHZ_CORE_RNG_HPP

#include <cmath>
#include <cstdint>

#include "core/units.hpp"

namespace subthz {

// SplitMix64 (Steele, Lea, Flood; public-domain reference constants). Chosen
// over std::mt19937_64 because the output sequence is fixed by this header
// alone, independent of any standard-library implementation, which makes
// simulation output reproducible byte for byte across toolchains.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state;
};

// Decorrelated child seed for (stream, index) under a base seed. Each child
// is obtained by mixing the inputs through one SplitMix64 step each, so seeds
// for different realizations or parameters never share generator state.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index)
{
    SplitMix64 g(base ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
    std::uint64_t a = g.next();
    SplitMix64 h(a + 0xD1B54A32D192ED03ULL * (index + 1));
    return h.next();
}

// Standard normal draws via Box-Muller on SplitMix64. Both transform outputs
// are consumed, in a fixed order, so one object yields a deterministic
// sequence for a given seed.
class NormalSampler {
  public:
    explicit NormalSampler(std::uint64_t seed) : gen(seed) {}

    double next()
    {
        if (have_spare)
        {
            have_spare = false;
            return spare;
        }
        double u1 = 1.0 - gen.uniform01(); // (0, 1], keeps log() finite
        double u2 = gen.uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * PI * u2;
        spare = r * std::sin(a);
        have_spare = true;
        return r * std::cos(a);
    }

  private:
    SplitMix64 gen;
    double spare = 0.0;
    bool have_spare = false;
};

} // namespace subthz

#endif
