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

#ifndef SUBTHZ_CORE_UNITS_HPP
#define SUBTHZ_CORE_UNITS_HPP

#include <cmath>

namespace subthz {

constexpr double SPEED_OF_LIGHT_M_S = 299792458.0;
constexpr double PI = 3.141592653589793238462643383279502884;

// dBm <-> mW and dB <-> linear share the same decade mapping.
inline double db_to_linear(double value_db) { return std::pow(10.0, 0.1 * value_db); }
inline double linear_to_db(double value_linear) { return 10.0 * std::log10(value_linear); }

inline double deg_to_rad(double deg) { return deg * (PI / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / PI); }

} // namespace subthz

#endif
