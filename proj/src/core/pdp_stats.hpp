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

#ifndef SUBTHZ_CORE_PDP_STATS_HPP
#define SUBTHZ_CORE_PDP_STATS_HPP

#include <span>
#include <vector>

#include "core/types.hpp"

namespace subthz {

// Synthesizes a direction-less profile from directional captures of one
// receiver. The absolute delay axis is split into bins of grid.bin_width_ns
// with edges at integer multiples of the width; each output sample is the
// maximum power observed in that bin across all captures and directions,
// reported at the left bin edge. Taking the maximum (not the sum) avoids
// double-counting energy picked up by overlapping antenna lobes.
//
// Requires at least one capture; all captures must share one rx_id.
// Synthesizing an already synthesized profile returns it unchanged.
OmniPdp synthesize_omni_pdp(std::span<const DirectionalPdp> pdps, const DelayGrid &grid);

// Omnidirectional path loss: transmit power plus both antenna gains minus
// total received power. Directional antenna gains are removed here so the
// result refers to hypothetical isotropic antennas.
double omni_path_loss_db(const OmniPdp &omni, const LinkBudget &budget);

// Power-weighted RMS spread of the delay axis: sqrt(E[t^2] - E[t]^2) with
// weights P_i / sum(P). Sample order does not matter. Throws ZeroPower when
// the profile is empty or total power is not positive.
double rms_delay_spread_ns(std::span<const PdpSample> samples);
double rms_delay_spread_ns(const OmniPdp &omni);

// Collapses directional captures into an azimuth power spectrum: captures
// sharing an RX azimuth are combined max-per-delay-bin (as in omni synthesis)
// and the surviving bin powers are summed per direction. Entries come back
// sorted by azimuth.
std::vector<Mpc> angular_power_spectrum(std::span<const DirectionalPdp> pdps, const DelayGrid &grid);

// Circular power-weighted azimuth spread: sqrt(-2 ln |R|) where R is the
// power-weighted resultant of unit phasors exp(j*azimuth). Invariant under
// global rotation of all azimuths. Throws ResultantZero when |R| vanishes
// (perfectly balanced spectrum) and ZeroPower when total power is <= 0.
double angular_spread_rad(std::span<const Mpc> spectrum);

} // namespace subthz

#endif
