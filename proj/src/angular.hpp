// SPDX-License-Identifier: Apache-2.0
//
// forestlink - forest radio channel modelling and sounding toolkit
// Copyright 2026 The forestlink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <array>
#include <vector>

namespace forestlink::angular {

inline constexpr int n_sectors = 12;
inline constexpr double sector_step_deg = 30.0;

enum class SweepUnit { dbm, linear };

struct SectorReading {
    double azimuth_deg = 0.0;
    double value = 0.0;  // dBm or linear power, per SectorSweep::unit
};

// One full rotation of a directional antenna, one reading per 30 degree step.
struct SectorSweep {
    std::vector<SectorReading> sectors;
    SweepUnit unit = SweepUnit::dbm;
    double hpbw_deg = 30.0;

    void validate() const;
};

// Linear power per sector, index i centred at 30 i degrees, summing to one.
struct AngularPowerSpectrum {
    std::array<double, n_sectors> power{};

    static double azimuth_deg(int i) noexcept { return sector_step_deg * i; }
    void validate() const;
};

AngularPowerSpectrum aps_from_sweep(const SectorSweep& sweep);

// Power-weighted spread of arrival angles in degrees. Angles are unwrapped
// from each of the 12 sector cuts in turn and the smallest spread is kept.
double rms_asa(const AngularPowerSpectrum& aps);

// Circular power-weighted mean arrival angle in [0, 360).
double avg_asa(const AngularPowerSpectrum& aps);

}  // namespace forestlink::angular
