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

#include "angular.hpp"

#include "error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numbers>

namespace forestlink::angular {

namespace {

int sector_index(double az)
{
    if (!std::isfinite(az))
        fail(ErrorCode::domain, "sector azimuth must be finite");
    const double q = az / sector_step_deg;
    const double r = std::round(q);
    if (std::abs(q - r) > 1e-6)
        fail(ErrorCode::domain, fmt::format("azimuth {} is not a multiple of {} degrees", az, sector_step_deg));
    const long i = std::lround(r) % n_sectors;
    return static_cast<int>(i < 0 ? i + n_sectors : i);
}

}  // namespace

void SectorSweep::validate() const
{
    if (sectors.size() != static_cast<std::size_t>(n_sectors))
        fail(ErrorCode::arity, fmt::format("a sweep needs {} sectors, got {}", n_sectors, sectors.size()));
    std::array<bool, n_sectors> seen{};
    for (const auto& s : sectors) {
        const int i = sector_index(s.azimuth_deg);
        if (seen[static_cast<std::size_t>(i)])
            fail(ErrorCode::arity, fmt::format("sector at {} degrees appears twice", AngularPowerSpectrum::azimuth_deg(i)));
        seen[static_cast<std::size_t>(i)] = true;
        if (!std::isfinite(s.value))
            fail(ErrorCode::domain, "sector reading must be finite");
        if (unit == SweepUnit::linear && s.value < 0.0)
            fail(ErrorCode::domain, "linear sector power must be non-negative");
    }
    if (!(hpbw_deg > 0.0))
        fail(ErrorCode::domain, "beamwidth must be positive");
}

void AngularPowerSpectrum::validate() const
{
    double sum = 0.0;
    for (double p : power) {
        if (!(p >= 0.0) || !std::isfinite(p))
            fail(ErrorCode::domain, "APS powers must be finite and non-negative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        fail(ErrorCode::domain, fmt::format("APS must sum to one, sums to {}", sum));
}

AngularPowerSpectrum aps_from_sweep(const SectorSweep& sweep)
{
    sweep.validate();
    AngularPowerSpectrum aps;
    for (const auto& s : sweep.sectors) {
        const double lin = sweep.unit == SweepUnit::dbm ? std::pow(10.0, s.value / 10.0) : s.value;
        aps.power[static_cast<std::size_t>(sector_index(s.azimuth_deg))] = lin;
    }
    double sum = 0.0;
    for (double p : aps.power)
        sum += p;
    if (!(sum > 0.0))
        fail(ErrorCode::no_signal, "sweep carries no power");
    for (double& p : aps.power)
        p /= sum;
    return aps;
}

double rms_asa(const AngularPowerSpectrum& aps)
{
    aps.validate();
    double best = std::numeric_limits<double>::infinity();
    for (int cut = 0; cut < n_sectors; ++cut) {
        double mean = 0.0, sq = 0.0;
        for (int k = 0; k < n_sectors; ++k) {
            const double p = aps.power[static_cast<std::size_t>((cut + k) % n_sectors)];
            const double a = sector_step_deg * k;
            mean += p * a;
            sq += p * a * a;
        }
        best = std::min(best, std::sqrt(std::max(sq - mean * mean, 0.0)));
    }
    return best;
}

double avg_asa(const AngularPowerSpectrum& aps)
{
    aps.validate();
    double c = 0.0, s = 0.0;
    for (int i = 0; i < n_sectors; ++i) {
        const double a = AngularPowerSpectrum::azimuth_deg(i) * std::numbers::pi / 180.0;
        c += aps.power[static_cast<std::size_t>(i)] * std::cos(a);
        s += aps.power[static_cast<std::size_t>(i)] * std::sin(a);
    }
    if (std::hypot(c, s) < 1e-12)
        fail(ErrorCode::undefined, "mean arrival angle is undefined for a zero resultant");
    double deg = std::atan2(s, c) * 180.0 / std::numbers::pi;
    if (deg < 0.0)
        deg += 360.0;
    if (deg >= 360.0)
        deg -= 360.0;
    return deg;
}

}  // namespace forestlink::angular
