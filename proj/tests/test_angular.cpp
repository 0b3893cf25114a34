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

#include "doctest.h"

#include "angular.hpp"
#include "rng.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace forestlink;
using namespace forestlink::angular;
using test_support::error_of;

namespace {

SectorSweep sweep_of(const std::array<double, n_sectors>& dbm)
{
    SectorSweep s;
    for (int i = 0; i < n_sectors; ++i)
        s.sectors.push_back({AngularPowerSpectrum::azimuth_deg(i), dbm[static_cast<std::size_t>(i)]});
    return s;
}

AngularPowerSpectrum rotated(const AngularPowerSpectrum& a, int steps)
{
    AngularPowerSpectrum r;
    for (int i = 0; i < n_sectors; ++i)
        r.power[static_cast<std::size_t>((i + steps) % n_sectors)] = a.power[static_cast<std::size_t>(i)];
    return r;
}

AngularPowerSpectrum delta_at(int sector)
{
    AngularPowerSpectrum a;
    a.power[static_cast<std::size_t>(sector)] = 1.0;
    return a;
}

}  // namespace

TEST_CASE("APS from a sweep")
{
    std::array<double, n_sectors> flat;
    flat.fill(-70.0);
    const auto u = aps_from_sweep(sweep_of(flat));
    for (double p : u.power)
        CHECK(p == doctest::Approx(1.0 / 12.0).epsilon(1e-14));

    // readings arrive in any order and are put back on the azimuth grid
    auto s = sweep_of(flat);
    s.sectors[4].value = -50.0;
    std::reverse(s.sectors.begin(), s.sectors.end());
    const auto a = aps_from_sweep(s);
    CHECK(a.power[4] == doctest::Approx(100.0 / 111.0).epsilon(1e-14));

    SectorSweep lin;
    lin.unit = SweepUnit::linear;
    for (int i = 0; i < n_sectors; ++i)
        lin.sectors.push_back({AngularPowerSpectrum::azimuth_deg(i), i == 7 ? 3.0 : 0.0});
    const auto d = aps_from_sweep(lin);
    CHECK(d.power[7] == 1.0);
    CHECK(rms_asa(d) == 0.0);
}

TEST_CASE("sweep validation")
{
    std::array<double, n_sectors> flat;
    flat.fill(-70.0);
    auto s = sweep_of(flat);
    s.sectors.pop_back();
    CHECK(error_of([&] { aps_from_sweep(s); }) == ErrorCode::arity);
    s = sweep_of(flat);
    s.sectors[3].azimuth_deg = 0.0;
    CHECK(error_of([&] { aps_from_sweep(s); }) == ErrorCode::arity);
    s = sweep_of(flat);
    s.sectors[3].azimuth_deg = 95.0;
    CHECK(error_of([&] { aps_from_sweep(s); }) == ErrorCode::domain);
    s = sweep_of(flat);
    s.sectors[0].azimuth_deg = 360.0;
    CHECK_FALSE(error_of([&] { aps_from_sweep(s); }));
    s = sweep_of(flat);
    s.unit = SweepUnit::linear;
    s.sectors[2].value = -1.0;
    CHECK(error_of([&] { aps_from_sweep(s); }) == ErrorCode::domain);
}

TEST_CASE("spread and mean of simple spectra")
{
    CHECK(rms_asa(delta_at(5)) == 0.0);
    CHECK(avg_asa(delta_at(5)) == doctest::Approx(150.0).epsilon(1e-14));

    AngularPowerSpectrum two;
    two.power[4] = 0.5;
    two.power[6] = 0.5;
    CHECK(avg_asa(two) == doctest::Approx(150.0).epsilon(1e-14));
    CHECK(rms_asa(two) == doctest::Approx(30.0).epsilon(1e-14));

    // straddling the 0/360 seam
    AngularPowerSpectrum seam;
    seam.power[11] = 0.5;
    seam.power[1] = 0.5;
    CHECK(std::abs(avg_asa(seam)) < 1e-9);
    CHECK(rms_asa(seam) == doctest::Approx(30.0).epsilon(1e-14));

    AngularPowerSpectrum uniform;
    uniform.power.fill(1.0 / 12.0);
    CHECK(rms_asa(uniform) == doctest::Approx(103.56157588603989).epsilon(1e-12));
    CHECK(error_of([&] { avg_asa(uniform); }) == ErrorCode::undefined);
}

TEST_CASE("single dominant direction with a 20 dB roll-off")
{
    std::array<double, n_sectors> dbm{};
    for (int i = 0; i < n_sectors; ++i) {
        const double az = AngularPowerSpectrum::azimuth_deg(i);
        dbm[static_cast<std::size_t>(i)] = az >= 90.0 ? -60.0 - 20.0 * std::abs(az - 210.0) / 120.0 : -80.0;
    }
    const auto a = aps_from_sweep(sweep_of(dbm));
    CHECK(std::max_element(a.power.begin(), a.power.end()) - a.power.begin() == 7);
    CHECK(avg_asa(a) == doctest::Approx(210.0).epsilon(1e-12));
    CHECK(rms_asa(a) == doctest::Approx(38.351657654775025).epsilon(1e-12));
}

TEST_CASE("rotation properties and the uniform bound")
{
    Rng rng(5, Stream::ensemble);
    double uniform_rms = 0.0;
    {
        AngularPowerSpectrum u;
        u.power.fill(1.0 / 12.0);
        uniform_rms = rms_asa(u);
    }
    for (int trial = 0; trial < 10000; ++trial) {
        AngularPowerSpectrum a;
        double sum = 0.0;
        for (auto& p : a.power) {
            p = trial % 3 == 0 ? std::pow(rng.uniform(), 6.0) : rng.uniform();
            sum += p;
        }
        for (auto& p : a.power)
            p /= sum;
        const double r = rms_asa(a);
        REQUIRE(r <= uniform_rms + 1e-9);
        REQUIRE(r >= 0.0);
        const int k = 1 + trial % 11;
        const auto b = rotated(a, k);
        REQUIRE(std::abs(rms_asa(b) - r) < 1e-9);
        double shift = avg_asa(b) - avg_asa(a) - 30.0 * k;
        shift = std::remainder(shift, 360.0);
        REQUIRE(std::abs(shift) < 1e-9);
    }
}
