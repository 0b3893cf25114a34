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

#include "mpc.hpp"
#include "rng.hpp"
#include "synth.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace forestlink;
using namespace forestlink::mpc;
using ofdm::SampleStream;
using test_support::error_of;

namespace {

TapSet tapset(std::initializer_list<std::pair<double, double>> delay_power)
{
    TapSet t;
    for (auto [d, p] : delay_power)
        t.taps.push_back({d, p, std::sqrt(p)});
    return t;
}

SampleStream impulses(std::initializer_list<std::pair<long, cplx>> taps, double noise_power, std::uint64_t seed)
{
    SampleStream s;
    s.origin = ofdm::Origin::cir;
    s.samples.assign(2048, cplx{});
    Rng rng(seed, Stream::noise);
    const double sd = std::sqrt(noise_power / 2.0);
    for (auto& v : s.samples)
        v = {sd * rng.normal(), sd * rng.normal()};
    for (auto [bin, a] : taps)
        s.samples[static_cast<std::size_t>(bin)] += a;
    return s;
}

PeakSearchConfig sounder_config()
{
    PeakSearchConfig c;
    c.kernel = ofdm::band_kernel(ofdm::FrameConfig{});
    return c;
}

MultipathProfile taps_at(std::initializer_list<std::pair<long, cplx>> taps)
{
    MultipathProfile p;
    bool first = true;
    for (auto [d, a] : taps) {
        Tap t{static_cast<double>(d) * default_ts_s, a, first ? TapClass::los : TapClass::cluster};
        if (first)
            p.los = t;
        else
            p.cluster.push_back(t);
        first = false;
    }
    return p;
}

}  // namespace

TEST_CASE("constructed CIR over a noise floor")
{
    const auto cir = impulses({{100, 1.0}, {140, std::sqrt(0.1)}, {200, std::pow(10.0, -25.0 / 20.0)}}, 1e-4, 3);
    const auto t = detect_peaks(cir, {});
    REQUIRE(t.size() == 2);
    CHECK(t.taps[0].delay_s * default_fs_hz == doctest::Approx(100.0));
    CHECK(t.taps[1].delay_s * default_fs_hz == doctest::Approx(140.0));
}

TEST_CASE("single clean tap")
{
    const auto cir = impulses({{37, cplx(0.0, 2.0)}}, 0.0, 1);
    const auto t = detect_peaks(cir, {});
    REQUIRE(t.size() == 1);
    CHECK(std::lround(t.taps[0].delay_s * default_fs_hz) == 37);
    CHECK(t.taps[0].power == doctest::Approx(4.0));
}

TEST_CASE("minimum spacing merges neighbours")
{
    const auto cir = ofdm::ideal_cir(taps_at({{0, 1.0}, {1, 0.6}}), ofdm::FrameConfig{});
    auto cfg = sounder_config();
    auto t = detect_peaks(cir, cfg);
    REQUIRE(t.size() == 2);
    CHECK(std::abs(t.taps[1].amp / t.taps[0].amp - 0.6) < 1e-9);
    cfg.min_spacing_samples = 2;
    t = detect_peaks(cir, cfg);
    REQUIRE(t.size() == 1);
    CHECK(std::lround(t.taps[0].delay_s * default_fs_hz) == 0);
}

TEST_CASE("no signal")
{
    SampleStream z;
    z.samples.assign(256, cplx{});
    CHECK(error_of([&] { detect_peaks(z, {}); }) == ErrorCode::no_signal);
    PeakSearchConfig bad;
    bad.rel_threshold_db = 3.0;
    CHECK(error_of([&] { detect_peaks(impulses({{3, 1.0}}, 0.0, 1), bad); }) == ErrorCode::config);
}

TEST_CASE("delay statistics")
{
    CHECK(mean_excess_delay(tapset({{0.0, 1.0}})) == 0.0);
    CHECK(rms_ds(tapset({{0.0, 1.0}})) == 0.0);
    CHECK(mean_excess_delay(tapset({{0.0, 1.0}, {100e-9, 1.0}})) == doctest::Approx(50e-9));
    CHECK(rms_ds(tapset({{0.0, 1.0}, {100e-9, 1.0}})) == doctest::Approx(50e-9));
    const auto three = tapset({{0.0, 0.5}, {50e-9, 0.3}, {100e-9, 0.2}});
    CHECK(mean_excess_delay(three) == doctest::Approx(35e-9).epsilon(1e-12));
    CHECK(rms_ds(three) == doctest::Approx(std::sqrt(1525.0) * 1e-9).epsilon(1e-12));
    CHECK(error_of([] { mean_excess_delay(TapSet{}); }) == ErrorCode::arity);
    CHECK(error_of([] { rms_ds(TapSet{}); }) == ErrorCode::arity);
}

TEST_CASE("Rician K")
{
    CHECK(rician_k(tapset({{0.0, 1.0}, {1e-8, 1.0}})) == doctest::Approx(0.0));
    CHECK(rician_k(tapset({{0.0, 0.9}, {1e-8, 0.06}, {2e-8, 0.04}})) == doctest::Approx(9.5424250943932).epsilon(1e-12));
    CHECK(rician_k(tapset({{0.0, 0.3}, {1e-8, 0.7}})) < 0.0);
    CHECK(rician_k(tapset({{0.0, 0.3}, {1e-8, 0.7}}), LosMode::strongest) > 0.0);
    CHECK(error_of([] { rician_k(tapset({{0.0, 1.0}})); }) == ErrorCode::undefined);
}

TEST_CASE("scale and translation invariance")
{
    Rng rng(21, Stream::ensemble);
    for (int trial = 0; trial < 1000; ++trial) {
        TapSet t;
        const int n = 2 + static_cast<int>(rng.below(8));
        double d = 0.0;
        for (int i = 0; i < n; ++i) {
            d += rng.uniform(1e-9, 100e-9);
            t.taps.push_back({d, rng.uniform(0.01, 1.0), {}});
        }
        const double k = rng.uniform(1e-3, 1e3);
        const double shift = rng.uniform(-1e-6, 1e-6);
        TapSet scaled = t, moved = t;
        for (auto& x : scaled.taps)
            x.power *= k;
        for (auto& x : moved.taps)
            x.delay_s += shift;
        REQUIRE(std::abs(rms_ds(scaled) / rms_ds(t) - 1.0) < 1e-12);
        REQUIRE(std::abs(rician_k(scaled) - rician_k(t)) < 1e-12 * std::max(1.0, std::abs(rician_k(t))));
        REQUIRE(std::abs(rms_ds(moved) - rms_ds(t)) < 1e-9 * rms_ds(t) + 1e-21);
        REQUIRE(std::abs(mean_excess_delay(moved) - mean_excess_delay(t) - shift) < 1e-20);
    }
}

TEST_CASE("extraction matches synthesized on-grid profiles")
{
    synth::StatTargets t;
    t.k_db = {7.6, 9.0};
    t.rmsds_ns = {84.2, 33.2};
    const auto cfg = sounder_config();
    const double g0 = cfg.kernel[0].real();
    const ofdm::FrameConfig fc;

    SUBCASE("without scatter taps: exact")
    {
        t.scatter_enabled = false;
        int checked = 0;
        for (std::uint64_t seed = 0; seed < 60; ++seed) {
            MultipathProfile prof;
            if (error_of([&] { prof = synth::synth_forest_profile(t, seed); }))
                continue;
            const auto got = detect_peaks(ofdm::ideal_cir(prof, fc), cfg);
            const auto want = prof.taps();
            REQUIRE(got.size() == want.size());
            for (std::size_t i = 0; i < want.size(); ++i) {
                CHECK(std::lround(got.taps[i].delay_s * default_fs_hz) == std::lround(want[i].delay_s * default_fs_hz));
                CHECK(std::abs(got.taps[i].amp / g0 - want[i].amp) <= 0.01 * std::abs(want[i].amp));
            }
            ++checked;
        }
        CHECK(checked >= 50);
    }

    SUBCASE("with scatter taps: delays of the strong taps")
    {
        // scatter next to a tap at the window edge can push it either way
        int checked = 0, exact = 0;
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            MultipathProfile prof;
            if (error_of([&] { prof = synth::synth_forest_profile(t, seed); }))
                continue;
            const auto got = detect_peaks(ofdm::ideal_cir(prof, fc), cfg);
            std::vector<Tap> want{prof.los};
            want.insert(want.end(), prof.cluster.begin(), prof.cluster.end());
            bool same = got.size() == want.size();
            for (std::size_t i = 0; same && i < want.size(); ++i)
                same = std::lround(got.taps[i].delay_s * default_fs_hz) == std::lround(want[i].delay_s * default_fs_hz);
            exact += same ? 1 : 0;
            ++checked;
        }
        CHECK(exact >= 0.85 * checked);
    }
}

TEST_CASE("loopback through the sounding chain")
{
    const ofdm::FrameConfig fc;
    const auto pre = ofdm::build_preamble(fc, {});
    const auto pilots = ofdm::pilot_sequence(fc, 1);
    const auto frame = ofdm::build_frame(fc, ofdm::qpsk_payload(fc, 1), pilots);
    const auto cap = ofdm::build_capture(fc, pre, frame, 700);
    const auto cfg = sounder_config();
    const double g0 = cfg.kernel[0].real();

    const auto profiles = {
        taps_at({{0, 1.0}, {10, 1.0}}),
        taps_at({{0, 1.0}, {2, cplx(0.0, 0.5)}}),
        taps_at({{0, 0.9}, {3, 0.4}, {5, cplx(-0.3, 0.1)}, {12, 0.2}, {50, 0.15}}),
    };
    for (const auto& prof : profiles) {
        const auto rx = ofdm::apply_channel(cap, prof);
        const auto snd = ofdm::sound_capture(rx, fc, pre, pilots);
        CHECK(snd.sync.offset == 700);
        const auto got = detect_peaks(snd.cir, cfg);
        const auto want = prof.taps();
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
            CHECK(std::lround(got.taps[i].delay_s * default_fs_hz) == std::lround(want[i].delay_s * default_fs_hz));
            CHECK(std::abs(got.taps[i].amp / g0 - want[i].amp) <= 0.01 * std::abs(want[i].amp));
        }
    }

    const auto rx = ofdm::apply_channel(cap, taps_at({{0, 1.0}, {10, 1.0}}));
    const auto e = extract(ofdm::sound_capture(rx, fc, pre, pilots).cir, cfg);
    CHECK(std::abs(e.rms_ds_s - 5.0 * default_ts_s) < 1e-12);
    REQUIRE(e.k_db);
    CHECK(std::abs(*e.k_db) < 1e-6);
}

TEST_CASE("sub-sample separation is not resolved")
{
    const ofdm::FrameConfig fc;
    MultipathProfile p = taps_at({{0, 1.0}});
    p.cluster.push_back({0.4 * default_ts_s, 0.5, TapClass::cluster});
    const auto t = detect_peaks(ofdm::ideal_cir(p, fc), sounder_config());
    CHECK(t.size() == 1);
}
