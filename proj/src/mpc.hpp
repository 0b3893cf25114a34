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

#include "ofdm.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace forestlink::mpc {

enum class NoiseFloorMethod { trailing_window, percentile };
enum class LosMode { first, strongest };

const char* noise_floor_method_name(NoiseFloorMethod m) noexcept;
std::optional<NoiseFloorMethod> noise_floor_method_from_name(std::string_view s);
const char* los_mode_name(LosMode m) noexcept;
std::optional<LosMode> los_mode_from_name(std::string_view s);

struct PeakSearchConfig {
    int min_spacing_samples = 1;
    NoiseFloorMethod noise_floor_method = NoiseFloorMethod::trailing_window;
    double trailing_fraction = 0.25;
    double noise_percentile = 50.0;  // percentile method: over all bins
    double noise_margin_db = 6.0;
    double rel_threshold_db = -20.0;  // power, relative to the largest tap
    LosMode los_mode = LosMode::first;
    // Band-limited pulse of the sounder (ofdm::band_kernel). When set, taps
    // are found by sparse fitting of shifted pulses instead of raw maxima.
    std::vector<cplx> kernel;
    int max_atoms = 128;
    // A fitted tap is dropped when removing it raises the residual energy by
    // less than this many noise degrees of freedom.
    double prune_factor = 10.0;

    void validate() const;
};

struct DetectedTap {
    double delay_s = 0.0;
    double power = 0.0;  // |a|^2 in CIR peak units
    cplx amp{};
};

struct TapSet {
    std::vector<DetectedTap> taps;

    std::size_t size() const noexcept { return taps.size(); }
    bool empty() const noexcept { return taps.empty(); }
};

// Power level below which CIR bins count as noise.
double noise_floor(const ofdm::SampleStream& cir, const PeakSearchConfig& cfg);

TapSet detect_peaks(const ofdm::SampleStream& cir, const PeakSearchConfig& cfg);

double mean_excess_delay(const TapSet& taps);
double rms_ds(const TapSet& taps);

// 10 log10(P_los / sum of the rest). LoS is the first tap, or the strongest
// in LosMode::strongest.
double rician_k(const TapSet& taps, LosMode mode = LosMode::first);

struct Extraction {
    TapSet taps;
    double mean_delay_s = 0.0;
    double rms_ds_s = 0.0;
    std::optional<double> k_db;  // empty for a single tap
};

Extraction extract(const ofdm::SampleStream& cir, const PeakSearchConfig& cfg);

}  // namespace forestlink::mpc
