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

#include "channel.hpp"
#include "fitting.hpp"

#include <cstdint>

namespace forestlink::synth {

struct NormalSpec {
    double mu = 0.0;
    double sigma = 0.0;
};

struct SvParams {
    int n_clusters = 4;          // L
    int paths_per_cluster = 8;   // M
    double cluster_rate_hz = 1.0 / 60e-9;
    double ray_rate_hz = 1.0 / 10e-9;
    double cluster_decay_s = 60e-9;
    double ray_decay_s = 20e-9;

    void validate() const;
};

struct StatTargets {
    NormalSpec k_db{19.8, 11.3};
    NormalSpec rmsds_ns{49.5, 28.6};
    // Gaussian-copula correlation between the K and RMS-DS draws.
    double ds_k_correlation = -0.5;
    bool cluster_enabled = true;
    bool scatter_enabled = true;
    double scatter_fraction = 0.017;
    double sample_interval_s = default_ts_s;
    fit::Env env = fit::Env::larch;
    fit::Link link = fit::Link::g2g;
    double elev_deg = 0.0;

    void validate() const;
};

// Layout limits of the synthesized LoS cluster.
inline constexpr int max_cluster_taps = 8;
inline constexpr int min_cluster_spacing = 2;
inline constexpr int max_cluster_span = 48;
inline constexpr int scatter_taps = 16;
inline constexpr double scatter_window_s = 1e-6;
inline constexpr double cluster_floor_db = -19.9;

MultipathProfile synth_sv(const SvParams& params, std::uint64_t seed);

// Draws (K, RMS-DS) from the targets and builds a profile realising them.
MultipathProfile synth_forest_profile(const StatTargets& targets, std::uint64_t seed);

// Deterministic part of synth_forest_profile: the profile for one (K, DS)
// pair. Phases come from `seed`. Throws infeasible when no layout fits.
MultipathProfile forest_profile_for(double k_db, double rmsds_s, const StatTargets& targets, std::uint64_t seed);

struct Draw {
    double k_db = 0.0;
    double rmsds_s = 0.0;
};
Draw draw_targets(const StatTargets& targets, std::uint64_t seed);

// K (dB) and RMS-DS (s) computed from LoS + cluster taps.
struct AnalyticStats {
    double k_db = 0.0;
    double rmsds_s = 0.0;
    double mean_delay_s = 0.0;
};
AnalyticStats analytic_stats(const MultipathProfile& p);

double draw_shadowing(double sigma_db, std::uint64_t seed);

}  // namespace forestlink::synth
