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

#include "fitting.hpp"
#include "pathloss.hpp"
#include "synth.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Published parameter sets used as defaults and synthesis targets.
namespace forestlink::presets {

// Scenario keys: "<env>-g2g", "<env>-a2g-<30|60|90>", "<env>-mixed".
struct Scenario {
    std::string key;
    fit::Env env = fit::Env::larch;
    std::optional<fit::Link> link;  // empty for the mixed column
    int elev_deg = 0;
};

struct ChannelStats {
    Scenario scenario;
    synth::NormalSpec shadow_db;
    synth::NormalSpec rmsds_ns;
    synth::NormalSpec k_db;
};

const std::vector<ChannelStats>& channel_stats();
std::optional<ChannelStats> find_channel_stats(std::string_view key);

// Synthesis targets for a scenario (env, link, angle and both normals).
synth::StatTargets targets_for(const ChannelStats& s);

struct ModelPreset {
    std::string scenario;  // same keys as above, g2g and a2g only
    std::string label;     // e.g. "BHF-M", "SUI-B"
    pathloss::Model model;
    std::vector<double> params;  // registry order
    double sigma_db = 0.0;       // published RMSE
};

// Fitted models from the published G2G and A2G tables. With
// swap_bhf_m_columns the paired BHF-M entries are read as n then alpha.
std::vector<ModelPreset> published_models(bool swap_bhf_m_columns = false);
std::optional<ModelPreset> find_model(std::string_view scenario, std::string_view label,
                                      bool swap_bhf_m_columns = false);

// Great-circle distance on a spherical earth combined with the altitude
// difference; approximate at the metre level.
double gps_distance_m(double lat1_deg, double lon1_deg, double alt1_m, double lat2_deg, double lon2_deg,
                      double alt2_m);

}  // namespace forestlink::presets
