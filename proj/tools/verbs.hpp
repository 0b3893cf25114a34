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

#include "config.hpp"
#include "output.hpp"

#include <functional>
#include <string>
#include <vector>

namespace flcli {

struct FitArgs {
    std::string input;
    std::vector<std::string> models;  // empty: per-link defaults
    bool split = true;                // one fit per env/link/elevation group
};

struct SimulateArgs {
    std::vector<std::string> models;
    std::string scenario;
    double d_min = 10.0;
    double d_max = 640.0;
    int points = 631;
    double elev_deg = 0.0;
    bool elev_set = false;
    std::size_t samples = 0;
    std::string sample_model;  // empty: bhf_m (g2g) or fe2r_m (a2g) with a scenario, else ci
    double sigma_db = -1.0;  // negative: published value for the scenario, else 0
};

struct SoundArgs {
    std::string scenario = "larch-g2g";
    std::string profile;
    double k_db = 0.0;
    double ds_ns = 0.0;
    bool fixed_stats = false;
    bool sv = false;
};

struct ExtractArgs {
    std::vector<std::string> captures;
    std::size_t synth = 0;
    std::string scenario = "larch-g2g";
};

struct AngularArgs {
    std::vector<std::string> sweeps;
};

struct ReportArgs {
    std::string from;
};

void run_fit(const RunConfig& cfg, const FitArgs& a);
void run_simulate(const RunConfig& cfg, const SimulateArgs& a);
void run_sound(const RunConfig& cfg, const SoundArgs& a);
void run_extract(const RunConfig& cfg, const ExtractArgs& a);
void run_angular(const RunConfig& cfg, const AngularArgs& a);
void run_report(const RunConfig& cfg, const ReportArgs& a);

// Helpers shared by the verbs.
int model_index(const std::string& name);
std::string scenario_key(int env, int link, bool has_elev, double elev_deg);
const char* env_name(int env);
const char* link_name(int link);

// Runs body(i) for i in [0, n) on `threads` workers; the first failure is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace flcli
