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

#include "forestlink/forestlink.h"

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace flcli {

struct ParamOverride {
    bool has_bounds = false;
    double lower = 0.0;
    double upper = 0.0;
    bool has_init = false;
    double init = 0.0;
    bool fixed = false;
};

struct RunConfig {
    double carrier_ghz = 1.4;
    double rx_height_m = 1.8;
    double veg_depth_m = 0.0;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string output_dir = "out";
    fl_frame_config frame{};
    fl_peak_config peak{};
    fl_fit_options fit{};
    fl_model_options model_options{};
    bool bhf_m_swap = false;
    double sync_margin = 4.0;
    double snr_db = std::numeric_limits<double>::infinity();
    int lead_in = 700;
    double iq_peak = 0.9;
    // "<model>.<param>" -> override
    std::map<std::string, ParamOverride> params;

    RunConfig();

    // Sets one key; `where`/`line` locate the setting for error records.
    void set(const std::string& key, const std::string& value, const std::string& where = {}, long line = 0);
    void load_file(const std::string& path);

    // Checks cross-key invariants through the library.
    void validate() const;

    // Every key with its effective value, sorted, one "key=value" per line.
    std::string canonical() const;
    // FNV-1a 64 of canonical() without threads and output_dir, 16 hex digits.
    std::string hash() const;

    fl_geometry base_geometry(double elev_deg = 0.0) const;
    // Default spec for `model` with the configured overrides applied.
    fl_model_spec* make_spec(int model, double elev_deg = 0.0) const;
};

struct KeyDoc {
    std::string key;
    std::string help;
};
std::vector<KeyDoc> documented_keys();

std::uint64_t fnv1a64(const std::string& s);

}  // namespace flcli
