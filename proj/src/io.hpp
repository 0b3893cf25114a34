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

#include "angular.hpp"
#include "channel.hpp"
#include "fitting.hpp"
#include "ofdm.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace forestlink::io {

// IQ hex captures: two 4-digit two's-complement words per line, scaled by
// 1/32768 on read so codes map onto [-1, 1).
inline constexpr double iq_scale = 32768.0;

std::string read_text(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over the target.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);

// Path-loss CSV: header dist_m,pl_db[,elev_deg,env,link].
std::vector<fit::PathLossSample> parse_pathloss_csv(std::string_view text, const std::string& source = "<memory>");
std::string format_pathloss_csv(std::span<const fit::PathLossSample> samples);
std::vector<fit::PathLossSample> read_pathloss_csv(const std::filesystem::path& path);
void write_pathloss_csv(const std::filesystem::path& path, std::span<const fit::PathLossSample> samples);

ofdm::SampleStream parse_iq_hex(std::string_view text, double fs_hz, const std::string& source = "<memory>");
std::string format_iq_hex(std::span<const cplx> samples);
ofdm::SampleStream read_iq_hex(const std::filesystem::path& path, double fs_hz = default_fs_hz);
void write_iq_hex(const std::filesystem::path& path, std::span<const cplx> samples);

// Sweep CSV: header azimuth_deg,rssi_dbm and one row per sector.
angular::SectorSweep parse_sweep_csv(std::string_view text, const std::string& source = "<memory>");
std::string format_sweep_csv(const angular::SectorSweep& sweep);
angular::SectorSweep read_sweep_csv(const std::filesystem::path& path);

// Profile CSV: header delay_ns,amp_re,amp_im,class with exactly one los row.
MultipathProfile parse_profile_csv(std::string_view text, const std::string& source = "<memory>");
std::string format_profile_csv(const MultipathProfile& profile);
MultipathProfile read_profile_csv(const std::filesystem::path& path);
void write_profile_csv(const std::filesystem::path& path, const MultipathProfile& profile);

// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace forestlink::io
