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

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

namespace forestlink {

using cplx = std::complex<double>;

// Sounder numerology shared by several modules.
inline constexpr double default_fs_hz = 30.72e6;
inline constexpr double default_ts_s = 1.0 / default_fs_hz;

enum class TapClass { los, cluster, scatter };

const char* tap_class_name(TapClass c) noexcept;
std::optional<TapClass> tap_class_from_name(std::string_view s);

struct Tap {
    double delay_s = 0.0;
    cplx amp{1.0, 0.0};
    TapClass cls = TapClass::los;
};

// LoS tap plus the in-cluster and low-power scatter components.
struct MultipathProfile {
    Tap los;
    std::vector<Tap> cluster;
    std::vector<Tap> scatter;

    // Every tap sorted by delay; LoS first on ties.
    std::vector<Tap> taps() const;
    double total_power() const;
    double scatter_power() const;
    void validate() const;
};

}  // namespace forestlink
