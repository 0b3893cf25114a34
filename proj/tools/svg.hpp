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

#include <array>
#include <string>
#include <vector>

namespace flcli::svg {

enum class Mark { line, points };

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    Mark mark = Mark::line;
};

struct Axes {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    // Optional fixed y range; ignored unless lo < hi.
    double y_lo = 0.0;
    double y_hi = 0.0;
};

std::string xy_chart(const Axes& axes, const std::vector<Series>& series);
std::string histogram(const Axes& axes, const std::vector<double>& data, int bins);

struct PolarTrace {
    std::string label;
    std::array<double, 12> power{};  // sector i at 30 i degrees
};
std::string polar(const std::string& title, const std::vector<PolarTrace>& traces);

}  // namespace flcli::svg
