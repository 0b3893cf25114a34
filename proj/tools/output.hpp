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

#include "json.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace flcli {

using Json = nlohmann::ordered_json;

// Shortest round-trip text; empty for NaN.
std::string csv_num(double v);

// JSON number, or null when not finite.
Json json_num(double v);

class OutputDir {
public:
    explicit OutputDir(std::filesystem::path dir);

    const std::filesystem::path& path() const noexcept { return dir_; }
    // Atomic write of `name` inside the directory; returns `name`.
    std::string write(const std::string& name, const std::string& text) const;
    std::string write_json(const std::string& name, const Json& j) const;

private:
    std::filesystem::path dir_;
};

// Run metadata shared by every verb's JSON.
Json run_meta(const RunConfig& cfg, const std::string& verb);

// Minimal CSV table for reading our own outputs back.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;
    double number(std::size_t row, int col) const;
};
CsvTable read_csv_table(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace flcli
