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

#include "output.hpp"

#include "common.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace flcli {

std::string csv_num(double v)
{
    if (std::isnan(v))
        return {};
    return fmt::format("{}", v);
}

Json json_num(double v)
{
    if (!std::isfinite(v))
        return nullptr;
    return v;
}

OutputDir::OutputDir(std::filesystem::path dir) : dir_(std::move(dir))
{
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec)
        throw CliError(FL_ERR_IO, "cannot create output directory: " + ec.message(), dir_.string());
}

std::string OutputDir::write(const std::string& name, const std::string& text) const
{
    const auto p = (dir_ / name).string();
    check(fl_write_file_atomic(p.c_str(), text.data(), text.size()), p);
    return name;
}

std::string OutputDir::write_json(const std::string& name, const Json& j) const
{
    return write(name, j.dump(2) + "\n");
}

Json run_meta(const RunConfig& cfg, const std::string& verb)
{
    Json m;
    m["tool"] = "forestlink";
    m["version"] = fl_version();
    m["verb"] = verb;
    m["seed"] = cfg.seed;
    m["config_hash"] = cfg.hash();
    return m;
}

int CsvTable::column(const std::string& name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return static_cast<int>(i);
    return -1;
}

double CsvTable::number(std::size_t row, int col) const
{
    if (col < 0 || row >= rows.size() || static_cast<std::size_t>(col) >= rows[row].size())
        return std::nan("");
    const auto& s = rows[row][static_cast<std::size_t>(col)];
    if (s.empty())
        return std::nan("");
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        return std::nan("");
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CliError(FL_ERR_IO, "cannot open file", path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CsvTable read_csv_table(const std::filesystem::path& path)
{
    std::istringstream in(read_file(path));
    CsvTable t;
    std::string line;
    auto split = [](const std::string& l) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream ls(l);
        while (std::getline(ls, cell, ','))
            out.push_back(cell);
        if (!l.empty() && l.back() == ',')
            out.emplace_back();
        return out;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        if (t.header.empty())
            t.header = split(line);
        else
            t.rows.push_back(split(line));
    }
    return t;
}

}  // namespace flcli
