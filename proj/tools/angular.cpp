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

#include "common.hpp"
#include "verbs.hpp"

#include <fmt/format.h>

#include <cmath>
#include <filesystem>

namespace flcli {

void run_angular(const RunConfig& cfg, const AngularArgs& a)
{
    if (a.sweeps.empty())
        throw CliError(FL_ERR_ARITY, "no sweep files given");

    Json out;
    out["meta"] = run_meta(cfg, "angular");
    out["sweeps"] = Json::array();
    std::string summary = "source,rms_asa_deg,avg_asa_deg,peak_azimuth_deg\n";
    std::string aps_csv = "source,azimuth_deg,power\n";

    for (const auto& path : a.sweeps) {
        double az[FL_SECTORS], rssi[FL_SECTORS], aps[FL_SECTORS];
        check(fl_sweep_read_csv(path.c_str(), az, rssi), path);
        check(fl_aps_from_sweep(az, rssi, FL_SECTORS, 0, aps), path);
        double rms = 0.0, avg = std::nan("");
        check(fl_rms_asa(aps, &rms), path);
        // a balanced spectrum has no mean direction; reported as empty
        const auto s = fl_avg_asa(aps, &avg);
        if (s != FL_ERR_UNDEFINED)
            check(s, path);
        int peak = 0;
        for (int i = 1; i < FL_SECTORS; ++i)
            if (aps[i] > aps[peak])
                peak = i;

        const auto name = std::filesystem::path(path).filename().string();
        Json pj = Json::array();
        for (int i = 0; i < FL_SECTORS; ++i) {
            pj.push_back(aps[i]);
            aps_csv += fmt::format("{},{},{}\n", name, 30 * i, csv_num(aps[i]));
        }
        summary += fmt::format("{},{},{},{}\n", name, csv_num(rms), csv_num(avg), 30 * peak);
        out["sweeps"].push_back({{"source", name},
                                 {"aps", pj},
                                 {"rms_asa_deg", rms},
                                 {"avg_asa_deg", json_num(avg)},
                                 {"peak_azimuth_deg", 30 * peak}});
    }

    const OutputDir dir(cfg.output_dir);
    out["artifacts"] = {dir.write("angular.csv", summary), dir.write("aps.csv", aps_csv)};
    dir.write_json("angular.json", out);
}

}  // namespace flcli
