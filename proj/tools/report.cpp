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
#include "svg.hpp"
#include "verbs.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>

namespace flcli {

namespace fs = std::filesystem;

namespace {

std::vector<double> column(const CsvTable& t, const std::string& name)
{
    const int c = t.column(name);
    std::vector<double> v;
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        v.push_back(t.number(i, c));
    return v;
}

std::vector<double> finite(const std::vector<double>& v)
{
    std::vector<double> out;
    std::copy_if(v.begin(), v.end(), std::back_inserter(out), [](double x) { return std::isfinite(x); });
    return out;
}

std::string safe_name(std::string s)
{
    for (auto& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
            c = '_';
    return s;
}

class Plots {
public:
    Plots(const fs::path& from, const OutputDir& dir) : from_(from), dir_(dir) {}

    bool has(const std::string& name) const { return fs::is_regular_file(from_ / name); }
    CsvTable table(const std::string& name) const { return read_csv_table(from_ / name); }
    void add(const std::string& name, const std::string& svg) { names_.push_back(dir_.write(name, svg)); }
    const std::vector<std::string>& names() const { return names_; }

private:
    fs::path from_;
    const OutputDir& dir_;
    std::vector<std::string> names_;
};

void curves_plot(Plots& p)
{
    if (!p.has("curves.csv"))
        return;
    const auto t = p.table("curves.csv");
    const auto d = column(t, "dist_m");
    std::vector<svg::Series> series;
    for (std::size_t c = 1; c < t.header.size(); ++c) {
        auto y = column(t, t.header[c]);
        // two-ray nulls would flatten the rest of the plot
        for (auto& v : y)
            if (v >= 299.0)
                v = std::nan("");
        series.push_back({t.header[c], d, y, svg::Mark::line});
    }
    p.add("pathloss_curves.svg", svg::xy_chart({"Path loss versus distance", "distance (m)", "path loss (dB)"}, series));
}

void fit_plots(Plots& p)
{
    if (!p.has("fit_residuals.csv"))
        return;
    const auto t = p.table("fit_residuals.csv");
    const int cs = t.column("scenario"), cm = t.column("model");
    // scenario -> model -> (d, pl, fitted)
    std::map<std::string, std::map<std::string, std::vector<std::array<double, 3>>>> groups;
    std::vector<std::string> model_order;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (cs < 0 || cm < 0 || t.rows[i].size() <= static_cast<std::size_t>(std::max(cs, cm)))
            continue;
        const auto& model = t.rows[i][static_cast<std::size_t>(cm)];
        if (std::find(model_order.begin(), model_order.end(), model) == model_order.end())
            model_order.push_back(model);
        groups[t.rows[i][static_cast<std::size_t>(cs)]][model].push_back(
            {t.number(i, t.column("dist_m")), t.number(i, t.column("pl_db")), t.number(i, t.column("fitted_db"))});
    }
    for (auto& [scenario, models] : groups) {
        std::vector<svg::Series> series;
        bool measured = false;
        for (const auto& name : model_order) {
            auto it = models.find(name);
            if (it == models.end())
                continue;
            auto rows = it->second;
            std::sort(rows.begin(), rows.end());
            if (!measured) {
                svg::Series m{"measured", {}, {}, svg::Mark::points};
                for (const auto& r : rows) {
                    m.x.push_back(r[0]);
                    m.y.push_back(r[1]);
                }
                series.insert(series.begin(), m);
                measured = true;
            }
            svg::Series f{name, {}, {}, svg::Mark::line};
            for (const auto& r : rows) {
                f.x.push_back(r[0]);
                f.y.push_back(r[2]);
            }
            series.push_back(f);
        }
        p.add("fit_" + safe_name(scenario) + ".svg",
              svg::xy_chart({"Fitted models, " + scenario, "distance (m)", "path loss (dB)"}, series));
    }
}

void sound_plots(Plots& p)
{
    if (p.has("cir.csv")) {
        const auto t = p.table("cir.csv");
        const auto d = column(t, "delay_ns");
        const auto pw = column(t, "power_db");
        const double top = pw.empty() ? 0.0 : *std::max_element(pw.begin(), pw.end());
        std::vector<svg::Series> s{{"CIR", {}, {}, svg::Mark::line}};
        for (std::size_t i = 0; i < d.size(); ++i)
            if (d[i] <= 3000.0) {
                s[0].x.push_back(d[i]);
                s[0].y.push_back(pw[i]);
            }
        if (p.has("taps.csv")) {
            const auto taps = p.table("taps.csv");
            s.push_back({"detected taps", column(taps, "delay_ns"), column(taps, "power_db"), svg::Mark::points});
        }
        svg::Axes a{"Channel impulse response", "delay (ns)", "power (dB)", top - 70.0, top + 3.0};
        p.add("cir.svg", svg::xy_chart(a, s));
    }
    if (p.has("cfr.csv")) {
        const auto t = p.table("cfr.csv");
        p.add("cfr.svg", svg::xy_chart({"Channel frequency response", "subcarrier", "magnitude (dB)"},
                                       {{"CFR", column(t, "subcarrier"), column(t, "mag_db"), svg::Mark::line}}));
    }
}

void extract_plots(Plots& p)
{
    if (!p.has("extract.csv"))
        return;
    const auto t = p.table("extract.csv");
    const auto ds = column(t, "rms_ds_ns");
    const auto k = column(t, "k_db");
    p.add("extract_rms_ds.svg", svg::histogram({"RMS delay spread", "RMS-DS (ns)", "captures"}, finite(ds), 30));
    p.add("extract_k.svg", svg::histogram({"Rician K", "K (dB)", "captures"}, finite(k), 30));
    p.add("extract_ds_k.svg",
          svg::xy_chart({"RMS-DS against K", "K (dB)", "RMS-DS (ns)"}, {{"capture", k, ds, svg::Mark::points}}));
}

void angular_plot(Plots& p)
{
    if (!p.has("aps.csv"))
        return;
    const auto t = p.table("aps.csv");
    const int cs = t.column("source");
    std::vector<svg::PolarTrace> traces;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (cs < 0 || t.rows[i].empty())
            continue;
        const auto& src = t.rows[i][static_cast<std::size_t>(cs)];
        if (traces.empty() || traces.back().label != src)
            traces.push_back({src, {}});
        const int sector = static_cast<int>(std::lround(t.number(i, t.column("azimuth_deg")) / 30.0));
        if (sector >= 0 && sector < 12)
            traces.back().power[static_cast<std::size_t>(sector)] = t.number(i, t.column("power"));
    }
    p.add("aps.svg", svg::polar("Angular power spectrum", traces));
}

}  // namespace

void run_report(const RunConfig& cfg, const ReportArgs& a)
{
    const fs::path from = a.from.empty() ? fs::path(cfg.output_dir) : fs::path(a.from);
    if (!fs::is_directory(from))
        throw CliError(FL_ERR_IO, "not a directory", from.string());
    const OutputDir dir(cfg.output_dir);

    Json out;
    out["meta"] = run_meta(cfg, "report");
    out["sections"] = Json::object();
    for (const char* verb : {"fit", "simulate", "sound", "extract", "angular"}) {
        const auto file = from / (std::string(verb) + ".json");
        if (!fs::is_regular_file(file))
            continue;
        try {
            out["sections"][verb] = Json::parse(read_file(file));
        } catch (const Json::parse_error& e) {
            throw CliError(FL_ERR_PARSE, e.what(), file.string());
        }
    }
    if (out["sections"].empty())
        throw CliError(FL_ERR_ARITY, "no verb results to report", from.string());

    Plots plots(from, dir);
    curves_plot(plots);
    fit_plots(plots);
    sound_plots(plots);
    extract_plots(plots);
    angular_plot(plots);
    out["plots"] = plots.names();
    dir.write_json("report.json", out);
}

}  // namespace flcli
