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

#include <algorithm>
#include <cmath>
#include <filesystem>

namespace flcli {

namespace {

struct Row {
    std::string source;
    std::string status = "ok";
    long sync_offset = 0;
    std::size_t n_taps = 0;
    double mean_ns = std::nan("");
    double ds_ns = std::nan("");
    double k_db = std::nan("");
    double target_k_db = std::nan("");
    double target_ds_ns = std::nan("");
};

void measure(const fl_sounder* snd, const fl_stream* rx, const RunConfig& cfg, Row& row, const std::string& file)
{
    const auto res =
        make<Sounding>([&](fl_sounding** o) { return fl_sounder_sound(snd, rx, cfg.sync_margin, o); }, file);
    fl_sync sync;
    check(fl_sounding_sync(res.get(), &sync));
    const auto cir = make<Stream>([&](fl_stream** o) { return fl_sounding_cir(res.get(), o); });
    const auto ex = make<Extraction>([&](fl_extraction** o) { return fl_extract(cir.get(), &cfg.peak, snd, o); }, file);
    fl_extraction_stats st;
    check(fl_extraction_get_stats(ex.get(), &st));
    row.sync_offset = sync.offset;
    row.n_taps = st.n_taps;
    row.mean_ns = st.mean_delay_s * 1e9;
    row.ds_ns = st.rms_ds_s * 1e9;
    if (st.has_k)
        row.k_db = st.k_db;
}

std::vector<std::string> expand_inputs(const std::vector<std::string>& in)
{
    std::vector<std::string> out;
    for (const auto& p : in) {
        std::error_code ec;
        if (std::filesystem::is_directory(p, ec)) {
            std::vector<std::string> found;
            for (const auto& e : std::filesystem::directory_iterator(p))
                if (e.is_regular_file() && e.path().extension() == ".hex")
                    found.push_back(e.path().string());
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(p);
        }
    }
    return out;
}

Json normal_json(const std::vector<double>& x)
{
    fl_normal nf;
    if (x.size() < 2 || fl_fit_normal(x.data(), x.size(), &nf) != FL_OK)
        return {{"n", x.size()}, {"mu", nullptr}, {"sigma", nullptr}, {"fit_err_pct", nullptr}};
    return {{"n", nf.n},
            {"mu", nf.mu},
            {"sigma", nf.sigma},
            {"fit_err_pct", nf.fit_err_defined ? json_num(nf.fit_err_pct) : Json(nullptr)}};
}

Json pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    if (n < 3)
        return nullptr;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        return nullptr;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

void run_extract(const RunConfig& cfg, const ExtractArgs& a)
{
    const auto files = expand_inputs(a.captures);
    if (files.empty() && a.synth == 0)
        throw CliError(FL_ERR_ARITY, "no captures given (use --captures or --synth)");
    if (!files.empty() && a.synth > 0)
        throw CliError(status_usage, "--captures and --synth are exclusive");

    const auto sounder = make<Sounder>([&](fl_sounder** o) { return fl_sounder_create(&cfg.frame, cfg.seed, o); });
    std::vector<Row> rows(files.empty() ? a.synth : files.size());
    Json scenario = nullptr;

    if (!files.empty()) {
        parallel_for(files.size(), cfg.threads, [&](std::size_t i) {
            auto& row = rows[i];
            row.source = std::filesystem::path(files[i]).filename().string();
            const auto rx = make<Stream>(
                [&](fl_stream** o) { return fl_stream_read_hex(files[i].c_str(), cfg.frame.fs_hz, o); }, files[i]);
            measure(sounder.get(), rx.get(), cfg, row, files[i]);
        });
    } else {
        fl_targets t;
        check(fl_channel_preset_targets(a.scenario.c_str(), &t));
        scenario = {{"key", a.scenario},
                    {"rms_ds_ns", {{"mu", t.ds_mu_ns}, {"sigma", t.ds_sigma_ns}}},
                    {"k_db", {{"mu", t.k_mu_db}, {"sigma", t.k_sigma_db}}}};
        const auto tx = make<Stream>([&](fl_stream** o) { return fl_sounder_capture(sounder.get(), cfg.lead_in, o); });
        parallel_for(a.synth, cfg.threads, [&](std::size_t i) {
            auto& row = rows[i];
            row.source = fmt::format("synth-{}", i);
            const auto seed = item_seed(cfg.seed, i);
            check(fl_draw_targets(&t, seed, &row.target_k_db, &row.target_ds_ns));
            row.target_ds_ns *= 1e9;
            fl_profile* raw = nullptr;
            const auto s = fl_synth_forest(&t, seed, &raw);
            if (s == FL_ERR_INFEASIBLE) {
                row.status = "infeasible";
                return;
            }
            check(s);
            const Profile prof(raw);
            const auto rx = make<Stream>(
                [&](fl_stream** o) { return fl_channel_apply(tx.get(), prof.get(), cfg.snr_db, seed, o, nullptr); });
            measure(sounder.get(), rx.get(), cfg, row, {});
        });
    }

    std::vector<double> ds, k, ds_k, k_k;
    std::size_t skipped = 0;
    std::string csv = "source,status,sync_offset,n_taps,mean_delay_ns,rms_ds_ns,k_db,target_rms_ds_ns,target_k_db\n";
    for (const auto& r : rows) {
        csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.source, r.status, r.sync_offset, r.n_taps,
                           csv_num(r.mean_ns), csv_num(r.ds_ns), csv_num(r.k_db), csv_num(r.target_ds_ns),
                           csv_num(r.target_k_db));
        if (r.status != "ok") {
            ++skipped;
            continue;
        }
        ds.push_back(r.ds_ns);
        if (!std::isnan(r.k_db)) {
            k.push_back(r.k_db);
            ds_k.push_back(r.ds_ns);
            k_k.push_back(r.k_db);
        }
    }

    const OutputDir dir(cfg.output_dir);
    Json out;
    out["meta"] = run_meta(cfg, "extract");
    out["scenario"] = scenario;
    out["n_captures"] = rows.size();
    out["n_extracted"] = ds.size();
    out["n_infeasible"] = skipped;
    out["stats"] = {{"rms_ds_ns", normal_json(ds)}, {"k_db", normal_json(k)}, {"pearson_ds_k", pearson(ds_k, k_k)}};
    out["artifacts"] = {dir.write("extract.csv", csv)};
    dir.write_json("extract.json", out);
}

}  // namespace flcli
