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

namespace flcli {

namespace {

inline constexpr int max_draws = 64;

double power_db(double re, double im)
{
    const double p = re * re + im * im;
    return p > 0.0 ? 10.0 * std::log10(p) : -300.0;
}

std::vector<double> samples_of(const fl_stream* s)
{
    std::vector<double> iq(2 * fl_stream_size(s));
    check(fl_stream_get(s, iq.data(), iq.size() / 2));
    return iq;
}

std::size_t peak_bin(const std::vector<double>& iq)
{
    std::size_t best = 0;
    double bp = -1.0;
    for (std::size_t i = 0; i < iq.size() / 2; ++i) {
        const double p = iq[2 * i] * iq[2 * i] + iq[2 * i + 1] * iq[2 * i + 1];
        if (p > bp) {
            bp = p;
            best = i;
        }
    }
    return best;
}

}  // namespace

void run_sound(const RunConfig& cfg, const SoundArgs& a)
{
    Profile profile;
    int draws = 1;
    std::string source;
    if (!a.profile.empty()) {
        profile = make<Profile>([&](fl_profile** o) { return fl_profile_read_csv(a.profile.c_str(), o); }, a.profile);
        source = "file";
    } else if (a.sv) {
        fl_sv_params sv;
        fl_sv_params_default(&sv);
        profile = make<Profile>([&](fl_profile** o) { return fl_synth_sv(&sv, cfg.seed, o); });
        source = "sv";
    } else {
        fl_targets t;
        check(fl_channel_preset_targets(a.scenario.c_str(), &t));
        if (a.fixed_stats) {
            profile = make<Profile>(
                [&](fl_profile** o) { return fl_synth_forest_for(a.k_db, a.ds_ns * 1e-9, &t, cfg.seed, o); });
            source = "fixed";
        } else {
            // draws beyond the synthesizer's reach are redrawn with derived seeds
            fl_profile* raw = nullptr;
            fl_status s = fl_synth_forest(&t, cfg.seed, &raw);
            while (s == FL_ERR_INFEASIBLE && draws < max_draws) {
                s = fl_synth_forest(&t, item_seed(cfg.seed, static_cast<std::uint64_t>(draws)), &raw);
                ++draws;
            }
            check(s);
            profile.reset(raw);
            source = "scenario";
        }
    }

    const auto sounder = make<Sounder>([&](fl_sounder** o) { return fl_sounder_create(&cfg.frame, cfg.seed, o); });
    const auto tx = make<Stream>([&](fl_stream** o) { return fl_sounder_capture(sounder.get(), cfg.lead_in, o); });
    fl_channel_report rep;
    const auto rx = make<Stream>(
        [&](fl_stream** o) { return fl_channel_apply(tx.get(), profile.get(), cfg.snr_db, cfg.seed, o, &rep); });
    check(fl_stream_normalize(rx.get(), cfg.iq_peak));

    const OutputDir dir(cfg.output_dir);
    const auto hex_path = (dir.path() / "capture.hex").string();
    check(fl_stream_write_hex(rx.get(), hex_path.c_str()), hex_path);
    // sound what a reader of the file would see
    const auto captured =
        make<Stream>([&](fl_stream** o) { return fl_stream_read_hex(hex_path.c_str(), cfg.frame.fs_hz, o); }, hex_path);
    const auto res = make<Sounding>(
        [&](fl_sounding** o) { return fl_sounder_sound(sounder.get(), captured.get(), cfg.sync_margin, o); }, hex_path);
    fl_sync sync;
    check(fl_sounding_sync(res.get(), &sync));
    const auto cir = make<Stream>([&](fl_stream** o) { return fl_sounding_cir(res.get(), o); });
    const auto zc = make<Stream>(
        [&](fl_stream** o) { return fl_sounder_zc_cir(sounder.get(), captured.get(), sync.offset, o); });
    const auto ex = make<Extraction>([&](fl_extraction** o) { return fl_extract(cir.get(), &cfg.peak, sounder.get(), o); });

    const double ts = 1.0 / cfg.frame.fs_hz;
    const long t0 = fl_stream_t0(cir.get());
    const auto cir_iq = samples_of(cir.get());
    std::string cir_csv = "bin,delay_ns,re,im,power_db\n";
    for (std::size_t i = 0; i < cir_iq.size() / 2; ++i)
        cir_csv += fmt::format("{},{},{},{},{}\n", i, csv_num((static_cast<double>(i) + t0) * ts * 1e9),
                               csv_num(cir_iq[2 * i]), csv_num(cir_iq[2 * i + 1]),
                               csv_num(power_db(cir_iq[2 * i], cir_iq[2 * i + 1])));

    std::size_t n_cfr = 0;
    check(fl_sounding_cfr(res.get(), nullptr, nullptr, 0, &n_cfr));
    std::vector<int> k(n_cfr);
    std::vector<double> h(2 * n_cfr);
    check(fl_sounding_cfr(res.get(), k.data(), h.data(), n_cfr, &n_cfr));
    std::string cfr_csv = "subcarrier,freq_offset_hz,re,im,mag_db\n";
    for (std::size_t i = 0; i < n_cfr; ++i)
        cfr_csv += fmt::format("{},{},{},{},{}\n", k[i], csv_num(k[i] * cfg.frame.scs_hz), csv_num(h[2 * i]),
                               csv_num(h[2 * i + 1]), csv_num(power_db(h[2 * i], h[2 * i + 1])));

    fl_extraction_stats st;
    check(fl_extraction_get_stats(ex.get(), &st));
    std::string taps_csv = "delay_ns,power_db,re,im\n";
    Json taps = Json::array();
    for (std::size_t i = 0; i < st.n_taps; ++i) {
        fl_detected_tap t;
        check(fl_extraction_get_tap(ex.get(), i, &t));
        taps_csv += fmt::format("{},{},{},{}\n", csv_num(t.delay_s * 1e9), csv_num(10.0 * std::log10(t.power)),
                                csv_num(t.re), csv_num(t.im));
        taps.push_back({{"delay_ns", t.delay_s * 1e9}, {"power_db", json_num(10.0 * std::log10(t.power))}});
    }

    double k_true = 0.0, ds_true = 0.0;
    const bool has_truth = fl_profile_analytic(profile.get(), &k_true, &ds_true) == FL_OK;

    Json out;
    out["meta"] = run_meta(cfg, "sound");
    out["profile"] = {{"source", source},
                      {"scenario", source == "scenario" || source == "fixed" ? Json(a.scenario) : Json(nullptr)},
                      {"draws", draws},
                      {"n_taps", fl_profile_size(profile.get())},
                      {"k_db", has_truth ? json_num(k_true) : Json(nullptr)},
                      {"rms_ds_ns", has_truth ? json_num(ds_true * 1e9) : Json(nullptr)}};
    out["channel"] = {{"snr_db", json_num(cfg.snr_db)},
                      {"off_grid_taps", rep.off_grid_taps},
                      {"max_snap_error_ns", rep.max_snap_error_s * 1e9},
                      {"noise_variance", rep.noise_variance}};
    const std::size_t zc_peak = peak_bin(samples_of(zc.get()));
    const std::size_t cfr_peak = peak_bin(cir_iq);
    out["sync"] = {{"offset", sync.offset}, {"expected", cfg.lead_in}, {"peak", sync.peak}, {"ratio", sync.ratio}};
    out["cir"] = {{"t0", t0}, {"cfr_peak_bin", cfr_peak}, {"zc_peak_bin", zc_peak}, {"peaks_agree", cfr_peak == zc_peak}};
    out["extraction"] = {{"n_taps", st.n_taps},
                         {"mean_delay_ns", st.mean_delay_s * 1e9},
                         {"rms_ds_ns", st.rms_ds_s * 1e9},
                         {"k_db", st.has_k ? json_num(st.k_db) : Json(nullptr)},
                         {"taps", taps}};
    const auto profile_path = (dir.path() / "profile.csv").string();
    check(fl_profile_write_csv(profile.get(), profile_path.c_str()), profile_path);
    out["artifacts"] = {"capture.hex", "profile.csv", dir.write("cir.csv", cir_csv), dir.write("cfr.csv", cfr_csv),
                        dir.write("taps.csv", taps_csv)};
    dir.write_json("sound.json", out);
}

}  // namespace flcli
