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

// Exercises the library through its C interface only.

#include "doctest.h"

#include "forestlink/forestlink.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

template <class T, void (*F)(T*)>
struct Deleter {
    void operator()(T* p) const { F(p); }
};
template <class T, void (*F)(T*)>
using Owned = std::unique_ptr<T, Deleter<T, F>>;

using Samples = Owned<fl_samples, fl_samples_free>;
using Spec = Owned<fl_model_spec, fl_model_spec_free>;
using Fit = Owned<fl_fit, fl_fit_free>;
using Profile = Owned<fl_profile, fl_profile_free>;
using Stream = Owned<fl_stream, fl_stream_free>;
using Sounder = Owned<fl_sounder, fl_sounder_free>;
using Sounding = Owned<fl_sounding, fl_sounding_free>;
using Extraction = Owned<fl_extraction, fl_extraction_free>;

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("fl_capi_" + std::to_string(std::rand()))) { fs::create_directories(path); }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

int model(const char* name)
{
    int m = -1;
    REQUIRE(fl_model_from_name(name, &m) == FL_OK);
    return m;
}

}  // namespace

TEST_CASE("status reporting")
{
    CHECK(std::string(fl_status_name(FL_OK)) == "ok");
    CHECK(std::string(fl_status_name(FL_ERR_SYNC_FAILURE)) == "sync_failure");
    CHECK(std::string(fl_status_name(FL_ERR_INVALID_ARGUMENT)) == "invalid_argument");
    CHECK(std::string(fl_version()).size() > 0);

    int m = 0;
    CHECK(fl_model_from_name("nope", &m) == FL_ERR_CONFIG);
    CHECK(std::string(fl_last_error_message()).find("nope") != std::string::npos);
    CHECK(fl_model_from_name("ci", nullptr) == FL_ERR_INVALID_ARGUMENT);
    CHECK(fl_model_from_name("ci", &m) == FL_OK);
    CHECK(std::string(fl_last_error_message()).empty());
    CHECK(fl_samples_size(nullptr) == 0);
    fl_samples_free(nullptr);
}

TEST_CASE("model registry and evaluation")
{
    const int ci = model("ci");
    CHECK(fl_model_count() == 12);
    CHECK(std::string(fl_model_name(ci)) == "ci");
    CHECK(fl_model_param_count(ci) == 1);
    CHECK(std::string(fl_model_param_name(ci, 0)) == "n");
    CHECK(fl_model_param_name(ci, 1) == nullptr);

    fl_geometry g;
    fl_geometry_default(&g);
    g.dist_m = 250.0;
    const double n = 2.7;
    double pl = 0.0;
    REQUIRE(fl_pathloss_eval(ci, &g, &n, 1, nullptr, &pl) == FL_OK);
    CHECK(pl == doctest::Approx(100.11472416959315).epsilon(1e-12));

    CHECK(fl_pathloss_eval(ci, &g, &n, 0, nullptr, &pl) == FL_ERR_ARITY);
    g.dist_m = -1.0;
    CHECK(fl_pathloss_eval(ci, &g, &n, 1, nullptr, &pl) == FL_ERR_DOMAIN);
    CHECK(fl_pathloss_eval(99, &g, &n, 1, nullptr, &pl) == FL_ERR_CONFIG);
}

TEST_CASE("fit a simulated data set")
{
    fl_geometry base;
    fl_geometry_default(&base);
    fl_model_spec* raw_spec = nullptr;
    REQUIRE(fl_model_spec_create(model("ci"), &base, nullptr, &raw_spec) == FL_OK);
    Spec spec(raw_spec);

    const double n_true = 2.7;
    fl_samples* raw = nullptr;
    REQUIRE(fl_simulate_samples(spec.get(), &n_true, 1, 20.0, 600.0, 200, 0.0, 5, &raw) == FL_OK);
    Samples set(raw);
    CHECK(fl_samples_size(set.get()) == 200);

    fl_fit_options opt;
    fl_fit_options_default(&opt);
    fl_fit* raw_fit = nullptr;
    REQUIRE(fl_fit_run(set.get(), spec.get(), &opt, &raw_fit) == FL_OK);
    Fit fit(raw_fit);
    double n = 0.0;
    size_t count = 0;
    REQUIRE(fl_fit_get_params(fit.get(), &n, 1, &count) == FL_OK);
    CHECK(count == 1);
    CHECK(std::abs(n - n_true) < 1e-6);
    fl_fit_summary sum;
    REQUIRE(fl_fit_get_summary(fit.get(), &sum) == FL_OK);
    CHECK(sum.converged == 1);
    CHECK(sum.rmse_db < 1e-6);
    CHECK(sum.n_samples == 200);

    std::vector<double> r(200);
    REQUIRE(fl_fit_residuals(fit.get(), set.get(), r.data(), r.size()) == FL_OK);
    for (double v : r)
        CHECK(std::abs(v) < 1e-6);
    CHECK(fl_fit_residuals(fit.get(), set.get(), r.data(), 10) == FL_ERR_INVALID_ARGUMENT);

    double init = 0, lo = 0, hi = 0;
    int is_free = 0;
    REQUIRE(fl_model_spec_get_param(spec.get(), 0, &init, &lo, &hi, &is_free) == FL_OK);
    CHECK(is_free == 1);
    CHECK(fl_model_spec_set_param(spec.get(), 0, 2.0, 3.0, 1.0, 1) != FL_OK);
    REQUIRE(fl_model_spec_get_param(spec.get(), 0, &init, &lo, &hi, &is_free) == FL_OK);
    CHECK(lo < hi);
}

TEST_CASE("normal fit of a series")
{
    std::vector<double> x;
    for (int i = 0; i < 1000; ++i)
        x.push_back(std::sin(0.37 * i) * 3.0 + 1.0);
    fl_normal nf;
    REQUIRE(fl_fit_normal(x.data(), x.size(), &nf) == FL_OK);
    CHECK(nf.n == 1000);
    CHECK(std::abs(nf.mu - 1.0) < 0.05);
    CHECK(fl_fit_normal(x.data(), 1, &nf) != FL_OK);
}

TEST_CASE("CSV files through the C interface")
{
    TempDir tmp;
    Samples set;
    {
        fl_samples* raw = nullptr;
        REQUIRE(fl_samples_create(&raw) == FL_OK);
        set.reset(raw);
    }
    fl_sample s{120.5, 98.25, 30.0, 1, FL_ENV_BIRCH, FL_LINK_A2G};
    REQUIRE(fl_samples_append(set.get(), &s) == FL_OK);
    s = {300.0, 110.0, 0.0, 0, FL_ENV_LARCH, FL_LINK_G2G};
    REQUIRE(fl_samples_append(set.get(), &s) == FL_OK);
    s.env = 7;
    CHECK(fl_samples_append(set.get(), &s) == FL_ERR_DOMAIN);

    const auto path = tmp.file("pl.csv");
    REQUIRE(fl_samples_write_csv(set.get(), path.c_str()) == FL_OK);
    fl_samples* raw = nullptr;
    REQUIRE(fl_samples_read_csv(path.c_str(), &raw) == FL_OK);
    Samples back(raw);
    REQUIRE(fl_samples_size(back.get()) == 2);
    fl_sample a;
    REQUIRE(fl_samples_get(back.get(), 0, &a) == FL_OK);
    CHECK(a.dist_m == 120.5);
    CHECK(a.has_elev == 1);
    CHECK(a.env == FL_ENV_BIRCH);
    REQUIRE(fl_samples_get(back.get(), 1, &a) == FL_OK);
    CHECK(a.has_elev == 0);
    CHECK(fl_samples_get(back.get(), 2, &a) == FL_ERR_INVALID_ARGUMENT);

    const auto bad = tmp.file("bad.csv");
    std::ofstream(bad) << "dist_m,pl_db\n10,80\nabc,90\n";
    CHECK(fl_samples_read_csv(bad.c_str(), &raw) == FL_ERR_PARSE);
    CHECK(raw == nullptr);
    CHECK(fl_last_error_line() == 3);
    CHECK(std::string(fl_last_error_file()) == bad);
    CHECK(fl_samples_read_csv(tmp.file("missing.csv").c_str(), &raw) == FL_ERR_IO);
}

TEST_CASE("profile synthesis and files")
{
    fl_targets t;
    fl_targets_default(&t);
    fl_profile* raw = nullptr;
    REQUIRE(fl_synth_forest_for(7.9, 73.1e-9, &t, 3, &raw) == FL_OK);
    Profile p(raw);
    double k = 0, ds = 0;
    REQUIRE(fl_profile_analytic(p.get(), &k, &ds) == FL_OK);
    CHECK(k == doctest::Approx(7.9).epsilon(1e-6));
    CHECK(ds == doctest::Approx(73.1e-9).epsilon(1e-6));
    fl_tap first;
    REQUIRE(fl_profile_get(p.get(), 0, &first) == FL_OK);
    CHECK(first.cls == FL_TAP_LOS);

    CHECK(fl_synth_forest_for(30.0, 50e-9, &t, 3, &raw) == FL_ERR_INFEASIBLE);

    TempDir tmp;
    const auto path = tmp.file("prof.csv");
    REQUIRE(fl_profile_write_csv(p.get(), path.c_str()) == FL_OK);
    REQUIRE(fl_profile_read_csv(path.c_str(), &raw) == FL_OK);
    Profile back(raw);
    REQUIRE(fl_profile_size(back.get()) == fl_profile_size(p.get()));
    double k2 = 0, ds2 = 0;
    REQUIRE(fl_profile_analytic(back.get(), &k2, &ds2) == FL_OK);
    CHECK(k2 == doctest::Approx(k).epsilon(1e-12));

    const fl_tap two_los[] = {{0.0, 1.0, 0.0, FL_TAP_LOS}, {1e-7, 0.5, 0.0, FL_TAP_LOS}};
    CHECK(fl_profile_create(two_los, 2, &raw) == FL_ERR_ARITY);

    fl_sv_params sv;
    fl_sv_params_default(&sv);
    REQUIRE(fl_synth_sv(&sv, 4, &raw) == FL_OK);
    Profile svp(raw);
    CHECK(fl_profile_size(svp.get()) == static_cast<size_t>(sv.n_clusters * sv.paths_per_cluster));
}

TEST_CASE("sounding loopback and extraction")
{
    fl_frame_config fc;
    fl_frame_config_default(&fc);
    fl_sounder* raw_s = nullptr;
    REQUIRE(fl_sounder_create(&fc, 1, &raw_s) == FL_OK);
    Sounder snd(raw_s);

    fl_stream* raw = nullptr;
    REQUIRE(fl_sounder_capture(snd.get(), 700, &raw) == FL_OK);
    Stream tx(raw);
    CHECK(fl_stream_size(tx.get()) == static_cast<size_t>(fc.capture_len));

    const double ts = 1.0 / fc.fs_hz;
    const fl_tap taps[] = {{0.0, 1.0, 0.0, FL_TAP_LOS}, {10 * ts, 0.0, 0.5, FL_TAP_CLUSTER}};
    fl_profile* raw_p = nullptr;
    REQUIRE(fl_profile_create(taps, 2, &raw_p) == FL_OK);
    Profile prof(raw_p);

    fl_channel_report rep;
    REQUIRE(fl_channel_apply(tx.get(), prof.get(), 40.0, 9, &raw, &rep) == FL_OK);
    Stream rx(raw);
    CHECK(rep.off_grid_taps == 0);

    // through a hex file and back
    TempDir tmp;
    REQUIRE(fl_stream_normalize(rx.get(), 0.9) == FL_OK);
    const auto hex = tmp.file("cap.hex");
    REQUIRE(fl_stream_write_hex(rx.get(), hex.c_str()) == FL_OK);
    REQUIRE(fl_stream_read_hex(hex.c_str(), fc.fs_hz, &raw) == FL_OK);
    Stream rx2(raw);
    REQUIRE(fl_stream_size(rx2.get()) == fl_stream_size(rx.get()));
    std::vector<double> a(2 * fl_stream_size(rx.get())), b(a.size());
    fl_stream_get(rx.get(), a.data(), a.size() / 2);
    fl_stream_get(rx2.get(), b.data(), b.size() / 2);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    CHECK(worst <= 0.5 / 32768.0 + 1e-15);

    fl_sounding* raw_r = nullptr;
    REQUIRE(fl_sounder_sound(snd.get(), rx2.get(), 4.0, &raw_r) == FL_OK);
    Sounding res(raw_r);
    fl_sync sync;
    REQUIRE(fl_sounding_sync(res.get(), &sync) == FL_OK);
    CHECK(sync.offset == 700);
    size_t n_cfr = 0;
    REQUIRE(fl_sounding_cfr(res.get(), nullptr, nullptr, 0, &n_cfr) == FL_OK);
    CHECK(n_cfr == static_cast<size_t>(fc.n_subcarriers));

    REQUIRE(fl_sounding_cir(res.get(), &raw) == FL_OK);
    Stream cir(raw);
    CHECK(fl_stream_t0(cir.get()) == -fc.timing_advance);

    fl_peak_config pc;
    fl_peak_config_default(&pc);
    fl_extraction* raw_e = nullptr;
    CHECK(fl_extract(cir.get(), &pc, nullptr, &raw_e) == FL_ERR_CONFIG);
    REQUIRE(fl_extract(cir.get(), &pc, snd.get(), &raw_e) == FL_OK);
    Extraction ex(raw_e);
    fl_extraction_stats st;
    REQUIRE(fl_extraction_get_stats(ex.get(), &st) == FL_OK);
    REQUIRE(st.n_taps == 2);
    CHECK(st.has_k == 1);
    CHECK(st.k_db == doctest::Approx(10.0 * std::log10(4.0)).epsilon(0.02));
    fl_detected_tap t1;
    REQUIRE(fl_extraction_get_tap(ex.get(), 1, &t1) == FL_OK);
    CHECK(std::lround(t1.delay_s / ts) == 10);

    pc.use_kernel = 0;
    pc.los_mode = 5;
    CHECK(fl_extract(cir.get(), &pc, nullptr, &raw_e) == FL_ERR_CONFIG);
}

TEST_CASE("sync failure on silence")
{
    fl_frame_config fc;
    fl_frame_config_default(&fc);
    fl_sounder* raw_s = nullptr;
    REQUIRE(fl_sounder_create(&fc, 1, &raw_s) == FL_OK);
    Sounder snd(raw_s);
    std::vector<double> zeros(2 * 40000, 0.0);
    fl_stream* raw = nullptr;
    REQUIRE(fl_stream_create(zeros.data(), 40000, fc.fs_hz, 0, &raw) == FL_OK);
    Stream rx(raw);
    fl_sounding* r = nullptr;
    CHECK(fl_sounder_sound(snd.get(), rx.get(), 4.0, &r) != FL_OK);
    CHECK(r == nullptr);
    CHECK(fl_stream_normalize(rx.get(), 1.0) == FL_ERR_NO_SIGNAL);
}

TEST_CASE("angular statistics")
{
    double az[FL_SECTORS], v[FL_SECTORS], aps[FL_SECTORS];
    for (int i = 0; i < FL_SECTORS; ++i) {
        az[i] = 30.0 * i;
        v[i] = -60.0;
    }
    REQUIRE(fl_aps_from_sweep(az, v, FL_SECTORS, 0, aps) == FL_OK);
    double rms = 0, avg = 0;
    REQUIRE(fl_rms_asa(aps, &rms) == FL_OK);
    CHECK(rms == doctest::Approx(103.56157588603989).epsilon(1e-12));
    CHECK(fl_avg_asa(aps, &avg) == FL_ERR_UNDEFINED);

    v[4] = -40.0;
    REQUIRE(fl_aps_from_sweep(az, v, FL_SECTORS, 0, aps) == FL_OK);
    REQUIRE(fl_avg_asa(aps, &avg) == FL_OK);
    CHECK(avg == doctest::Approx(120.0));
    CHECK(fl_aps_from_sweep(az, v, 11, 0, aps) == FL_ERR_ARITY);
}

TEST_CASE("presets")
{
    CHECK(fl_channel_preset_count() == 10);
    fl_channel_preset c;
    REQUIRE(fl_channel_preset_find("larch-g2g", &c) == FL_OK);
    CHECK(c.ds_mu_ns == 49.5);
    CHECK(c.k_mu_db == 19.8);
    CHECK(fl_channel_preset_find("oak-g2g", &c) == FL_ERR_CONFIG);
    fl_targets t;
    REQUIRE(fl_channel_preset_targets("birch-a2g-30", &t) == FL_OK);
    CHECK(t.ds_mu_ns == 107.6);

    REQUIRE(fl_model_preset_count() == 32);
    bool saw_bhf_m = false;
    for (size_t i = 0; i < fl_model_preset_count(); ++i) {
        fl_model_preset m;
        REQUIRE(fl_model_preset_get(i, 0, &m) == FL_OK);
        CHECK(m.n_params == static_cast<size_t>(fl_model_param_count(m.model)));
        saw_bhf_m = saw_bhf_m || std::string(m.label) == "BHF-M";
    }
    CHECK(saw_bhf_m);
    fl_model_preset m;
    CHECK(fl_model_preset_get(32, 0, &m) != FL_OK);

    double d = 0;
    REQUIRE(fl_gps_distance(0.0, 0.0, 0.0, 1.0, 0.0, 0.0, &d) == FL_OK);
    CHECK(d == doctest::Approx(111195.08023353292).epsilon(1e-12));
}
