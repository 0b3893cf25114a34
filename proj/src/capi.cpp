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

#include "forestlink/forestlink.h"

#include "angular.hpp"
#include "error.hpp"
#include "fitting.hpp"
#include "io.hpp"
#include "mpc.hpp"
#include "ofdm.hpp"
#include "pathloss.hpp"
#include "presets.hpp"
#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <new>
#include <string>
#include <vector>

using namespace forestlink;

struct fl_samples {
    std::vector<fit::PathLossSample> rows;
};
struct fl_model_spec {
    fit::ModelSpec spec;
};
struct fl_fit {
    fit::FittedModel fitted;
};
struct fl_profile {
    MultipathProfile profile;
};
struct fl_stream {
    ofdm::SampleStream stream;
};
struct fl_sounder {
    ofdm::FrameConfig frame;
    ofdm::Preamble preamble;
    std::vector<cplx> pilots;
    ofdm::SampleStream tx_frame;
};
struct fl_sounding {
    ofdm::SoundResult result;
};
struct fl_extraction {
    mpc::Extraction ex;
};

namespace {

struct LastError {
    std::string message;
    std::string file;
    long line = 0;
};

thread_local LastError last_error;

fl_status set_error(fl_status s, std::string msg, std::string file = {}, long line = 0)
{
    last_error = {std::move(msg), std::move(file), line};
    return s;
}

// Runs `f`, translating exceptions into a status and the thread-local record.
template <class F>
fl_status guard(F&& f) noexcept
{
    try {
        f();
        last_error = {};
        return FL_OK;
    } catch (const Error& e) {
        return set_error(static_cast<fl_status>(e.code()), e.what(), e.file(), e.line());
    } catch (const std::bad_alloc&) {
        return set_error(FL_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(FL_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(FL_ERR_INTERNAL, "unknown failure");
    }
}

// Null handles are reported as invalid arguments rather than domain errors.
#define FL_NEED(...)                                                                    \
    do {                                                                                \
        if (!all_set(__VA_ARGS__))                                                      \
            return set_error(FL_ERR_INVALID_ARGUMENT, "null handle or output pointer"); \
    } while (0)

template <class... P>
bool all_set(P... ptrs)
{
    return ((ptrs != nullptr) && ...);
}

pathloss::Options to_options(const fl_model_options* o)
{
    pathloss::Options opt;
    if (o) {
        opt.fe2r_z = o->fe2r_z_ratio ? pathloss::Fe2rZForm::ratio_form : pathloss::Fe2rZForm::sqrt_form;
        opt.bhf_m = o->bhf_m_literal ? pathloss::BhfMMode::literal : pathloss::BhfMMode::anchored;
    }
    return opt;
}

pathloss::LinkGeometry to_geometry(const fl_geometry& g)
{
    return pathloss::LinkGeometry::from_ghz_deg(g.freq_ghz, g.dist_m, g.elev_deg, g.rx_height_m, g.veg_depth_m);
}

pathloss::Model to_model(int m)
{
    const auto& all = pathloss::all_models();
    if (m < 0 || m >= static_cast<int>(all.size()))
        fail(ErrorCode::config, "unknown model index " + std::to_string(m));
    return all[static_cast<std::size_t>(m)].id;
}

int model_index(pathloss::Model m)
{
    const auto& all = pathloss::all_models();
    for (std::size_t i = 0; i < all.size(); ++i)
        if (all[i].id == m)
            return static_cast<int>(i);
    return -1;
}

fl_sample to_c(const fit::PathLossSample& s)
{
    return {s.dist_m, s.pl_db, s.elev_deg.value_or(0.0), s.elev_deg ? 1 : 0, static_cast<int>(s.env),
            static_cast<int>(s.link)};
}

fit::PathLossSample from_c(const fl_sample& s)
{
    if (s.env < 0 || s.env > 2 || s.link < 0 || s.link > 1)
        fail(ErrorCode::domain, "sample env or link out of range");
    fit::PathLossSample r;
    r.dist_m = s.dist_m;
    r.pl_db = s.pl_db;
    if (s.has_elev)
        r.elev_deg = s.elev_deg;
    r.env = static_cast<fit::Env>(s.env);
    r.link = static_cast<fit::Link>(s.link);
    return r;
}

synth::StatTargets to_targets(const fl_targets& t)
{
    synth::StatTargets r;
    r.k_db = {t.k_mu_db, t.k_sigma_db};
    r.rmsds_ns = {t.ds_mu_ns, t.ds_sigma_ns};
    r.ds_k_correlation = t.ds_k_correlation;
    r.cluster_enabled = t.cluster_enabled != 0;
    r.scatter_enabled = t.scatter_enabled != 0;
    r.scatter_fraction = t.scatter_fraction;
    return r;
}

fl_targets to_c(const synth::StatTargets& t)
{
    return {t.k_db.mu,         t.k_db.sigma,           t.rmsds_ns.mu,        t.rmsds_ns.sigma,
            t.ds_k_correlation, t.cluster_enabled ? 1 : 0, t.scatter_enabled ? 1 : 0, t.scatter_fraction};
}

ofdm::FrameConfig to_frame(const fl_frame_config& c)
{
    ofdm::FrameConfig f;
    f.n_fft = c.n_fft;
    f.n_subcarriers = c.n_subcarriers;
    f.scs_hz = c.scs_hz;
    f.n_symbols = c.n_symbols;
    f.cp_long = c.cp_long;
    f.cp_short = c.cp_short;
    f.fs_hz = c.fs_hz;
    f.pilot_symbols = {c.pilot_symbols[0], c.pilot_symbols[1]};
    f.center_freq_ghz = c.center_freq_ghz;
    f.capture_len = c.capture_len;
    f.timing_advance = c.timing_advance;
    f.validate();
    return f;
}

ofdm::ZcConfig to_zc(const fl_frame_config& c)
{
    ofdm::ZcConfig z{c.zc_root, c.zc_length};
    z.validate();
    return z;
}

mpc::PeakSearchConfig to_peak(const fl_peak_config& c, const fl_sounder* s)
{
    mpc::PeakSearchConfig p;
    p.min_spacing_samples = c.min_spacing_samples;
    if (c.noise_floor_method != FL_FLOOR_TRAILING && c.noise_floor_method != FL_FLOOR_PERCENTILE)
        fail(ErrorCode::config, "unknown noise floor method");
    p.noise_floor_method =
        c.noise_floor_method == FL_FLOOR_TRAILING ? mpc::NoiseFloorMethod::trailing_window : mpc::NoiseFloorMethod::percentile;
    p.trailing_fraction = c.trailing_fraction;
    p.noise_percentile = c.noise_percentile;
    p.noise_margin_db = c.noise_margin_db;
    p.rel_threshold_db = c.rel_threshold_db;
    if (c.los_mode != FL_LOS_FIRST && c.los_mode != FL_LOS_STRONGEST)
        fail(ErrorCode::config, "unknown LoS mode");
    p.los_mode = c.los_mode == FL_LOS_FIRST ? mpc::LosMode::first : mpc::LosMode::strongest;
    p.max_atoms = c.max_atoms;
    p.prune_factor = c.prune_factor;
    p.validate();
    if (c.use_kernel && s)
        p.kernel = ofdm::band_kernel(s->frame);
    return p;
}

std::span<const cplx> as_cplx(const double* iq, std::size_t n)
{
    static_assert(sizeof(cplx) == 2 * sizeof(double));
    return {reinterpret_cast<const cplx*>(iq), n};
}

template <class T, class... A>
fl_status make(T** out, A&&... init)
{
    *out = new T{std::forward<A>(init)...};
    return FL_OK;
}

}  // namespace

// ---- status -------------------------------------------------------------

const char* fl_version(void) { return FORESTLINK_VERSION; }

const char* fl_status_name(fl_status s)
{
    switch (s) {
    case FL_OK: return "ok";
    case FL_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case FL_ERR_INTERNAL: return "internal";
    default:
        if (s >= FL_ERR_DOMAIN && s <= FL_ERR_DEGENERATE)
            return error_code_name(static_cast<ErrorCode>(s));
        return "unknown";
    }
}

const char* fl_last_error_message(void) { return last_error.message.c_str(); }
const char* fl_last_error_file(void) { return last_error.file.c_str(); }
long fl_last_error_line(void) { return last_error.line; }

// ---- path-loss models ---------------------------------------------------

void fl_geometry_default(fl_geometry* g)
{
    if (g)
        *g = {1.4, 1.0, 0.0, 1.8, 0.0};
}

int fl_model_count(void) { return static_cast<int>(pathloss::all_models().size()); }

const char* fl_model_name(int model)
{
    const auto& all = pathloss::all_models();
    if (model < 0 || model >= static_cast<int>(all.size()))
        return nullptr;
    return all[static_cast<std::size_t>(model)].name.data();
}

fl_status fl_model_from_name(const char* name, int* model)
{
    FL_NEED(name, model);
    return guard([&] {
        const auto m = pathloss::model_from_name(name);
        if (!m)
            fail(ErrorCode::config, std::string("unknown model '") + name + "'");
        *model = model_index(*m);
    });
}

int fl_model_param_count(int model)
{
    const auto& all = pathloss::all_models();
    if (model < 0 || model >= static_cast<int>(all.size()))
        return -1;
    return static_cast<int>(all[static_cast<std::size_t>(model)].param_names.size());
}

const char* fl_model_param_name(int model, int index)
{
    const int n = fl_model_param_count(model);
    if (n < 0 || index < 0 || index >= n)
        return nullptr;
    return pathloss::all_models()[static_cast<std::size_t>(model)].param_names[static_cast<std::size_t>(index)].data();
}

fl_status fl_pathloss_eval(int model, const fl_geometry* g, const double* params, size_t n_params,
                           const fl_model_options* opt, double* out_db)
{
    FL_NEED(g, out_db);
    if (n_params > 0 && !params)
        return set_error(FL_ERR_INVALID_ARGUMENT, "null parameter array");
    return guard([&] {
        *out_db = pathloss::evaluate(to_model(model), to_geometry(*g), {params, n_params}, to_options(opt));
    });
}

// ---- samples ------------------------------------------------------------

fl_status fl_samples_create(fl_samples** out)
{
    FL_NEED(out);
    *out = nullptr;
    return guard([&] { make(out); });
}

fl_status fl_samples_append(fl_samples* set, const fl_sample* s)
{
    FL_NEED(set, s);
    return guard([&] { set->rows.push_back(from_c(*s)); });
}

size_t fl_samples_size(const fl_samples* set) { return set ? set->rows.size() : 0; }

fl_status fl_samples_get(const fl_samples* set, size_t index, fl_sample* out)
{
    FL_NEED(set, out);
    if (index >= set->rows.size())
        return set_error(FL_ERR_INVALID_ARGUMENT, "sample index out of range");
    *out = to_c(set->rows[index]);
    return FL_OK;
}

fl_status fl_samples_read_csv(const char* path, fl_samples** out)
{
    FL_NEED(path, out);
    *out = nullptr;
    return guard([&] { make(out, io::read_pathloss_csv(path)); });
}

fl_status fl_samples_write_csv(const fl_samples* set, const char* path)
{
    FL_NEED(set, path);
    return guard([&] { io::write_pathloss_csv(path, set->rows); });
}

void fl_samples_free(fl_samples* set) { delete set; }

// ---- fitting ------------------------------------------------------------

fl_status fl_model_spec_create(int model, const fl_geometry* base, const fl_model_options* opt, fl_model_spec** out)
{
    FL_NEED(out);
    *out = nullptr;
    return guard([&] {
        pathloss::LinkGeometry g;
        if (base)
            g = to_geometry(*base);
        auto spec = fit::default_spec(to_model(model), g);
        spec.options = to_options(opt);
        make(out, std::move(spec));
    });
}

int fl_model_spec_model(const fl_model_spec* spec) { return spec ? model_index(spec->spec.model) : -1; }

fl_status fl_model_spec_set_param(fl_model_spec* spec, int index, double init, double lower, double upper, int is_free)
{
    FL_NEED(spec);
    if (index < 0 || static_cast<std::size_t>(index) >= spec->spec.init.size())
        return set_error(FL_ERR_INVALID_ARGUMENT, "parameter index out of range");
    return guard([&] {
        auto next = spec->spec;
        const auto i = static_cast<std::size_t>(index);
        next.init[i] = init;
        next.lower[i] = lower;
        next.upper[i] = upper;
        next.free[i] = is_free != 0;
        next.validate();
        spec->spec = std::move(next);
    });
}

fl_status fl_model_spec_get_param(const fl_model_spec* spec, int index, double* init, double* lower, double* upper,
                                  int* is_free)
{
    FL_NEED(spec);
    if (index < 0 || static_cast<std::size_t>(index) >= spec->spec.init.size())
        return set_error(FL_ERR_INVALID_ARGUMENT, "parameter index out of range");
    const auto i = static_cast<std::size_t>(index);
    if (init)
        *init = spec->spec.init[i];
    if (lower)
        *lower = spec->spec.lower[i];
    if (upper)
        *upper = spec->spec.upper[i];
    if (is_free)
        *is_free = spec->spec.free[i] ? 1 : 0;
    return FL_OK;
}

void fl_model_spec_free(fl_model_spec* spec) { delete spec; }

void fl_fit_options_default(fl_fit_options* opt)
{
    if (!opt)
        return;
    const fit::FitOptions d;
    *opt = {d.seed, d.n_starts, d.max_iter, d.threads};
}

fl_status fl_fit_run(const fl_samples* set, const fl_model_spec* spec, const fl_fit_options* opt, fl_fit** out)
{
    FL_NEED(set, spec, out);
    *out = nullptr;
    return guard([&] {
        fit::FitOptions o;
        if (opt)
            o = {opt->seed, opt->n_starts, opt->max_iter, opt->threads};
        make(out, fit::fit_model(set->rows, spec->spec, o));
    });
}

fl_status fl_fit_get_summary(const fl_fit* fit, fl_fit_summary* out)
{
    FL_NEED(fit, out);
    const auto& f = fit->fitted;
    *out = {f.rmse_db, f.n_samples, f.converged ? 1 : 0, f.iterations, f.best_start};
    return FL_OK;
}

fl_status fl_fit_get_params(const fl_fit* fit, double* out, size_t cap, size_t* n)
{
    FL_NEED(fit);
    const auto& p = fit->fitted.params;
    if (n)
        *n = p.size();
    if (cap > 0 && !out)
        return set_error(FL_ERR_INVALID_ARGUMENT, "null output array");
    std::copy_n(p.begin(), std::min(cap, p.size()), out);
    return FL_OK;
}

fl_status fl_fit_residuals(const fl_fit* fit, const fl_samples* set, double* out, size_t cap)
{
    FL_NEED(fit, set, out);
    if (cap < set->rows.size())
        return set_error(FL_ERR_INVALID_ARGUMENT, "residual buffer too small");
    return guard([&] {
        const auto r = fit::shadow_residuals(fit->fitted, set->rows);
        std::copy(r.begin(), r.end(), out);
    });
}

void fl_fit_free(fl_fit* fit) { delete fit; }

fl_status fl_fit_normal(const double* series, size_t n, fl_normal* out)
{
    FL_NEED(out);
    if (n > 0 && !series)
        return set_error(FL_ERR_INVALID_ARGUMENT, "null series");
    return guard([&] {
        const auto f = fit::fit_normal({series, n});
        *out = {f.mu, f.sigma, f.fit_err_pct, f.fit_err_defined ? 1 : 0, f.n, f.bins};
    });
}

fl_status fl_rmse(const fl_model_spec* spec, const double* params, size_t n_params, const fl_samples* set,
                  double* out_db)
{
    FL_NEED(spec, set, out_db);
    if (n_params > 0 && !params)
        return set_error(FL_ERR_INVALID_ARGUMENT, "null parameter array");
    return guard([&] { *out_db = fit::rmse({params, n_params}, spec->spec, set->rows); });
}

fl_status fl_simulate_samples(const fl_model_spec* spec, const double* params, size_t n_params, double d_min,
                              double d_max, size_t n, double sigma_db, uint64_t seed, fl_samples** out)
{
    FL_NEED(spec, out);
    *out = nullptr;
    if (n_params > 0 && !params)
        return set_error(FL_ERR_INVALID_ARGUMENT, "null parameter array");
    return guard([&] {
        make(out, fit::simulate_samples(spec->spec, {params, n_params}, d_min, d_max, n, sigma_db, seed));
    });
}

// ---- profiles -----------------------------------------------------------

void fl_targets_default(fl_targets* t)
{
    if (t)
        *t = to_c(synth::StatTargets{});
}

void fl_sv_params_default(fl_sv_params* p)
{
    if (!p)
        return;
    const synth::SvParams d;
    *p = {d.n_clusters, d.paths_per_cluster, d.cluster_rate_hz, d.ray_rate_hz, d.cluster_decay_s, d.ray_decay_s};
}

fl_status fl_profile_create(const fl_tap* taps, size_t n, fl_profile** out)
{
    FL_NEED(taps, out);
    *out = nullptr;
    return guard([&] {
        MultipathProfile p;
        int n_los = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& t = taps[i];
            if (t.cls < FL_TAP_LOS || t.cls > FL_TAP_SCATTER)
                fail(ErrorCode::domain, "unknown tap class");
            const Tap tap{t.delay_s, {t.re, t.im}, static_cast<TapClass>(t.cls)};
            if (tap.cls == TapClass::los) {
                p.los = tap;
                ++n_los;
            } else if (tap.cls == TapClass::cluster) {
                p.cluster.push_back(tap);
            } else {
                p.scatter.push_back(tap);
            }
        }
        if (n_los != 1)
            fail(ErrorCode::arity, "a profile needs exactly one LoS tap");
        p.validate();
        make(out, std::move(p));
    });
}

size_t fl_profile_size(const fl_profile* p) { return p ? 1 + p->profile.cluster.size() + p->profile.scatter.size() : 0; }

fl_status fl_profile_get(const fl_profile* p, size_t index, fl_tap* out)
{
    FL_NEED(p, out);
    const auto taps = p->profile.taps();
    if (index >= taps.size())
        return set_error(FL_ERR_INVALID_ARGUMENT, "tap index out of range");
    const auto& t = taps[index];
    *out = {t.delay_s, t.amp.real(), t.amp.imag(), static_cast<int>(t.cls)};
    return FL_OK;
}

fl_status fl_profile_analytic(const fl_profile* p, double* k_db, double* rmsds_s)
{
    FL_NEED(p);
    return guard([&] {
        const auto s = synth::analytic_stats(p->profile);
        if (k_db)
            *k_db = s.k_db;
        if (rmsds_s)
            *rmsds_s = s.rmsds_s;
    });
}

fl_status fl_profile_read_csv(const char* path, fl_profile** out)
{
    FL_NEED(path, out);
    *out = nullptr;
    return guard([&] { make(out, io::read_profile_csv(path)); });
}

fl_status fl_profile_write_csv(const fl_profile* p, const char* path)
{
    FL_NEED(p, path);
    return guard([&] { io::write_profile_csv(path, p->profile); });
}

void fl_profile_free(fl_profile* p) { delete p; }

fl_status fl_draw_targets(const fl_targets* t, uint64_t seed, double* k_db, double* rmsds_s)
{
    FL_NEED(t, k_db, rmsds_s);
    return guard([&] {
        const auto d = synth::draw_targets(to_targets(*t), seed);
        *k_db = d.k_db;
        *rmsds_s = d.rmsds_s;
    });
}

fl_status fl_synth_forest(const fl_targets* t, uint64_t seed, fl_profile** out)
{
    FL_NEED(t, out);
    *out = nullptr;
    return guard([&] { make(out, synth::synth_forest_profile(to_targets(*t), seed)); });
}

fl_status fl_synth_forest_for(double k_db, double rmsds_s, const fl_targets* t, uint64_t seed, fl_profile** out)
{
    FL_NEED(t, out);
    *out = nullptr;
    return guard([&] { make(out, synth::forest_profile_for(k_db, rmsds_s, to_targets(*t), seed)); });
}

fl_status fl_synth_sv(const fl_sv_params* p, uint64_t seed, fl_profile** out)
{
    FL_NEED(p, out);
    *out = nullptr;
    return guard([&] {
        synth::SvParams sv;
        sv.n_clusters = p->n_clusters;
        sv.paths_per_cluster = p->paths_per_cluster;
        sv.cluster_rate_hz = p->cluster_rate_hz;
        sv.ray_rate_hz = p->ray_rate_hz;
        sv.cluster_decay_s = p->cluster_decay_s;
        sv.ray_decay_s = p->ray_decay_s;
        make(out, synth::synth_sv(sv, seed));
    });
}

fl_status fl_draw_shadowing(double sigma_db, uint64_t seed, double* out_db)
{
    FL_NEED(out_db);
    return guard([&] { *out_db = synth::draw_shadowing(sigma_db, seed); });
}

// ---- sounding -----------------------------------------------------------

void fl_frame_config_default(fl_frame_config* c)
{
    if (!c)
        return;
    const ofdm::FrameConfig f;
    const ofdm::ZcConfig z;
    *c = {f.n_fft,           f.n_subcarriers,       f.scs_hz,       f.n_symbols,      f.cp_long,
          f.cp_short,        f.fs_hz,               {f.pilot_symbols[0], f.pilot_symbols[1]},
          f.center_freq_ghz, f.capture_len,         f.timing_advance, z.root,         z.length};
}

fl_status fl_frame_numerology(const fl_frame_config* c, int* frame_len, int symbol, int* cp_len)
{
    FL_NEED(c);
    return guard([&] {
        const auto f = to_frame(*c);
        if (frame_len)
            *frame_len = f.frame_len();
        if (cp_len)
            *cp_len = f.cp_len(symbol);
    });
}

fl_status fl_stream_create(const double* iq, size_t n, double fs_hz, long t0, fl_stream** out)
{
    FL_NEED(out);
    *out = nullptr;
    if (n > 0 && !iq)
        return set_error(FL_ERR_INVALID_ARGUMENT, "null sample array");
    return guard([&] {
        if (!(fs_hz > 0.0) || !std::isfinite(fs_hz))
            fail(ErrorCode::domain, "sample rate must be positive");
        ofdm::SampleStream s;
        const auto v = as_cplx(iq, n);
        s.samples.assign(v.begin(), v.end());
        s.fs_hz = fs_hz;
        s.t0 = t0;
        s.origin = ofdm::Origin::rx;
        make(out, std::move(s));
    });
}

size_t fl_stream_size(const fl_stream* s) { return s ? s->stream.size() : 0; }
double fl_stream_fs(const fl_stream* s) { return s ? s->stream.fs_hz : 0.0; }
long fl_stream_t0(const fl_stream* s) { return s ? s->stream.t0 : 0; }

fl_status fl_stream_get(const fl_stream* s, double* iq, size_t cap_pairs)
{
    FL_NEED(s, iq);
    const std::size_t n = std::min(cap_pairs, s->stream.size());
    for (std::size_t i = 0; i < n; ++i) {
        iq[2 * i] = s->stream.samples[i].real();
        iq[2 * i + 1] = s->stream.samples[i].imag();
    }
    return FL_OK;
}

fl_status fl_stream_normalize(fl_stream* s, double peak)
{
    FL_NEED(s);
    return guard([&] {
        if (!(peak > 0.0) || !std::isfinite(peak))
            fail(ErrorCode::domain, "normalisation peak must be positive");
        double m = 0.0;
        for (const auto& v : s->stream.samples)
            m = std::max({m, std::abs(v.real()), std::abs(v.imag())});
        if (m == 0.0)
            fail(ErrorCode::no_signal, "stream is all zero");
        for (auto& v : s->stream.samples)
            v *= peak / m;
    });
}

fl_status fl_stream_read_hex(const char* path, double fs_hz, fl_stream** out)
{
    FL_NEED(path, out);
    *out = nullptr;
    return guard([&] { make(out, io::read_iq_hex(path, fs_hz)); });
}

fl_status fl_stream_write_hex(const fl_stream* s, const char* path)
{
    FL_NEED(s, path);
    return guard([&] { io::write_iq_hex(path, s->stream.samples); });
}

void fl_stream_free(fl_stream* s) { delete s; }

fl_status fl_sounder_create(const fl_frame_config* c, uint64_t seed, fl_sounder** out)
{
    FL_NEED(c, out);
    *out = nullptr;
    return guard([&] {
        auto f = to_frame(*c);
        auto pre = ofdm::build_preamble(f, to_zc(*c));
        auto pilots = ofdm::pilot_sequence(f, seed);
        auto frame = ofdm::build_frame(f, ofdm::qpsk_payload(f, seed), pilots);
        make(out, std::move(f), std::move(pre), std::move(pilots), std::move(frame));
    });
}

fl_status fl_sounder_capture(const fl_sounder* s, int lead_in, fl_stream** out)
{
    FL_NEED(s, out);
    *out = nullptr;
    return guard([&] { make(out, ofdm::build_capture(s->frame, s->preamble, s->tx_frame, lead_in)); });
}

fl_status fl_channel_apply(const fl_stream* tx, const fl_profile* p, double snr_db, uint64_t seed, fl_stream** out,
                           fl_channel_report* report)
{
    FL_NEED(tx, p, out);
    *out = nullptr;
    return guard([&] {
        ofdm::ChannelReport r;
        make(out, ofdm::apply_channel(tx->stream, p->profile, snr_db, seed, &r));
        if (report)
            *report = {r.off_grid_taps, r.max_snap_error_s, r.noise_variance};
    });
}

fl_status fl_sounder_sound(const fl_sounder* s, const fl_stream* rx, double sync_margin, fl_sounding** out)
{
    FL_NEED(s, rx, out);
    *out = nullptr;
    return guard([&] {
        make(out, ofdm::sound_capture(rx->stream, s->frame, s->preamble, s->pilots, sync_margin));
    });
}

fl_status fl_sounder_zc_cir(const fl_sounder* s, const fl_stream* rx, long preamble_offset, fl_stream** out)
{
    FL_NEED(s, rx, out);
    *out = nullptr;
    return guard([&] { make(out, ofdm::zc_cir(rx->stream, s->preamble, preamble_offset, s->frame)); });
}

fl_status fl_sounder_ideal_cir(const fl_sounder* s, const fl_profile* p, fl_stream** out)
{
    FL_NEED(s, p, out);
    *out = nullptr;
    return guard([&] { make(out, ofdm::ideal_cir(p->profile, s->frame)); });
}

void fl_sounder_free(fl_sounder* s) { delete s; }

fl_status fl_sounding_sync(const fl_sounding* r, fl_sync* out)
{
    FL_NEED(r, out);
    const auto& y = r->result.sync;
    *out = {y.offset, y.peak, y.ratio};
    return FL_OK;
}

fl_status fl_sounding_cir(const fl_sounding* r, fl_stream** out)
{
    FL_NEED(r, out);
    *out = nullptr;
    return guard([&] { make(out, r->result.cir); });
}

fl_status fl_sounding_cfr(const fl_sounding* r, int* k, double* iq, size_t cap, size_t* n)
{
    FL_NEED(r);
    const auto& c = r->result.cfr;
    if (n)
        *n = c.values.size();
    const std::size_t m = std::min(cap, c.values.size());
    if (m > 0 && (!k || !iq))
        return set_error(FL_ERR_INVALID_ARGUMENT, "null output array");
    for (std::size_t i = 0; i < m; ++i) {
        k[i] = c.subcarriers[i];
        iq[2 * i] = c.values[i].real();
        iq[2 * i + 1] = c.values[i].imag();
    }
    return FL_OK;
}

void fl_sounding_free(fl_sounding* r) { delete r; }

// ---- extraction ---------------------------------------------------------

void fl_peak_config_default(fl_peak_config* c)
{
    if (!c)
        return;
    const mpc::PeakSearchConfig d;
    *c = {d.min_spacing_samples, FL_FLOOR_TRAILING, d.trailing_fraction, d.noise_percentile, d.noise_margin_db,
          d.rel_threshold_db,    FL_LOS_FIRST,      1,                   d.max_atoms,        d.prune_factor};
}

fl_status fl_extract(const fl_stream* cir, const fl_peak_config* c, const fl_sounder* sounder, fl_extraction** out)
{
    FL_NEED(cir, c, out);
    *out = nullptr;
    return guard([&] {
        if (c->use_kernel && !sounder)
            fail(ErrorCode::config, "kernel fitting needs a sounder");
        make(out, mpc::extract(cir->stream, to_peak(*c, sounder)));
    });
}

fl_status fl_extraction_get_stats(const fl_extraction* e, fl_extraction_stats* out)
{
    FL_NEED(e, out);
    const auto& x = e->ex;
    *out = {x.taps.size(), x.mean_delay_s, x.rms_ds_s, x.k_db ? 1 : 0, x.k_db.value_or(0.0)};
    return FL_OK;
}

fl_status fl_extraction_get_tap(const fl_extraction* e, size_t index, fl_detected_tap* out)
{
    FL_NEED(e, out);
    if (index >= e->ex.taps.size())
        return set_error(FL_ERR_INVALID_ARGUMENT, "tap index out of range");
    const auto& t = e->ex.taps.taps[index];
    *out = {t.delay_s, t.power, t.amp.real(), t.amp.imag()};
    return FL_OK;
}

void fl_extraction_free(fl_extraction* e) { delete e; }

fl_status fl_peak_config_check(const fl_peak_config* c)
{
    FL_NEED(c);
    return guard([&] { to_peak(*c, nullptr); });
}

fl_status fl_noise_floor(const fl_stream* cir, const fl_peak_config* c, double* out)
{
    FL_NEED(cir, c, out);
    return guard([&] {
        auto p = to_peak(*c, nullptr);
        *out = mpc::noise_floor(cir->stream, p);
    });
}

// ---- angular ------------------------------------------------------------

fl_status fl_sweep_read_csv(const char* path, double* azimuth_deg, double* rssi_dbm)
{
    FL_NEED(path, azimuth_deg, rssi_dbm);
    return guard([&] {
        const auto sw = io::read_sweep_csv(path);
        for (std::size_t i = 0; i < sw.sectors.size() && i < FL_SECTORS; ++i) {
            azimuth_deg[i] = sw.sectors[i].azimuth_deg;
            rssi_dbm[i] = sw.sectors[i].value;
        }
    });
}

fl_status fl_aps_from_sweep(const double* azimuth_deg, const double* values, size_t n, int is_linear, double* aps)
{
    FL_NEED(azimuth_deg, values, aps);
    return guard([&] {
        angular::SectorSweep sw;
        sw.unit = is_linear ? angular::SweepUnit::linear : angular::SweepUnit::dbm;
        for (std::size_t i = 0; i < n; ++i)
            sw.sectors.push_back({azimuth_deg[i], values[i]});
        const auto a = angular::aps_from_sweep(sw);
        std::copy(a.power.begin(), a.power.end(), aps);
    });
}

namespace {
angular::AngularPowerSpectrum to_aps(const double* aps)
{
    angular::AngularPowerSpectrum a;
    std::copy_n(aps, FL_SECTORS, a.power.begin());
    return a;
}
}  // namespace

fl_status fl_rms_asa(const double* aps, double* out_deg)
{
    FL_NEED(aps, out_deg);
    return guard([&] { *out_deg = angular::rms_asa(to_aps(aps)); });
}

fl_status fl_avg_asa(const double* aps, double* out_deg)
{
    FL_NEED(aps, out_deg);
    return guard([&] { *out_deg = angular::avg_asa(to_aps(aps)); });
}

// ---- presets ------------------------------------------------------------

namespace {

fl_channel_preset to_c(const presets::ChannelStats& s)
{
    return {s.scenario.key.c_str(),
            static_cast<int>(s.scenario.env),
            s.scenario.link ? static_cast<int>(*s.scenario.link) : -1,
            s.scenario.elev_deg,
            s.shadow_db.mu,
            s.shadow_db.sigma,
            s.rmsds_ns.mu,
            s.rmsds_ns.sigma,
            s.k_db.mu,
            s.k_db.sigma};
}

const std::vector<presets::ModelPreset>& model_table(bool swap)
{
    static const auto plain = presets::published_models(false);
    static const auto swapped = presets::published_models(true);
    return swap ? swapped : plain;
}

}  // namespace

size_t fl_channel_preset_count(void) { return presets::channel_stats().size(); }

fl_status fl_channel_preset_get(size_t index, fl_channel_preset* out)
{
    FL_NEED(out);
    const auto& all = presets::channel_stats();
    if (index >= all.size())
        return set_error(FL_ERR_INVALID_ARGUMENT, "preset index out of range");
    *out = to_c(all[index]);
    return FL_OK;
}

fl_status fl_channel_preset_find(const char* key, fl_channel_preset* out)
{
    FL_NEED(key, out);
    return guard([&] {
        for (const auto& s : presets::channel_stats())
            if (s.scenario.key == key) {
                *out = to_c(s);
                return;
            }
        fail(ErrorCode::config, std::string("unknown scenario '") + key + "'");
    });
}

fl_status fl_channel_preset_targets(const char* key, fl_targets* out)
{
    FL_NEED(key, out);
    return guard([&] {
        const auto s = presets::find_channel_stats(key);
        if (!s)
            fail(ErrorCode::config, std::string("unknown scenario '") + key + "'");
        *out = to_c(presets::targets_for(*s));
    });
}

size_t fl_model_preset_count(void) { return model_table(false).size(); }

fl_status fl_model_preset_get(size_t index, int swap_bhf_m_columns, fl_model_preset* out)
{
    FL_NEED(out);
    return guard([&] {
        const auto& all = model_table(swap_bhf_m_columns != 0);
        if (index >= all.size())
            throw Error(ErrorCode::arity, "model preset index out of range");
        const auto& m = all[index];
        fl_model_preset r{m.scenario.c_str(), m.label.c_str(), model_index(m.model), {}, m.params.size(), m.sigma_db};
        std::copy_n(m.params.begin(), std::min<std::size_t>(m.params.size(), 8), r.params);
        *out = r;
    });
}

fl_status fl_write_file_atomic(const char* path, const char* data, size_t len)
{
    FL_NEED(path);
    if (len > 0 && !data)
        return set_error(FL_ERR_INVALID_ARGUMENT, "null data");
    return guard([&] { io::write_text_atomic(path, {data, len}); });
}

fl_status fl_gps_distance(double lat1_deg, double lon1_deg, double alt1_m, double lat2_deg, double lon2_deg,
                          double alt2_m, double* out_m)
{
    FL_NEED(out_m);
    return guard([&] { *out_m = presets::gps_distance_m(lat1_deg, lon1_deg, alt1_m, lat2_deg, lon2_deg, alt2_m); });
}
