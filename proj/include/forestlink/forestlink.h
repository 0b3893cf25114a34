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

#ifndef FORESTLINK_FORESTLINK_H
#define FORESTLINK_FORESTLINK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FL_API __declspec(dllexport)
#elif defined(__GNUC__)
#define FL_API __attribute__((visibility("default")))
#else
#define FL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* ---- status ----------------------------------------------------------- */

typedef enum fl_status {
    FL_OK = 0,
    FL_ERR_DOMAIN = 1,
    FL_ERR_ARITY = 2,
    FL_ERR_PARSE = 3,
    FL_ERR_INFEASIBLE = 4,
    FL_ERR_SYNC_FAILURE = 5,
    FL_ERR_NO_SIGNAL = 6,
    FL_ERR_UNDEFINED = 7,
    FL_ERR_IO = 8,
    FL_ERR_CONFIG = 9,
    FL_ERR_NOT_CONVERGED = 10,
    FL_ERR_DEGENERATE = 11,
    FL_ERR_INVALID_ARGUMENT = 20, /* null handle or pointer, bad index */
    FL_ERR_INTERNAL = 21
} fl_status;

FL_API const char* fl_version(void);
FL_API const char* fl_status_name(fl_status s);
/* Details of the last failure on the calling thread. */
FL_API const char* fl_last_error_message(void);
FL_API const char* fl_last_error_file(void);
FL_API long fl_last_error_line(void);

/* ---- path-loss models ------------------------------------------------- */

typedef struct fl_geometry {
    double freq_ghz;
    double dist_m;
    double elev_deg;
    double rx_height_m;
    double veg_depth_m;
} fl_geometry;

typedef struct fl_model_options {
    int fe2r_z_ratio;  /* 0: sqrt form, 1: ratio form */
    int bhf_m_literal; /* 0: anchored, 1: literal */
} fl_model_options;

FL_API void fl_geometry_default(fl_geometry* g);
FL_API int fl_model_count(void);
FL_API const char* fl_model_name(int model);
FL_API fl_status fl_model_from_name(const char* name, int* model);
FL_API int fl_model_param_count(int model);
FL_API const char* fl_model_param_name(int model, int index);
FL_API fl_status fl_pathloss_eval(int model, const fl_geometry* g, const double* params, size_t n_params,
                                  const fl_model_options* opt, double* out_db);

/* ---- path-loss sample sets -------------------------------------------- */

typedef enum fl_env { FL_ENV_LARCH = 0, FL_ENV_BIRCH = 1, FL_ENV_OTHER = 2 } fl_env;
typedef enum fl_link { FL_LINK_G2G = 0, FL_LINK_A2G = 1 } fl_link;

typedef struct fl_sample {
    double dist_m;
    double pl_db;
    double elev_deg;
    int has_elev;
    int env;
    int link;
} fl_sample;

typedef struct fl_samples fl_samples;

FL_API fl_status fl_samples_create(fl_samples** out);
FL_API fl_status fl_samples_append(fl_samples* set, const fl_sample* s);
FL_API size_t fl_samples_size(const fl_samples* set);
FL_API fl_status fl_samples_get(const fl_samples* set, size_t index, fl_sample* out);
FL_API fl_status fl_samples_read_csv(const char* path, fl_samples** out);
FL_API fl_status fl_samples_write_csv(const fl_samples* set, const char* path);
FL_API void fl_samples_free(fl_samples* set);

/* ---- fitting ---------------------------------------------------------- */

typedef struct fl_model_spec fl_model_spec;

/* Default bounds, initial values and free mask for a model family. */
FL_API fl_status fl_model_spec_create(int model, const fl_geometry* base, const fl_model_options* opt,
                                      fl_model_spec** out);
FL_API int fl_model_spec_model(const fl_model_spec* spec);
FL_API fl_status fl_model_spec_set_param(fl_model_spec* spec, int index, double init, double lower, double upper,
                                         int is_free);
FL_API fl_status fl_model_spec_get_param(const fl_model_spec* spec, int index, double* init, double* lower,
                                         double* upper, int* is_free);
FL_API void fl_model_spec_free(fl_model_spec* spec);

typedef struct fl_fit_options {
    uint64_t seed;
    int n_starts;
    int max_iter;
    unsigned threads; /* 0: hardware concurrency */
} fl_fit_options;

typedef struct fl_fit_summary {
    double rmse_db;
    size_t n_samples;
    int converged;
    int iterations;
    int best_start;
} fl_fit_summary;

typedef struct fl_fit fl_fit;

FL_API void fl_fit_options_default(fl_fit_options* opt);
FL_API fl_status fl_fit_run(const fl_samples* set, const fl_model_spec* spec, const fl_fit_options* opt,
                            fl_fit** out);
FL_API fl_status fl_fit_get_summary(const fl_fit* fit, fl_fit_summary* out);
/* Copies min(cap, n) parameters; *n receives the full count. */
FL_API fl_status fl_fit_get_params(const fl_fit* fit, double* out, size_t cap, size_t* n);
/* Shadow-fading residuals pl_db - model, one per sample of `set`. */
FL_API fl_status fl_fit_residuals(const fl_fit* fit, const fl_samples* set, double* out, size_t cap);
FL_API void fl_fit_free(fl_fit* fit);

typedef struct fl_normal {
    double mu;
    double sigma;
    double fit_err_pct;
    int fit_err_defined;
    size_t n;
    size_t bins;
} fl_normal;

FL_API fl_status fl_fit_normal(const double* series, size_t n, fl_normal* out);
FL_API fl_status fl_rmse(const fl_model_spec* spec, const double* params, size_t n_params, const fl_samples* set,
                         double* out_db);
/* Distances uniform on [d_min, d_max], model at params, Normal(0, sigma) shadowing. */
FL_API fl_status fl_simulate_samples(const fl_model_spec* spec, const double* params, size_t n_params,
                                     double d_min, double d_max, size_t n, double sigma_db, uint64_t seed,
                                     fl_samples** out);

/* ---- multipath profiles ----------------------------------------------- */

typedef enum fl_tap_class { FL_TAP_LOS = 0, FL_TAP_CLUSTER = 1, FL_TAP_SCATTER = 2 } fl_tap_class;

typedef struct fl_tap {
    double delay_s;
    double re;
    double im;
    int cls;
} fl_tap;

typedef struct fl_targets {
    double k_mu_db;
    double k_sigma_db;
    double ds_mu_ns;
    double ds_sigma_ns;
    double ds_k_correlation;
    int cluster_enabled;
    int scatter_enabled;
    double scatter_fraction;
} fl_targets;

typedef struct fl_sv_params {
    int n_clusters;
    int paths_per_cluster;
    double cluster_rate_hz;
    double ray_rate_hz;
    double cluster_decay_s;
    double ray_decay_s;
} fl_sv_params;

typedef struct fl_profile fl_profile;

FL_API void fl_targets_default(fl_targets* t);
FL_API void fl_sv_params_default(fl_sv_params* p);
FL_API fl_status fl_profile_create(const fl_tap* taps, size_t n, fl_profile** out);
FL_API size_t fl_profile_size(const fl_profile* p);
/* Taps sorted by delay, LoS first. */
FL_API fl_status fl_profile_get(const fl_profile* p, size_t index, fl_tap* out);
FL_API fl_status fl_profile_analytic(const fl_profile* p, double* k_db, double* rmsds_s);
FL_API fl_status fl_profile_read_csv(const char* path, fl_profile** out);
FL_API fl_status fl_profile_write_csv(const fl_profile* p, const char* path);
FL_API void fl_profile_free(fl_profile* p);

FL_API fl_status fl_draw_targets(const fl_targets* t, uint64_t seed, double* k_db, double* rmsds_s);
FL_API fl_status fl_synth_forest(const fl_targets* t, uint64_t seed, fl_profile** out);
FL_API fl_status fl_synth_forest_for(double k_db, double rmsds_s, const fl_targets* t, uint64_t seed,
                                     fl_profile** out);
FL_API fl_status fl_synth_sv(const fl_sv_params* p, uint64_t seed, fl_profile** out);
FL_API fl_status fl_draw_shadowing(double sigma_db, uint64_t seed, double* out_db);

/* ---- sounding --------------------------------------------------------- */

typedef struct fl_frame_config {
    int n_fft;
    int n_subcarriers;
    double scs_hz;
    int n_symbols;
    int cp_long;
    int cp_short;
    double fs_hz;
    int pilot_symbols[2];
    double center_freq_ghz;
    int capture_len;
    int timing_advance;
    int zc_root;
    int zc_length;
} fl_frame_config;

typedef struct fl_channel_report {
    int off_grid_taps;
    double max_snap_error_s;
    double noise_variance;
} fl_channel_report;

typedef struct fl_sync {
    long offset;
    double peak;
    double ratio;
} fl_sync;

typedef struct fl_stream fl_stream;
typedef struct fl_sounder fl_sounder;
typedef struct fl_sounding fl_sounding;

FL_API void fl_frame_config_default(fl_frame_config* c);
/* Frame length in samples and cyclic prefix of symbol `symbol`. */
FL_API fl_status fl_frame_numerology(const fl_frame_config* c, int* frame_len, int symbol, int* cp_len);

/* Interleaved re/im pairs. */
FL_API fl_status fl_stream_create(const double* iq, size_t n, double fs_hz, long t0, fl_stream** out);
FL_API size_t fl_stream_size(const fl_stream* s);
FL_API double fl_stream_fs(const fl_stream* s);
FL_API long fl_stream_t0(const fl_stream* s);
FL_API fl_status fl_stream_get(const fl_stream* s, double* iq, size_t cap_pairs);
/* Scales the stream so the largest |I| or |Q| equals `peak`. */
FL_API fl_status fl_stream_normalize(fl_stream* s, double peak);
FL_API fl_status fl_stream_read_hex(const char* path, double fs_hz, fl_stream** out);
FL_API fl_status fl_stream_write_hex(const fl_stream* s, const char* path);
FL_API void fl_stream_free(fl_stream* s);

/* Preamble, pilots and payload fixed by `seed`. */
FL_API fl_status fl_sounder_create(const fl_frame_config* c, uint64_t seed, fl_sounder** out);
FL_API fl_status fl_sounder_capture(const fl_sounder* s, int lead_in, fl_stream** out);
FL_API fl_status fl_channel_apply(const fl_stream* tx, const fl_profile* p, double snr_db, uint64_t seed,
                                  fl_stream** out, fl_channel_report* report);
FL_API fl_status fl_sounder_sound(const fl_sounder* s, const fl_stream* rx, double sync_margin,
                                  fl_sounding** out);
FL_API fl_status fl_sounder_zc_cir(const fl_sounder* s, const fl_stream* rx, long preamble_offset,
                                   fl_stream** out);
FL_API fl_status fl_sounder_ideal_cir(const fl_sounder* s, const fl_profile* p, fl_stream** out);
FL_API void fl_sounder_free(fl_sounder* s);

FL_API fl_status fl_sounding_sync(const fl_sounding* r, fl_sync* out);
FL_API fl_status fl_sounding_cir(const fl_sounding* r, fl_stream** out);
/* Subcarrier indices and interleaved CFR values; *n receives the count. */
FL_API fl_status fl_sounding_cfr(const fl_sounding* r, int* k, double* iq, size_t cap, size_t* n);
FL_API void fl_sounding_free(fl_sounding* r);

/* ---- multipath extraction --------------------------------------------- */

typedef enum fl_noise_floor_method { FL_FLOOR_TRAILING = 0, FL_FLOOR_PERCENTILE = 1 } fl_noise_floor_method;
typedef enum fl_los_mode { FL_LOS_FIRST = 0, FL_LOS_STRONGEST = 1 } fl_los_mode;

typedef struct fl_peak_config {
    int min_spacing_samples;
    int noise_floor_method;
    double trailing_fraction;
    double noise_percentile;
    double noise_margin_db;
    double rel_threshold_db;
    int los_mode;
    int use_kernel; /* fit the sounder pulse (needs a sounder) */
    int max_atoms;
    double prune_factor;
} fl_peak_config;

typedef struct fl_detected_tap {
    double delay_s;
    double power;
    double re;
    double im;
} fl_detected_tap;

typedef struct fl_extraction_stats {
    size_t n_taps;
    double mean_delay_s;
    double rms_ds_s;
    int has_k;
    double k_db;
} fl_extraction_stats;

typedef struct fl_extraction fl_extraction;

FL_API void fl_peak_config_default(fl_peak_config* c);
FL_API fl_status fl_extract(const fl_stream* cir, const fl_peak_config* c, const fl_sounder* sounder,
                            fl_extraction** out);
FL_API fl_status fl_extraction_get_stats(const fl_extraction* e, fl_extraction_stats* out);
FL_API fl_status fl_extraction_get_tap(const fl_extraction* e, size_t index, fl_detected_tap* out);
FL_API void fl_extraction_free(fl_extraction* e);
FL_API fl_status fl_peak_config_check(const fl_peak_config* c);
FL_API fl_status fl_noise_floor(const fl_stream* cir, const fl_peak_config* c, double* out);

/* ---- angular ---------------------------------------------------------- */

#define FL_SECTORS 12

/* Reads a sweep CSV into azimuth/rssi arrays of FL_SECTORS entries. */
FL_API fl_status fl_sweep_read_csv(const char* path, double* azimuth_deg, double* rssi_dbm);
/* values are dBm unless is_linear; aps[i] is the power at 30 i degrees. */
FL_API fl_status fl_aps_from_sweep(const double* azimuth_deg, const double* values, size_t n, int is_linear,
                                   double* aps);
FL_API fl_status fl_rms_asa(const double* aps, double* out_deg);
FL_API fl_status fl_avg_asa(const double* aps, double* out_deg);

/* ---- presets and helpers ---------------------------------------------- */

typedef struct fl_channel_preset {
    const char* key;
    int env;
    int link; /* -1 for the mixed columns */
    int elev_deg;
    double shadow_mu_db;
    double shadow_sigma_db;
    double ds_mu_ns;
    double ds_sigma_ns;
    double k_mu_db;
    double k_sigma_db;
} fl_channel_preset;

typedef struct fl_model_preset {
    const char* scenario;
    const char* label;
    int model;
    double params[8];
    size_t n_params;
    double sigma_db;
} fl_model_preset;

FL_API size_t fl_channel_preset_count(void);
FL_API fl_status fl_channel_preset_get(size_t index, fl_channel_preset* out);
FL_API fl_status fl_channel_preset_find(const char* key, fl_channel_preset* out);
/* Targets for a scenario with the default copula and scatter settings. */
FL_API fl_status fl_channel_preset_targets(const char* key, fl_targets* out);
FL_API size_t fl_model_preset_count(void);
FL_API fl_status fl_model_preset_get(size_t index, int swap_bhf_m_columns, fl_model_preset* out);
/* Writes through a temporary sibling file and renames it over `path`. */
FL_API fl_status fl_write_file_atomic(const char* path, const char* data, size_t len);
FL_API fl_status fl_gps_distance(double lat1_deg, double lon1_deg, double alt1_m, double lat2_deg,
                                 double lon2_deg, double alt2_m, double* out_m);

#ifdef __cplusplus
}
#endif

#endif /* FORESTLINK_FORESTLINK_H */
