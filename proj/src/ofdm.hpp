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

#include "channel.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace forestlink::ofdm {

struct FrameConfig {
    int n_fft = 2048;
    int n_subcarriers = 1200;
    double scs_hz = 15000.0;
    int n_symbols = 14;
    int cp_long = 160;
    int cp_short = 144;
    double fs_hz = 30.72e6;
    std::vector<int> pilot_symbols{3, 10};
    double center_freq_ghz = 1.4;
    int capture_len = 40000;
    // FFT windows open this many samples early, inside the cyclic prefix.
    int timing_advance = 64;

    int cp_len(int symbol) const;
    int symbol_start(int symbol) const;  // offset of the CP within the frame
    int frame_len() const;
    int n_data_symbols() const;
    double sample_interval_s() const { return 1.0 / fs_hz; }
    bool is_pilot(int symbol) const;
    // Subcarrier indices k (negative below DC), ascending, DC excluded.
    std::vector<int> active_subcarriers() const;
    int bin_of(int k) const { return (k % n_fft + n_fft) % n_fft; }
    void validate() const;
};

enum class Origin { tx, rx, cir, cfr };

struct SampleStream {
    std::vector<cplx> samples;
    double fs_hz = 30.72e6;
    Origin origin = Origin::tx;
    // Sample index of samples[0] relative to the stream's time reference;
    // a CIR with t0 = -64 has its zero-delay tap in bin 64.
    long t0 = 0;

    std::size_t size() const noexcept { return samples.size(); }
};

struct ZcConfig {
    int root = 25;
    int length = 1201;
    void validate() const;
};

// Per active subcarrier channel estimate, ordered as active_subcarriers().
struct Cfr {
    std::vector<int> subcarriers;
    std::vector<cplx> values;
};

SampleStream zc_sequence(const ZcConfig& cfg);

// Unit-modulus pilot values and QPSK data, fixed by seed.
std::vector<cplx> pilot_sequence(const FrameConfig& cfg, std::uint64_t seed);
std::vector<cplx> qpsk_payload(const FrameConfig& cfg, std::uint64_t seed);

// data: n_data_symbols * n_subcarriers values in symbol order; pilots: n_subcarriers.
SampleStream build_frame(const FrameConfig& cfg, std::span<const cplx> data, std::span<const cplx> pilots);

// Preamble symbol: ZC on subcarriers -L/2..L/2 (DC included), with a long
// cyclic prefix and a short cyclic suffix.
struct Preamble {
    std::vector<cplx> body;  // n_fft samples
    int prefix = 0;
    int suffix = 0;
    std::vector<cplx> samples() const;
    std::size_t size() const { return body.size() + static_cast<std::size_t>(prefix + suffix); }
};
Preamble build_preamble(const FrameConfig& cfg, const ZcConfig& zc);

// lead_in zeros + preamble + frame, zero padded to capture_len.
SampleStream build_capture(const FrameConfig& cfg, const Preamble& pre, const SampleStream& frame, int lead_in);

struct ChannelReport {
    int off_grid_taps = 0;
    double max_snap_error_s = 0.0;
    double noise_variance = 0.0;
};

// rx = sum_taps a * tx(t - tau) + AWGN at the requested SNR (infinity: none).
SampleStream apply_channel(const SampleStream& tx, const MultipathProfile& profile,
                           double snr_db = std::numeric_limits<double>::infinity(), std::uint64_t seed = 1,
                           ChannelReport* report = nullptr);

struct SyncResult {
    long offset = 0;   // index where the preamble (its cyclic prefix) starts
    double peak = 0.0;
    double ratio = 0.0;  // peak over the largest value outside the guard
};

// Correlates against the preamble body; throws sync_failure when the peak is
// not at least `margin` times every value outside +-guard lags.
SyncResult synchronize(const SampleStream& rx, const Preamble& pre, double margin = 4.0);

// LS estimate on the pilot symbols, averaged; rx_frame starts at the frame.
Cfr estimate_cfr(const SampleStream& rx_frame, const FrameConfig& cfg, std::span<const cplx> pilots);

// Zero-filled inverse transform onto the n_fft grid (1/N scaling). Bin i
// holds delay i (circular, t0 = 0).
SampleStream cfr_to_cir(const Cfr& cfr, const FrameConfig& cfg);

// Rotates a circular CIR so that bin 0 holds delay -advance (t0 = -advance).
SampleStream center_cir(const SampleStream& cir, int advance);

// CIR from preamble correlation, normalised so a unit tap gives the same
// peak as a CFR-derived CIR of a flat band; same t0 convention.
SampleStream zc_cir(const SampleStream& rx, const Preamble& pre, long preamble_offset, const FrameConfig& cfg);

// Band-limited pulse g[m] = (1/N) sum_{k active} e^{j2pi k m/N}, m = 0..N-1.
std::vector<cplx> band_kernel(const FrameConfig& cfg);

// Noise-free CIR the sounding chain yields for an on-grid profile (taps
// snapped to the nearest sample), with t0 = -timing_advance.
SampleStream ideal_cir(const MultipathProfile& profile, const FrameConfig& cfg);

// Full chain on a capture: synchronise, slice the frame, estimate, invert.
struct SoundResult {
    SyncResult sync;
    Cfr cfr;
    SampleStream cir;
};
SoundResult sound_capture(const SampleStream& rx, const FrameConfig& cfg, const Preamble& pre,
                          std::span<const cplx> pilots, double sync_margin = 4.0);

// Same chain with the preamble position supplied by the caller.
SoundResult sound_at(const SampleStream& rx, const FrameConfig& cfg, const Preamble& pre,
                     std::span<const cplx> pilots, long preamble_offset);

}  // namespace forestlink::ofdm
