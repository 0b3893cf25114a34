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

#include "ofdm.hpp"

#include "error.hpp"
#include "fft.hpp"
#include "rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace forestlink::ofdm {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

cplx unit_phasor(double turns)
{
    return std::polar(1.0, two_pi * turns);
}

void check_finite(const SampleStream& s, const char* what)
{
    for (const auto& v : s.samples)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            fail(ErrorCode::domain, fmt::format("{}: non-finite sample", what));
}

}  // namespace

int FrameConfig::cp_len(int symbol) const
{
    // Long prefix on the first symbol of each slot.
    return symbol % (n_symbols / 2) == 0 ? cp_long : cp_short;
}

int FrameConfig::symbol_start(int symbol) const
{
    int pos = 0;
    for (int s = 0; s < symbol; ++s)
        pos += cp_len(s) + n_fft;
    return pos;
}

int FrameConfig::frame_len() const
{
    return symbol_start(n_symbols);
}

int FrameConfig::n_data_symbols() const
{
    int n = 0;
    for (int s = 0; s < n_symbols; ++s)
        n += is_pilot(s) ? 0 : 1;
    return n;
}

bool FrameConfig::is_pilot(int symbol) const
{
    return std::find(pilot_symbols.begin(), pilot_symbols.end(), symbol) != pilot_symbols.end();
}

std::vector<int> FrameConfig::active_subcarriers() const
{
    std::vector<int> k;
    k.reserve(static_cast<std::size_t>(n_subcarriers));
    const int half = n_subcarriers / 2;
    for (int i = -half; i <= half; ++i)
        if (i != 0)
            k.push_back(i);
    return k;
}

void FrameConfig::validate() const
{
    if (n_fft < 16)
        fail(ErrorCode::config, "n_fft must be at least 16");
    if (n_subcarriers <= 0 || n_subcarriers % 2 != 0 || n_subcarriers >= n_fft)
        fail(ErrorCode::config, "n_subcarriers must be even, positive and below n_fft");
    if (n_symbols < 2 || n_symbols % 2 != 0)
        fail(ErrorCode::config, "n_symbols must be an even count");
    if (cp_long < 0 || cp_short < 0 || cp_long > n_fft || cp_short > n_fft)
        fail(ErrorCode::config, "cyclic prefix lengths out of range");
    if (!(fs_hz > 0.0) || !std::isfinite(fs_hz))
        fail(ErrorCode::config, "fs_hz must be positive");
    if (!(scs_hz > 0.0))
        fail(ErrorCode::config, "scs_hz must be positive");
    if (pilot_symbols.empty())
        fail(ErrorCode::config, "at least one pilot symbol is required");
    for (int s : pilot_symbols)
        if (s < 0 || s >= n_symbols)
            fail(ErrorCode::config, fmt::format("pilot symbol {} outside the frame", s));
    if (timing_advance < 0 || timing_advance > std::min(cp_long, cp_short))
        fail(ErrorCode::config, "timing_advance must fit inside the shortest cyclic prefix");
    if (capture_len < frame_len())
        fail(ErrorCode::config, "capture_len shorter than one frame");
}

void ZcConfig::validate() const
{
    if (length < 3 || length % 2 == 0)
        fail(ErrorCode::domain, "ZC length must be an odd integer >= 3");
    if (root <= 0 || root >= length)
        fail(ErrorCode::domain, "ZC root must lie in (0, length)");
    if (std::gcd(root, length) != 1)
        fail(ErrorCode::domain, fmt::format("ZC root {} is not coprime with length {}", root, length));
}

SampleStream zc_sequence(const ZcConfig& cfg)
{
    cfg.validate();
    const auto n_len = static_cast<std::int64_t>(cfg.length);
    SampleStream out;
    out.origin = Origin::tx;
    out.samples.resize(static_cast<std::size_t>(cfg.length));
    for (std::int64_t n = 0; n < n_len; ++n) {
        // exponent u n (n+1) / (2N) turns, reduced exactly in integers
        const std::int64_t num = (static_cast<std::int64_t>(cfg.root) * ((n * (n + 1)) % (2 * n_len))) % (2 * n_len);
        out.samples[static_cast<std::size_t>(n)] = unit_phasor(-static_cast<double>(num) / static_cast<double>(2 * n_len));
    }
    return out;
}

std::vector<cplx> pilot_sequence(const FrameConfig& cfg, std::uint64_t seed)
{
    Rng rng(seed, Stream::pilots);
    std::vector<cplx> p(static_cast<std::size_t>(cfg.n_subcarriers));
    for (auto& v : p)
        v = unit_phasor(rng.uniform());
    return p;
}

std::vector<cplx> qpsk_payload(const FrameConfig& cfg, std::uint64_t seed)
{
    Rng rng(seed, Stream::payload);
    const double a = std::numbers::sqrt2 / 2.0;
    std::vector<cplx> d(static_cast<std::size_t>(cfg.n_data_symbols()) * static_cast<std::size_t>(cfg.n_subcarriers));
    for (auto& v : d) {
        const auto bits = rng.next_u64() >> 62;
        v = {(bits & 1U) ? -a : a, (bits & 2U) ? -a : a};
    }
    return d;
}

SampleStream build_frame(const FrameConfig& cfg, std::span<const cplx> data, std::span<const cplx> pilots)
{
    cfg.validate();
    const auto nsc = static_cast<std::size_t>(cfg.n_subcarriers);
    const auto expected = static_cast<std::size_t>(cfg.n_data_symbols()) * nsc;
    if (data.size() != expected)
        fail(ErrorCode::arity, fmt::format("expected {} data symbols, got {}", expected, data.size()));
    if (pilots.size() != nsc)
        fail(ErrorCode::arity, fmt::format("expected {} pilot values, got {}", nsc, pilots.size()));

    const auto ks = cfg.active_subcarriers();
    const auto n = static_cast<std::size_t>(cfg.n_fft);
    SampleStream out;
    out.fs_hz = cfg.fs_hz;
    out.origin = Origin::tx;
    out.samples.reserve(static_cast<std::size_t>(cfg.frame_len()));

    std::size_t next_data = 0;
    std::vector<cplx> grid(n);
    for (int s = 0; s < cfg.n_symbols; ++s) {
        std::fill(grid.begin(), grid.end(), cplx{});
        std::span<const cplx> src = cfg.is_pilot(s) ? pilots : data.subspan(next_data, nsc);
        if (!cfg.is_pilot(s))
            next_data += nsc;
        for (std::size_t i = 0; i < ks.size(); ++i)
            grid[static_cast<std::size_t>(cfg.bin_of(ks[i]))] = src[i];
        const auto body = fft::inverse(grid);
        const auto cp = static_cast<std::size_t>(cfg.cp_len(s));
        out.samples.insert(out.samples.end(), body.end() - static_cast<std::ptrdiff_t>(cp), body.end());
        out.samples.insert(out.samples.end(), body.begin(), body.end());
    }
    return out;
}

std::vector<cplx> Preamble::samples() const
{
    std::vector<cplx> out;
    out.reserve(size());
    const auto n = static_cast<std::ptrdiff_t>(body.size());
    out.insert(out.end(), body.begin() + (n - prefix), body.end());
    out.insert(out.end(), body.begin(), body.end());
    out.insert(out.end(), body.begin(), body.begin() + suffix);
    return out;
}

Preamble build_preamble(const FrameConfig& cfg, const ZcConfig& zc)
{
    cfg.validate();
    if (zc.length > cfg.n_fft)
        fail(ErrorCode::config, "ZC length exceeds n_fft");
    const auto z = zc_sequence(zc);
    const int half = zc.length / 2;
    std::vector<cplx> grid(static_cast<std::size_t>(cfg.n_fft));
    for (int k = -half; k <= half; ++k)
        grid[static_cast<std::size_t>(cfg.bin_of(k))] = z.samples[static_cast<std::size_t>(k + half)];
    Preamble p;
    p.body = fft::inverse(grid);
    p.prefix = cfg.cp_long;
    p.suffix = cfg.cp_short;
    return p;
}

SampleStream build_capture(const FrameConfig& cfg, const Preamble& pre, const SampleStream& frame, int lead_in)
{
    if (lead_in < 0)
        fail(ErrorCode::domain, "lead_in must be non-negative");
    const auto total = static_cast<std::size_t>(lead_in) + pre.size() + frame.size();
    if (total > static_cast<std::size_t>(cfg.capture_len))
        fail(ErrorCode::domain,
             fmt::format("capture of {} samples does not fit capture_len {}", total, cfg.capture_len));
    SampleStream out;
    out.fs_hz = cfg.fs_hz;
    out.origin = Origin::tx;
    out.samples.assign(static_cast<std::size_t>(lead_in), cplx{});
    const auto p = pre.samples();
    out.samples.insert(out.samples.end(), p.begin(), p.end());
    out.samples.insert(out.samples.end(), frame.samples.begin(), frame.samples.end());
    out.samples.resize(static_cast<std::size_t>(cfg.capture_len));
    return out;
}

SampleStream apply_channel(const SampleStream& tx, const MultipathProfile& profile, double snr_db,
                           std::uint64_t seed, ChannelReport* report)
{
    if (std::isnan(snr_db))
        fail(ErrorCode::domain, "snr_db is NaN");
    check_finite(tx, "apply_channel");
    profile.validate();

    ChannelReport rep;
    SampleStream rx;
    rx.fs_hz = tx.fs_hz;
    rx.origin = Origin::rx;
    rx.t0 = tx.t0;
    rx.samples.assign(tx.size(), cplx{});
    const auto len = static_cast<long>(tx.size());

    for (const auto& tap : profile.taps()) {
        const double pos = tap.delay_s * tx.fs_hz;
        const double snapped = std::round(pos);
        const double err = std::abs(pos - snapped) / tx.fs_hz;
        if (std::abs(pos - snapped) > 1e-6) {
            ++rep.off_grid_taps;
            rep.max_snap_error_s = std::max(rep.max_snap_error_s, err);
        }
        const auto shift = static_cast<long>(snapped);
        for (long i = std::max(0L, -shift); i < len && i + shift < len; ++i)
            rx.samples[static_cast<std::size_t>(i + shift)] += tap.amp * tx.samples[static_cast<std::size_t>(i)];
    }

    if (std::isfinite(snr_db)) {
        // Signal power is measured over the span that carries signal, so
        // zero padding does not dilute it.
        auto nz = [](const cplx& v) { return v != cplx{}; };
        const auto first = std::find_if(rx.samples.begin(), rx.samples.end(), nz);
        const auto last = std::find_if(rx.samples.rbegin(), rx.samples.rend(), nz);
        double power = 0.0;
        if (first != rx.samples.end()) {
            const auto end = last.base();
            for (auto it = first; it != end; ++it)
                power += std::norm(*it);
            power /= static_cast<double>(std::distance(first, end));
        }
        const double var = power / std::pow(10.0, snr_db / 10.0);
        const double sd = std::sqrt(var / 2.0);
        Rng rng(seed, Stream::noise);
        for (auto& v : rx.samples) {
            const double re = rng.normal();
            const double im = rng.normal();
            v += cplx{sd * re, sd * im};
        }
        rep.noise_variance = var;
    }
    if (report)
        *report = rep;
    return rx;
}

SyncResult synchronize(const SampleStream& rx, const Preamble& pre, double margin)
{
    const std::size_t n = pre.body.size();
    if (n == 0)
        fail(ErrorCode::domain, "empty preamble");
    if (rx.size() < n)
        fail(ErrorCode::sync_failure, "capture shorter than the preamble");
    check_finite(rx, "synchronize");

    std::size_t m = 1;
    while (m < rx.size() + n)
        m <<= 1;
    std::vector<cplx> a(m), b(m);
    std::copy(rx.samples.begin(), rx.samples.end(), a.begin());
    std::copy(pre.body.begin(), pre.body.end(), b.begin());
    auto fa = fft::forward(a);
    const auto fb = fft::forward(b);
    for (std::size_t i = 0; i < m; ++i)
        fa[i] *= std::conj(fb[i]);
    const auto c = fft::inverse(fa);

    const std::size_t n_lags = rx.size() - n + 1;
    std::vector<double> mag(n_lags);
    for (std::size_t l = 0; l < n_lags; ++l)
        mag[l] = std::abs(c[l]);
    const double peak = *std::max_element(mag.begin(), mag.end());
    if (!(peak > 0.0))
        fail(ErrorCode::sync_failure, "no correlation peak in an all-zero capture");
    // Earliest lag within rounding of the maximum.
    std::size_t lag = 0;
    while (mag[lag] < peak * (1.0 - 1e-9))
        ++lag;

    const auto guard = static_cast<std::size_t>(std::max(pre.prefix, pre.suffix));
    double second = 0.0;
    for (std::size_t l = 0; l < n_lags; ++l) {
        const std::size_t d = l > lag ? l - lag : lag - l;
        if (d > guard)
            second = std::max(second, mag[l]);
    }
    SyncResult r;
    r.peak = peak;
    r.ratio = second > 0.0 ? peak / second : std::numeric_limits<double>::infinity();
    r.offset = static_cast<long>(lag) - pre.prefix;
    if (r.ratio < margin)
        fail(ErrorCode::sync_failure,
             fmt::format("correlation peak ratio {:.3g} below margin {:.3g}", r.ratio, margin));
    if (r.offset < 0)
        fail(ErrorCode::sync_failure, "preamble prefix truncated at capture start");
    return r;
}

Cfr estimate_cfr(const SampleStream& rx_frame, const FrameConfig& cfg, std::span<const cplx> pilots)
{
    cfg.validate();
    const auto nsc = static_cast<std::size_t>(cfg.n_subcarriers);
    if (pilots.size() != nsc)
        fail(ErrorCode::arity, fmt::format("expected {} pilot values, got {}", nsc, pilots.size()));
    for (const auto& p : pilots)
        if (p == cplx{})
            fail(ErrorCode::domain, "zero-valued pilot");
    if (rx_frame.size() < static_cast<std::size_t>(cfg.frame_len()))
        fail(ErrorCode::arity, "received frame shorter than the frame length");

    const auto ks = cfg.active_subcarriers();
    const auto n = static_cast<std::size_t>(cfg.n_fft);
    Cfr out;
    out.subcarriers = ks;
    out.values.assign(ks.size(), cplx{});
    for (int s : cfg.pilot_symbols) {
        const auto start = static_cast<std::size_t>(cfg.symbol_start(s) + cfg.cp_len(s) - cfg.timing_advance);
        std::span<const cplx> win(rx_frame.samples.data() + start, n);
        const auto y = fft::forward(win);
        for (std::size_t i = 0; i < ks.size(); ++i) {
            // Undo the phase ramp of the early window.
            const cplx ramp = unit_phasor(static_cast<double>(ks[i]) * cfg.timing_advance / static_cast<double>(n));
            out.values[i] += y[static_cast<std::size_t>(cfg.bin_of(ks[i]))] * ramp / pilots[i];
        }
    }
    const double inv = 1.0 / static_cast<double>(cfg.pilot_symbols.size());
    for (auto& v : out.values)
        v *= inv;
    return out;
}

SampleStream cfr_to_cir(const Cfr& cfr, const FrameConfig& cfg)
{
    if (cfr.subcarriers.size() != cfr.values.size())
        fail(ErrorCode::arity, "CFR subcarrier and value counts differ");
    std::vector<cplx> grid(static_cast<std::size_t>(cfg.n_fft));
    for (std::size_t i = 0; i < cfr.values.size(); ++i)
        grid[static_cast<std::size_t>(cfg.bin_of(cfr.subcarriers[i]))] = cfr.values[i];
    SampleStream out;
    out.fs_hz = cfg.fs_hz;
    out.origin = Origin::cir;
    out.samples = fft::inverse(grid);
    return out;
}

SampleStream center_cir(const SampleStream& cir, int advance)
{
    const auto n = static_cast<long>(cir.size());
    if (advance < 0 || advance >= n)
        fail(ErrorCode::domain, "advance outside the CIR length");
    SampleStream out = cir;
    std::rotate(out.samples.begin(), out.samples.begin() + (n - advance), out.samples.end());
    out.t0 = cir.t0 - advance;
    return out;
}

SampleStream zc_cir(const SampleStream& rx, const Preamble& pre, long preamble_offset, const FrameConfig& cfg)
{
    const auto n = static_cast<long>(pre.body.size());
    const long a = cfg.timing_advance;
    const long body_start = preamble_offset + pre.prefix;
    double energy = 0.0;
    for (const auto& v : pre.body)
        energy += std::norm(v);
    if (!(energy > 0.0))
        fail(ErrorCode::domain, "empty preamble");
    const double scale = static_cast<double>(cfg.n_subcarriers) / static_cast<double>(cfg.n_fft) / energy;

    SampleStream out;
    out.fs_hz = cfg.fs_hz;
    out.origin = Origin::cir;
    out.t0 = -a;
    out.samples.assign(static_cast<std::size_t>(n), cplx{});
    const auto len = static_cast<long>(rx.size());
    for (long m = 0; m < n; ++m) {
        const long base = body_start + m - a;
        cplx acc{};
        const long lo = std::max(0L, -base);
        const long hi = std::min(n, len - base);
        for (long i = lo; i < hi; ++i)
            acc += rx.samples[static_cast<std::size_t>(base + i)] * std::conj(pre.body[static_cast<std::size_t>(i)]);
        out.samples[static_cast<std::size_t>(m)] = acc * scale;
    }
    return out;
}

std::vector<cplx> band_kernel(const FrameConfig& cfg)
{
    std::vector<cplx> grid(static_cast<std::size_t>(cfg.n_fft));
    for (int k : cfg.active_subcarriers())
        grid[static_cast<std::size_t>(cfg.bin_of(k))] = 1.0;
    return fft::inverse(grid);
}

SampleStream ideal_cir(const MultipathProfile& profile, const FrameConfig& cfg)
{
    profile.validate();
    const auto g = band_kernel(cfg);
    const long n = cfg.n_fft;
    SampleStream out;
    out.fs_hz = cfg.fs_hz;
    out.origin = Origin::cir;
    out.t0 = -cfg.timing_advance;
    out.samples.assign(static_cast<std::size_t>(n), cplx{});
    for (const auto& tap : profile.taps()) {
        const long d = std::lround(tap.delay_s * cfg.fs_hz);
        for (long i = 0; i < n; ++i) {
            const long m = (((i + out.t0 - d) % n) + n) % n;
            out.samples[static_cast<std::size_t>(i)] += tap.amp * g[static_cast<std::size_t>(m)];
        }
    }
    return out;
}

SoundResult sound_at(const SampleStream& rx, const FrameConfig& cfg, const Preamble& pre,
                     std::span<const cplx> pilots, long preamble_offset)
{
    const long start = preamble_offset + static_cast<long>(pre.size());
    if (preamble_offset < 0 || start + cfg.frame_len() > static_cast<long>(rx.size()))
        fail(ErrorCode::arity, "frame runs past the end of the capture");
    SampleStream frame;
    frame.fs_hz = rx.fs_hz;
    frame.origin = Origin::rx;
    frame.samples.assign(rx.samples.begin() + start, rx.samples.begin() + start + cfg.frame_len());
    SoundResult r;
    r.sync.offset = preamble_offset;
    r.cfr = estimate_cfr(frame, cfg, pilots);
    r.cir = center_cir(cfr_to_cir(r.cfr, cfg), cfg.timing_advance);
    return r;
}

SoundResult sound_capture(const SampleStream& rx, const FrameConfig& cfg, const Preamble& pre,
                          std::span<const cplx> pilots, double sync_margin)
{
    const auto sync = synchronize(rx, pre, sync_margin);
    auto r = sound_at(rx, cfg, pre, pilots, sync.offset);
    r.sync = sync;
    return r;
}

}  // namespace forestlink::ofdm
