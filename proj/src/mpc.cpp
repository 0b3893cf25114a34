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

#include "mpc.hpp"

#include "error.hpp"
#include "fft.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace forestlink::mpc {

const char* noise_floor_method_name(NoiseFloorMethod m) noexcept
{
    return m == NoiseFloorMethod::percentile ? "percentile" : "trailing_window";
}

std::optional<NoiseFloorMethod> noise_floor_method_from_name(std::string_view s)
{
    if (s == "trailing_window")
        return NoiseFloorMethod::trailing_window;
    if (s == "percentile")
        return NoiseFloorMethod::percentile;
    return std::nullopt;
}

const char* los_mode_name(LosMode m) noexcept
{
    return m == LosMode::strongest ? "strongest" : "first";
}

std::optional<LosMode> los_mode_from_name(std::string_view s)
{
    if (s == "first")
        return LosMode::first;
    if (s == "strongest")
        return LosMode::strongest;
    return std::nullopt;
}

void PeakSearchConfig::validate() const
{
    if (min_spacing_samples < 1)
        fail(ErrorCode::config, "min_spacing_samples must be at least 1");
    if (!(rel_threshold_db < 0.0))
        fail(ErrorCode::config, "rel_threshold_db must be negative");
    if (!(trailing_fraction > 0.0 && trailing_fraction <= 1.0))
        fail(ErrorCode::config, "trailing_fraction must lie in (0, 1]");
    if (!(noise_percentile >= 0.0 && noise_percentile <= 100.0))
        fail(ErrorCode::config, "noise_percentile must lie in [0, 100]");
    if (!std::isfinite(noise_margin_db))
        fail(ErrorCode::config, "noise_margin_db must be finite");
    if (max_atoms < 1)
        fail(ErrorCode::config, "max_atoms must be positive");
    if (!(prune_factor >= 0.0) || !std::isfinite(prune_factor))
        fail(ErrorCode::config, "prune_factor must be finite and non-negative");
}

namespace {

std::vector<double> powers(const ofdm::SampleStream& cir)
{
    std::vector<double> p(cir.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& v = cir.samples[i];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            fail(ErrorCode::domain, "CIR contains non-finite samples");
        p[i] = std::norm(v);
    }
    return p;
}

double percentile_of(std::vector<double> v, double q)
{
    const auto k = static_cast<std::size_t>(std::llround(q / 100.0 * static_cast<double>(v.size() - 1)));
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

struct Candidate {
    long bin = 0;
    cplx amp{};
    double power = 0.0;
};

// Sparse fit of the CIR as a sum of shifted kernels. The kernel is the
// impulse response of the band projector, so the Gram matrix of shifted
// kernels is the kernel itself and the atom correlations are samples of the
// band-projected CIR. Forward selection runs until the residual looks like
// noise; atoms that do not pay for themselves are then pruned one by one.
std::vector<Candidate> pursue(const ofdm::SampleStream& cir, const PeakSearchConfig& cfg)
{
    const auto& g = cfg.kernel;
    const auto n = static_cast<long>(cir.size());
    if (static_cast<long>(g.size()) != n)
        fail(ErrorCode::arity, fmt::format("kernel length {} does not match CIR length {}", g.size(), n));
    const double g0 = g[0].real();
    if (!(g0 > 0.0))
        fail(ErrorCode::domain, "kernel has no energy at lag zero");
    auto kern = [&](long d) { return g[static_cast<std::size_t>(((d % n) + n) % n)]; };

    const auto gf = fft::forward(g);
    auto spec = fft::forward(cir.samples);
    for (long i = 0; i < n; ++i)
        spec[static_cast<std::size_t>(i)] *= std::conj(gf[static_cast<std::size_t>(i)]);
    const auto proj = fft::inverse(spec);

    const int cap = cfg.max_atoms;
    std::vector<long> support;
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    // Cholesky factor of the Gram matrix, grown one atom at a time
    Eigen::MatrixXcd chol = Eigen::MatrixXcd::Zero(cap, cap);
    Eigen::VectorXcd rhs(cap);
    Eigen::VectorXcd a;
    std::vector<cplx> resid = proj;

    auto set_residual = [&] {
        std::vector<cplx> x(static_cast<std::size_t>(n));
        for (std::size_t j = 0; j < support.size(); ++j)
            x[static_cast<std::size_t>(support[j])] += a[static_cast<Eigen::Index>(j)];
        auto xf = fft::forward(x);
        for (long i = 0; i < n; ++i)
            xf[static_cast<std::size_t>(i)] *= gf[static_cast<std::size_t>(i)];
        const auto model = fft::inverse(xf);
        for (long i = 0; i < n; ++i)
            resid[static_cast<std::size_t>(i)] = proj[static_cast<std::size_t>(i)] - model[static_cast<std::size_t>(i)];
    };
    auto residual_energy = [&] {
        double e = 0.0;
        for (const auto& v : resid)
            e += std::norm(v);
        return e;
    };

    double peak = 0.0;
    for (const auto& v : proj)
        peak = std::max(peak, std::norm(v));
    const double lone_max = 2.0 * std::log(static_cast<double>(n));
    while (static_cast<int>(support.size()) < cap) {
        long best = -1;
        double bv = 0.0;
        for (long i = 0; i < n; ++i) {
            const double v = std::norm(resid[static_cast<std::size_t>(i)]);
            if (v > bv && !used[static_cast<std::size_t>(i)]) {
                bv = v;
                best = i;
            }
        }
        const double mean = residual_energy() / static_cast<double>(n);
        if (best < 0 || bv <= lone_max * mean || bv <= peak * 1e-24)
            break;
        used[static_cast<std::size_t>(best)] = 1;

        const auto m = static_cast<Eigen::Index>(support.size());
        Eigen::VectorXcd col(m);
        for (Eigen::Index i = 0; i < m; ++i)
            col[i] = kern(support[static_cast<std::size_t>(i)] - best);
        const Eigen::VectorXcd w = chol.topLeftCorner(m, m).triangularView<Eigen::Lower>().solve(col);
        const double d = g0 - w.squaredNorm();
        if (!(d > g0 * 1e-12))
            continue;  // numerically inside the current span
        chol.row(m).head(m) = w.adjoint();
        chol(m, m) = std::sqrt(d);
        rhs[m] = proj[static_cast<std::size_t>(best)];
        support.push_back(best);

        const auto lm = chol.topLeftCorner(m + 1, m + 1);
        const Eigen::VectorXcd y = lm.triangularView<Eigen::Lower>().solve(rhs.head(m + 1));
        a = lm.adjoint().triangularView<Eigen::Upper>().solve(y);
        set_residual();
    }

    if (!support.empty()) {
        // Backward elimination on the inverse Gram matrix: dropping atom j
        // raises the residual energy by |a_j|^2 / inv_jj.
        const auto m0 = static_cast<Eigen::Index>(support.size());
        const Eigen::MatrixXcd linv = chol.topLeftCorner(m0, m0).triangularView<Eigen::Lower>().solve(
            Eigen::MatrixXcd::Identity(m0, m0));
        Eigen::MatrixXcd inv = linv.adjoint() * linv;
        double energy = residual_energy();
        bool pruned = false;
        while (!support.empty()) {
            const auto m = static_cast<Eigen::Index>(support.size());
            // energy per noise degree of freedom
            const double dof = energy / static_cast<double>(n) / g0;
            Eigen::Index worst = 0;
            double worst_gain = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < m; ++j) {
                const double gain = std::norm(a[j]) / std::max(inv(j, j).real(), 1e-300);
                if (gain < worst_gain) {
                    worst_gain = gain;
                    worst = j;
                }
            }
            if (worst_gain > cfg.prune_factor * dof)
                break;
            energy += worst_gain;
            const cplx pivot = inv(worst, worst);
            const Eigen::VectorXcd c = inv.col(worst);
            a -= c * (a[worst] / pivot);
            inv -= c * c.adjoint() / pivot;
            // drop row and column `worst`
            const Eigen::Index tail = m - worst - 1;
            inv.block(worst, 0, tail, m) = inv.block(worst + 1, 0, tail, m).eval();
            inv.block(0, worst, m, tail) = inv.block(0, worst + 1, m, tail).eval();
            inv.conservativeResize(m - 1, m - 1);
            a.segment(worst, tail) = a.segment(worst + 1, tail).eval();
            a.conservativeResize(m - 1);
            support.erase(support.begin() + worst);
            pruned = true;
        }
        if (pruned && !support.empty()) {
            // fresh solve on the surviving atoms to shed downdate rounding
            const auto m = static_cast<Eigen::Index>(support.size());
            Eigen::MatrixXcd gram(m, m);
            Eigen::VectorXcd b(m);
            for (Eigen::Index i = 0; i < m; ++i) {
                b[i] = proj[static_cast<std::size_t>(support[static_cast<std::size_t>(i)])];
                for (Eigen::Index j = 0; j < m; ++j)
                    gram(i, j) = kern(support[static_cast<std::size_t>(i)] - support[static_cast<std::size_t>(j)]);
            }
            a = gram.ldlt().solve(b);
        }
    }

    std::vector<Candidate> out;
    for (std::size_t j = 0; j < support.size(); ++j) {
        const cplx amp = a[static_cast<Eigen::Index>(j)] * g0;
        out.push_back({support[j], amp, std::norm(amp)});
    }
    return out;
}

std::vector<Candidate> local_maxima(const ofdm::SampleStream& cir, const std::vector<double>& p)
{
    std::vector<Candidate> out;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        const bool left = i == 0 || p[i] > p[i - 1];
        const bool right = i + 1 == n || p[i] >= p[i + 1];
        if (left && right && p[i] > 0.0)
            out.push_back({static_cast<long>(i), cir.samples[i], p[i]});
    }
    return out;
}

}  // namespace

double noise_floor(const ofdm::SampleStream& cir, const PeakSearchConfig& cfg)
{
    cfg.validate();
    if (cir.size() == 0)
        fail(ErrorCode::arity, "empty CIR");
    const auto p = powers(cir);
    double base = 0.0;
    if (cfg.noise_floor_method == NoiseFloorMethod::trailing_window) {
        const auto n = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(cfg.trailing_fraction * static_cast<double>(p.size()))));
        base = percentile_of(std::vector<double>(p.end() - static_cast<std::ptrdiff_t>(n), p.end()), 50.0);
    } else {
        base = percentile_of(p, cfg.noise_percentile);
    }
    return base * std::pow(10.0, cfg.noise_margin_db / 10.0);
}

TapSet detect_peaks(const ofdm::SampleStream& cir, const PeakSearchConfig& cfg)
{
    const double floor = noise_floor(cir, cfg);
    const auto p = powers(cir);
    const double peak = *std::max_element(p.begin(), p.end());
    if (!(peak > floor))
        fail(ErrorCode::no_signal, "no CIR sample exceeds the noise floor");

    std::vector<Candidate> cand;
    if (cfg.kernel.empty()) {
        cand = local_maxima(cir, p);
    } else {
        cand = pursue(cir, cfg);
    }

    double top = 0.0;
    for (const auto& c : cand)
        top = std::max(top, c.power);
    const double rel = top * std::pow(10.0, cfg.rel_threshold_db / 10.0);
    std::erase_if(cand, [&](const Candidate& c) { return !(c.power > floor) || c.power < rel; });

    // Spacing: strongest first, drop anything too close to a kept tap.
    std::stable_sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) { return a.power > b.power; });
    std::vector<Candidate> kept;
    for (const auto& c : cand) {
        const bool clear = std::all_of(kept.begin(), kept.end(), [&](const Candidate& k) {
            return std::abs(k.bin - c.bin) >= cfg.min_spacing_samples;
        });
        if (clear)
            kept.push_back(c);
    }
    if (kept.empty())
        fail(ErrorCode::no_signal, "no peak satisfies the detection criteria");
    std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) { return a.bin < b.bin; });

    TapSet out;
    for (const auto& c : kept)
        out.taps.push_back({static_cast<double>(c.bin + cir.t0) / cir.fs_hz, c.power, c.amp});
    return out;
}

double mean_excess_delay(const TapSet& t)
{
    if (t.empty())
        fail(ErrorCode::arity, "mean excess delay of an empty tap set");
    double pw = 0.0, acc = 0.0;
    for (const auto& x : t.taps) {
        pw += x.power;
        acc += x.power * x.delay_s;
    }
    if (!(pw > 0.0))
        fail(ErrorCode::undefined, "tap powers sum to zero");
    return acc / pw;
}

double rms_ds(const TapSet& t)
{
    const double mean = mean_excess_delay(t);
    double pw = 0.0, acc = 0.0;
    for (const auto& x : t.taps) {
        const double d = x.delay_s - mean;
        pw += x.power;
        acc += x.power * d * d;
    }
    return std::sqrt(acc / pw);
}

double rician_k(const TapSet& t, LosMode mode)
{
    if (t.size() < 2)
        fail(ErrorCode::undefined, "Rician K needs at least two taps");
    std::size_t los = 0;
    if (mode == LosMode::strongest)
        for (std::size_t i = 1; i < t.size(); ++i)
            if (t.taps[i].power > t.taps[los].power)
                los = i;
    double rest = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (i != los)
            rest += t.taps[i].power;
    if (!(rest > 0.0))
        fail(ErrorCode::undefined, "Rician K with zero scattered power");
    return 10.0 * std::log10(t.taps[los].power / rest);
}

Extraction extract(const ofdm::SampleStream& cir, const PeakSearchConfig& cfg)
{
    Extraction e;
    e.taps = detect_peaks(cir, cfg);
    e.mean_delay_s = mean_excess_delay(e.taps);
    e.rms_ds_s = rms_ds(e.taps);
    if (e.taps.size() >= 2)
        e.k_db = rician_k(e.taps, cfg.los_mode);
    return e;
}

}  // namespace forestlink::mpc
