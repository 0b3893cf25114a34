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

#include "synth.hpp"
#include "error.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace forestlink {

const char* tap_class_name(TapClass c) noexcept
{
    switch (c) {
    case TapClass::los: return "los";
    case TapClass::cluster: return "cluster";
    case TapClass::scatter: return "scatter";
    }
    return "los";
}

std::optional<TapClass> tap_class_from_name(std::string_view s)
{
    if (s == "los") return TapClass::los;
    if (s == "cluster") return TapClass::cluster;
    if (s == "scatter") return TapClass::scatter;
    return std::nullopt;
}

std::vector<Tap> MultipathProfile::taps() const
{
    std::vector<Tap> all;
    all.reserve(1 + cluster.size() + scatter.size());
    all.push_back(los);
    all.insert(all.end(), cluster.begin(), cluster.end());
    all.insert(all.end(), scatter.begin(), scatter.end());
    std::stable_sort(all.begin() + 1, all.end(), [](const Tap& a, const Tap& b) { return a.delay_s < b.delay_s; });
    return all;
}

double MultipathProfile::total_power() const
{
    double p = std::norm(los.amp);
    for (const auto& t : cluster)
        p += std::norm(t.amp);
    return p + scatter_power();
}

double MultipathProfile::scatter_power() const
{
    double p = 0.0;
    for (const auto& t : scatter)
        p += std::norm(t.amp);
    return p;
}

void MultipathProfile::validate() const
{
    auto check = [&](const Tap& t) {
        if (!(t.delay_s >= 0.0) || !std::isfinite(t.delay_s) || !std::isfinite(t.amp.real()) ||
            !std::isfinite(t.amp.imag()))
            fail(ErrorCode::domain, "tap delays must be finite and non-negative with finite amplitudes");
        if (t.delay_s < los.delay_s)
            fail(ErrorCode::domain, "no tap may precede the LoS tap");
    };
    check(los);
    for (const auto& t : cluster)
        check(t);
    for (const auto& t : scatter)
        check(t);
    const double total = total_power();
    if (total > 0.0 && scatter_power() > 0.05 * total)
        fail(ErrorCode::domain, "scatter power exceeds 5% of the total");
}

namespace synth {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

cplx unit_phasor(Rng& rng)
{
    return std::polar(1.0, two_pi * rng.uniform());
}

struct Layout {
    int m = 0;
    int s = 0;
    int o = 0;  // delay of the first cluster tap
    double rho = 1.0;
};

// Cluster tap weights rho^(k-1), normalised to one.
std::vector<double> weights(int m, double rho)
{
    std::vector<double> w(static_cast<std::size_t>(m));
    double acc = 0.0;
    double v = 1.0;
    for (auto& x : w) {
        x = v;
        acc += v;
        v *= rho;
    }
    for (auto& x : w)
        x /= acc;
    return w;
}

// RMS spread in samples of LoS (p0 at 0) plus cluster (pc*w_k at o+(k-1)s).
double spread(double p0, double pc, const Layout& l, double rho)
{
    double acc = 0.0, mean = 0.0, sq = 0.0, v = 1.0;
    for (int k = 1; k <= l.m; ++k) {
        const double t = static_cast<double>(l.o + (k - 1) * l.s);
        acc += v;
        mean += v * t;
        sq += v * t * t;
        v *= rho;
    }
    const double tot = p0 + pc;
    mean *= pc / acc / tot;
    sq *= pc / acc / tot;
    return std::sqrt(std::max(sq - mean * mean, 0.0));
}

bool within_window(double p0, double pc, int m, double rho)
{
    const auto w = weights(m, rho);
    const double lo = pc * *std::min_element(w.begin(), w.end());
    const double hi = std::max(p0, pc * *std::max_element(w.begin(), w.end()));
    return lo >= hi * std::pow(10.0, cluster_floor_db / 10.0);
}

constexpr int rho_grid = 400;

// Smallest grid index whose rho satisfies the window; the weakest tap only
// gains as rho grows, so the feasible set is [index, rho_grid].
int first_feasible(double p0, double pc, int m)
{
    for (int i = 1; i <= rho_grid; ++i)
        if (within_window(p0, pc, m, static_cast<double>(i) / rho_grid))
            return i;
    return rho_grid + 1;
}

// Scans rho for a sign change of spread - target inside the window and
// refines it by bisection.
std::optional<double> solve_rho(double p0, double pc, const Layout& l, double target, int first)
{
    if (l.m == 1) {
        if (first <= rho_grid && std::abs(spread(p0, pc, l, 1.0) - target) <= 0.02 * target)
            return 1.0;
        return std::nullopt;
    }
    double prev_rho = 0.0;
    double prev_err = 0.0;
    for (int i = first; i <= rho_grid; ++i) {
        const double rho = static_cast<double>(i) / rho_grid;
        const double err = spread(p0, pc, l, rho) - target;
        if (err == 0.0)
            return rho;
        if (i > first && (err > 0.0) != (prev_err > 0.0)) {
            double a = prev_rho, b = rho, fa = prev_err;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = spread(p0, pc, l, mid) - target;
                if ((fm > 0.0) == (fa > 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            return within_window(p0, pc, l.m, b) ? b : a;
        }
        prev_rho = rho;
        prev_err = err;
    }
    return std::nullopt;
}

// Fewest taps and widest spacing first, so cluster taps stay resolvable.
// Evenly spaced layouts (first tap one spacing after the LoS) come before
// layouts whose first tap sits elsewhere.
std::optional<Layout> design(double p0, double pc, double target)
{
    // a single tap is the most permissive case for the window
    if (!within_window(p0, pc, 1, 1.0))
        return std::nullopt;
    int first[max_cluster_taps + 1];
    for (int m = 1; m <= max_cluster_taps; ++m)
        first[m] = first_feasible(p0, pc, m);
    for (int pass = 0; pass < 2; ++pass) {
        for (int m = pass == 0 ? 1 : 2; m <= max_cluster_taps; ++m) {
            if (first[m] > rho_grid)
                continue;
            for (int s = max_cluster_span / m; s >= min_cluster_spacing; --s) {
                const int o_last = pass == 0 ? s : max_cluster_span - (m - 1) * s;
                for (int o = pass == 0 ? s : min_cluster_spacing; o <= o_last; ++o) {
                    if (pass == 1 && o == s)
                        continue;
                    Layout l{m, s, o, 1.0};
                    if (const auto rho = solve_rho(p0, pc, l, target, first[m])) {
                        l.rho = *rho;
                        return l;
                    }
                }
            }
        }
    }
    return std::nullopt;
}

struct SingleTap {
    int s = 0;
    double k = 0.0;
};

// A lone cluster tap has DS = s sqrt(K) / (1 + K) samples, so only a discrete
// set of spreads is reachable at a given K. This trades up to 2 % of K (in dB)
// for an exact spread when the grid of delays leaves a gap.
std::optional<SingleTap> single_tap_layout(double k_db, double target)
{
    const double k_max_db = -cluster_floor_db;
    std::optional<SingleTap> best;
    double best_dev = 0.0;
    for (int s = 1; s <= max_cluster_span; ++s) {
        const double sd = static_cast<double>(s);
        const double disc = sd * sd - 4.0 * target * target;
        if (disc < 0.0)
            continue;
        const double x = (sd + std::sqrt(disc)) / (2.0 * target);
        const double kk = x * x;
        const double kk_db = 10.0 * std::log10(kk);
        const double dev = std::abs(kk_db - k_db);
        if (kk_db > k_max_db || dev > 0.02 * std::abs(k_db))
            continue;
        if (!best || dev < best_dev) {
            best = SingleTap{s, kk};
            best_dev = dev;
        }
    }
    return best;
}

}  // namespace

void SvParams::validate() const
{
    if (n_clusters < 1 || paths_per_cluster < 1)
        fail(ErrorCode::domain, "SV needs at least one cluster and one path");
    for (double v : {cluster_rate_hz, ray_rate_hz, cluster_decay_s, ray_decay_s})
        if (!(v > 0.0) || !std::isfinite(v))
            fail(ErrorCode::domain, "SV rates and decays must be positive");
}

void StatTargets::validate() const
{
    for (const auto* n : {&k_db, &rmsds_ns}) {
        if (!(n->sigma >= 0.0) || !std::isfinite(n->sigma))
            fail(ErrorCode::domain, "target sigma must be finite and non-negative");
    }
    if (std::isnan(k_db.mu) || !std::isfinite(rmsds_ns.mu))
        fail(ErrorCode::domain, "target means must be numbers");
    if (rmsds_ns.sigma == 0.0 && !(rmsds_ns.mu > 0.0) && cluster_enabled)
        fail(ErrorCode::domain, "RMS delay spread target must be positive");
    if (!(std::abs(ds_k_correlation) <= 1.0))
        fail(ErrorCode::domain, "copula correlation must lie in [-1, 1]");
    if (!(scatter_fraction >= 0.0 && scatter_fraction <= 0.05))
        fail(ErrorCode::domain, "scatter fraction must lie in [0, 0.05]");
    if (!(sample_interval_s > 0.0))
        fail(ErrorCode::domain, "sample interval must be positive");
}

MultipathProfile synth_sv(const SvParams& p, std::uint64_t seed)
{
    p.validate();
    Rng rng(seed, Stream::sv);
    std::vector<Tap> taps;
    double t_cluster = 0.0;
    for (int l = 0; l < p.n_clusters; ++l) {
        if (l > 0)
            t_cluster += rng.exponential(p.cluster_rate_hz);
        double t_ray = 0.0;
        for (int m = 0; m < p.paths_per_cluster; ++m) {
            if (m > 0)
                t_ray += rng.exponential(p.ray_rate_hz);
            const double mean_power = std::exp(-t_cluster / p.cluster_decay_s) * std::exp(-t_ray / p.ray_decay_s);
            const double mag = std::sqrt(-mean_power * std::log(rng.uniform_pos()));
            const double phase = two_pi * rng.uniform();
            taps.push_back({t_cluster + t_ray, std::polar(mag, phase), TapClass::cluster});
        }
    }
    std::stable_sort(taps.begin(), taps.end(), [](const Tap& a, const Tap& b) { return a.delay_s < b.delay_s; });
    MultipathProfile prof;
    prof.los = taps.front();
    prof.los.cls = TapClass::los;
    prof.cluster.assign(taps.begin() + 1, taps.end());
    return prof;
}

Draw draw_targets(const StatTargets& t, std::uint64_t seed)
{
    t.validate();
    Rng rng(seed, Stream::profile);
    const double c = t.ds_k_correlation;
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        const double zd = c * z1 + std::sqrt(1.0 - c * c) * z2;
        const double k = t.k_db.mu + t.k_db.sigma * z1;
        const double ds = t.rmsds_ns.mu + t.rmsds_ns.sigma * zd;
        if (ds > 0.0)
            return {k, ds * 1e-9};
    }
    fail(ErrorCode::infeasible, "could not draw a positive RMS delay spread from the target distribution");
}

MultipathProfile forest_profile_for(double k_db, double rmsds_s, const StatTargets& t, std::uint64_t seed)
{
    t.validate();
    const double ts = t.sample_interval_s;
    const double fs = t.scatter_enabled ? t.scatter_fraction : 0.0;
    Rng phases(seed, Stream::profile, 1);

    MultipathProfile prof;
    prof.los.delay_s = 0.0;
    prof.los.cls = TapClass::los;
    int cluster_end = 0;

    const bool with_cluster = t.cluster_enabled && !(k_db == std::numeric_limits<double>::infinity());
    if (!with_cluster) {
        prof.los.amp = std::sqrt(1.0 - fs) * unit_phasor(phases);
    } else {
        if (std::isnan(k_db) || !(rmsds_s > 0.0) || !std::isfinite(rmsds_s))
            fail(ErrorCode::domain, "K and RMS delay spread targets must be finite with positive spread");
        const double k = std::pow(10.0, k_db / 10.0);
        double p0 = k / (1.0 + k);
        double pc = 1.0 / (1.0 + k);
        const double target = rmsds_s / ts;
        auto lay = design(p0, pc, target);
        if (!lay) {
            if (const auto alt = single_tap_layout(k_db, target)) {
                lay = Layout{1, alt->s, alt->s, 1.0};
                p0 = alt->k / (1.0 + alt->k);
                pc = 1.0 / (1.0 + alt->k);
            }
        }
        if (!lay) {
            std::ostringstream os;
            os << "RMS delay spread " << rmsds_s * 1e9 << " ns is unreachable at K = " << k_db
               << " dB: cluster taps must stay within " << -cluster_floor_db
               << " dB of the strongest tap, at least " << min_cluster_spacing
               << " samples apart and spanning at most " << max_cluster_span << " samples";
            fail(ErrorCode::infeasible, os.str());
        }
        const double scale = 1.0 - fs;
        prof.los.amp = std::sqrt(p0 * scale) * unit_phasor(phases);
        const auto w = weights(lay->m, lay->rho);
        for (int i = 1; i <= lay->m; ++i) {
            Tap tap;
            tap.delay_s = static_cast<double>(lay->o + (i - 1) * lay->s) * ts;
            tap.amp = std::sqrt(pc * w[static_cast<std::size_t>(i - 1)] * scale) * unit_phasor(phases);
            tap.cls = TapClass::cluster;
            prof.cluster.push_back(tap);
        }
        cluster_end = lay->o + (lay->m - 1) * lay->s;
    }

    if (fs > 0.0) {
        Rng rng(seed, Stream::scatter);
        const int window = static_cast<int>(std::floor(scatter_window_s / ts + 1e-9));
        std::vector<int> slots(static_cast<std::size_t>(window));
        for (int i = 0; i < window; ++i)
            slots[static_cast<std::size_t>(i)] = cluster_end + 1 + i;
        const int n = std::min(scatter_taps, window);
        for (int i = 0; i < n; ++i) {
            const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(window - i));
            std::swap(slots[static_cast<std::size_t>(i)], slots[j]);
        }
        std::sort(slots.begin(), slots.begin() + n);
        const double amp = std::sqrt(fs / n);
        for (int i = 0; i < n; ++i)
            prof.scatter.push_back(
                {static_cast<double>(slots[static_cast<std::size_t>(i)]) * ts, amp * unit_phasor(rng), TapClass::scatter});
    }
    return prof;
}

MultipathProfile synth_forest_profile(const StatTargets& targets, std::uint64_t seed)
{
    const auto d = draw_targets(targets, seed);
    return forest_profile_for(d.k_db, d.rmsds_s, targets, seed);
}

AnalyticStats analytic_stats(const MultipathProfile& p)
{
    const double p0 = std::norm(p.los.amp);
    double pc = 0.0, m1 = p0 * p.los.delay_s, m2 = p0 * p.los.delay_s * p.los.delay_s;
    for (const auto& t : p.cluster) {
        const double w = std::norm(t.amp);
        pc += w;
        m1 += w * t.delay_s;
        m2 += w * t.delay_s * t.delay_s;
    }
    AnalyticStats s;
    const double tot = p0 + pc;
    s.k_db = pc > 0.0 ? 10.0 * std::log10(p0 / pc) : std::numeric_limits<double>::infinity();
    s.mean_delay_s = tot > 0.0 ? m1 / tot : 0.0;
    s.rmsds_s = tot > 0.0 ? std::sqrt(std::max(m2 / tot - s.mean_delay_s * s.mean_delay_s, 0.0)) : 0.0;
    return s;
}

double draw_shadowing(double sigma_db, std::uint64_t seed)
{
    if (!(sigma_db >= 0.0) || !std::isfinite(sigma_db))
        fail(ErrorCode::domain, "shadowing sigma must be finite and non-negative");
    Rng rng(seed, Stream::shadowing);
    return sigma_db * rng.normal();
}

}  // namespace synth
}  // namespace forestlink
