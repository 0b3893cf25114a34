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

#include "presets.hpp"

#include "error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace forestlink::presets {

namespace {

using fit::Env;
using fit::Link;
using pathloss::Model;

Scenario scen(Env e, std::optional<Link> l, int elev)
{
    std::string key = fit::env_name(e);
    if (!l)
        key += "-mixed";
    else if (*l == Link::g2g)
        key += "-g2g";
    else
        key += fmt::format("-a2g-{}", elev);
    return {key, e, l, elev};
}

}  // namespace

const std::vector<ChannelStats>& channel_stats()
{
    static const std::vector<ChannelStats> table = [] {
        std::vector<ChannelStats> t;
        auto add = [&](Env e, std::optional<Link> l, int elev, double sh_mu, double sh_sd, double ds_mu, double ds_sd,
                       double k_mu, double k_sd) {
            t.push_back({scen(e, l, elev), {sh_mu, sh_sd}, {ds_mu, ds_sd}, {k_mu, k_sd}});
        };
        add(Env::larch, Link::a2g, 30, 0.0, 4.9, 59.4, 30.9, 14.2, 10.6);
        add(Env::larch, Link::a2g, 60, 0.0, 2.9, 51.5, 16.5, 15.1, 7.2);
        add(Env::larch, Link::a2g, 90, 0.0, 3.5, 42.6, 21.0, 23.1, 11.1);
        add(Env::larch, Link::g2g, 0, 0.0, 3.8, 49.5, 28.6, 19.8, 11.3);
        add(Env::larch, std::nullopt, 0, -0.1, 3.9, 51.0, 27.1, 17.4, 10.5);
        add(Env::birch, Link::a2g, 30, 0.0, 2.8, 107.6, 31.4, 3.4, 5.8);
        add(Env::birch, Link::a2g, 60, 0.0, 2.6, 73.5, 27.1, 13.1, 10.1);
        add(Env::birch, Link::a2g, 90, 0.0, 3.1, 73.1, 25.4, 7.9, 8.7);
        add(Env::birch, Link::g2g, 0, 0.0, 2.6, 80.1, 34.0, 10.2, 9.8);
        add(Env::birch, std::nullopt, 0, 0.0, 2.9, 84.2, 33.2, 7.6, 9.0);
        return t;
    }();
    return table;
}

std::optional<ChannelStats> find_channel_stats(std::string_view key)
{
    for (const auto& s : channel_stats())
        if (s.scenario.key == key)
            return s;
    return std::nullopt;
}

synth::StatTargets targets_for(const ChannelStats& s)
{
    synth::StatTargets t;
    t.k_db = s.k_db;
    t.rmsds_ns = s.rmsds_ns;
    t.env = s.scenario.env;
    t.link = s.scenario.link.value_or(Link::g2g);
    t.elev_deg = s.scenario.elev_deg;
    return t;
}

std::vector<ModelPreset> published_models(bool swap)
{
    std::vector<ModelPreset> m;
    auto add = [&](const Scenario& s, std::string label, Model model, std::vector<double> p, double sigma) {
        m.push_back({s.key, std::move(label), model, std::move(p), sigma});
    };
    // BHF-M columns print alpha\n; d0 is 30 m
    auto bhf_m = [&](double alpha, double n, double beta, double mm, double zeta) {
        if (swap)
            std::swap(alpha, n);
        return std::vector<double>{n, mm, alpha, beta, zeta, 30.0};
    };
    const auto lg = scen(Env::larch, Link::g2g, 0);
    add(lg, "CI", Model::ci, {2.6}, 5.2);
    add(lg, "FSPL-H", Model::fspl_h, {30.0, 0.1}, 4.5);
    add(lg, "BHF", Model::bhf, {4.3, 89.0, -42.0}, 4.0);
    add(lg, "BHF-M", Model::bhf_m, bhf_m(1.1, 4.3, 33.8, 1.0, -11.7), 3.8);
    add(lg, "SUI-A", Model::sui, {4.6, 0.0075, 12.6, 40.0, 100.0}, 9.0);
    add(lg, "SUI-B", Model::sui, {4.0, 0.0065, 0.005, 40.0, 100.0}, 12.1);
    add(lg, "SUI-C", Model::sui, {3.6, 0.005, 20.0, 40.0, 100.0}, 14.1);
    const auto bg = scen(Env::birch, Link::g2g, 0);
    add(bg, "CI", Model::ci, {2.6}, 6.0);
    add(bg, "FSPL-H", Model::fspl_h, {1335.0, 0.1}, 4.8);
    add(bg, "BHF", Model::bhf, {5.2, 98.9, -58.5}, 2.8);
    add(bg, "BHF-M", Model::bhf_m, bhf_m(0.6, 5.2, 33.5, 1.0, -14.3), 2.6);
    add(bg, "SUI-A", Model::sui, {4.6, 0.0075, 12.6, 40.0, 100.0}, 8.3);
    add(bg, "SUI-B", Model::sui, {4.0, 0.0065, 17.1, 40.0, 100.0}, 11.3);
    add(bg, "SUI-C", Model::sui, {3.6, 0.005, 20.0, 40.0, 100.0}, 13.4);

    struct A2g {
        Env env;
        int elev;
        double ci_n, ci_sigma;
        double a, b, c, g, s_sigma;
        double fn, fm, fl, f_sigma;
    };
    static constexpr A2g rows[] = {
        {Env::larch, 30, 2.8, 6.4, 0.2, 0.4, 0.2, 0.1, 5.9, 1.0, 0.6, 45.6, 4.9},
        {Env::larch, 60, 3.3, 3.7, 0.4, 0.3, 0.4, 0.0, 3.3, 0.9, 0.7, 37.9, 2.9},
        {Env::larch, 90, 3.0, 3.8, 0.4, 0.1, 0.4, 0.3, 4.7, 1.1, 0.9, 11.6, 3.5},
        {Env::birch, 30, 3.5, 3.4, 0.3, 0.3, 0.3, 0.3, 4.0, 1.0, 0.8, 29.7, 2.8},
        {Env::birch, 60, 3.5, 3.0, 0.6, 0.3, 0.0, 0.4, 4.7, 0.9, 0.9, 25.2, 2.6},
        {Env::birch, 90, 3.2, 3.4, 0.7, 0.1, 1.3, -0.4, 3.7, 1.1, 1.4, -14.9, 3.1},
    };
    for (const auto& r : rows) {
        const auto s = scen(r.env, Link::a2g, r.elev);
        add(s, "CI", Model::ci, {r.ci_n}, r.ci_sigma);
        add(s, "FSPL-S", Model::fspl_s, {r.a, r.b, r.c, 0.0, r.g}, r.s_sigma);
        add(s, "FE2R-M", Model::fe2r_m, {15.0, r.fn, r.fm, r.fl}, r.f_sigma);
    }
    return m;
}

std::optional<ModelPreset> find_model(std::string_view scenario, std::string_view label, bool swap)
{
    for (auto& m : published_models(swap))
        if (m.scenario == scenario && m.label == label)
            return m;
    return std::nullopt;
}

double gps_distance_m(double lat1, double lon1, double alt1, double lat2, double lon2, double alt2)
{
    for (double v : {lat1, lon1, alt1, lat2, lon2, alt2})
        if (!std::isfinite(v))
            fail(ErrorCode::domain, "coordinates must be finite");
    if (std::abs(lat1) > 90.0 || std::abs(lat2) > 90.0)
        fail(ErrorCode::domain, "latitude must lie in [-90, 90]");
    constexpr double r_earth = 6371008.8;
    constexpr double rad = std::numbers::pi / 180.0;
    const double dphi = (lat2 - lat1) * rad;
    const double dlam = (lon2 - lon1) * rad;
    const double h = std::pow(std::sin(dphi / 2.0), 2) +
                     std::cos(lat1 * rad) * std::cos(lat2 * rad) * std::pow(std::sin(dlam / 2.0), 2);
    const double ground = 2.0 * r_earth * std::asin(std::min(1.0, std::sqrt(h)));
    return std::hypot(ground, alt2 - alt1);
}

}  // namespace forestlink::presets
