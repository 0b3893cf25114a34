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

#include "pathloss.hpp"
#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace forestlink::pathloss {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double deg2rad = pi / 180.0;

void require(bool ok, const char* what)
{
    if (!ok)
        fail(ErrorCode::domain, what);
}

void require_finite(std::span<const double> v)
{
    for (double x : v)
        require(std::isfinite(x), "model parameter is not finite");
}

// cos/sin of the elevation with the vertical case pinned so that d' - d is exact.
std::pair<double, double> elev_cos_sin(double elev_rad)
{
    if (std::abs(elev_rad - pi / 2) < 1e-12)
        return {0.0, 1.0};
    if (elev_rad == 0.0)
        return {1.0, 0.0};
    return {std::cos(elev_rad), std::sin(elev_rad)};
}

double fspl_at(double freq_hz, double dist_m)
{
    return 20.0 * std::log10(4.0 * pi * freq_hz * dist_m / speed_of_light);
}

double two_ray(const LinkGeometry& g, double xi, double n, double m, double l, Fe2rZForm form)
{
    g.validate();
    require(std::isfinite(xi) && xi > 1.0, "reflection permittivity xi_r must exceed 1");
    require(std::isfinite(n) && std::isfinite(m) && std::isfinite(l), "model parameter is not finite");
    const auto [c, s] = elev_cos_sin(g.elev_rad);
    const double d = g.dist_m;
    const double lambda = g.wavelength_m();
    const double z = form == Fe2rZForm::sqrt_form ? std::sqrt(xi - c * c / xi) : (xi - c * c) / xi;
    const double r = (s - z) / (s + z);
    const double dp = std::hypot(d * c, d * s + 2.0 * g.rx_height_m) + l;
    require(dp > 0.0, "reflected path length must be positive");
    const double dphi = 2.0 * pi * (dp - d) / lambda;
    const std::complex<double> field =
        (lambda / (4.0 * pi)) * (1.0 / d + r * std::polar(1.0, -dphi) / dp);
    const double mag = std::abs(field);
    if (mag == 0.0)
        return null_loss_db;
    const double loss = -20.0 * n * std::log10(mag) + m;
    if (!(loss <= null_loss_db))
        return null_loss_db;
    return loss;
}

}  // namespace

LinkGeometry LinkGeometry::from_ghz_deg(double freq_ghz, double dist_m, double elev_deg, double rx_height_m,
                                        double veg_depth_m)
{
    LinkGeometry g;
    g.freq_hz = freq_ghz * 1e9;
    g.dist_m = dist_m;
    g.elev_rad = elev_deg == 90.0 ? pi / 2 : elev_deg * deg2rad;
    g.rx_height_m = rx_height_m;
    g.veg_depth_m = veg_depth_m;
    return g;
}

double LinkGeometry::elev_deg() const noexcept
{
    if (elev_rad == pi / 2)
        return 90.0;
    return elev_rad / deg2rad;
}

void LinkGeometry::validate() const
{
    require(std::isfinite(freq_hz) && freq_hz > 0.0, "frequency must be positive");
    require(std::isfinite(dist_m) && dist_m > 0.0, "distance must be positive");
    require(std::isfinite(elev_rad) && elev_rad >= 0.0 && elev_rad <= pi / 2 + 1e-12,
            "elevation must lie in [0, 90] degrees");
    require(std::isfinite(rx_height_m) && rx_height_m >= 0.0, "receiver height must be non-negative");
    require(std::isfinite(veg_depth_m) && veg_depth_m >= 0.0, "vegetation depth must be non-negative");
}

double fspl(const LinkGeometry& g)
{
    g.validate();
    return fspl_at(g.freq_hz, g.dist_m);
}

double ci(const LinkGeometry& g, double n)
{
    g.validate();
    require(std::isfinite(n), "path loss exponent is not finite");
    return 10.0 * n * std::log10(g.dist_m) + fspl_at(g.freq_hz, 1.0);
}

double itu_h_excess(const LinkGeometry& g, const ItuHParams& p)
{
    require(std::isfinite(p.a_m) && p.a_m > 0.0, "A_m must be positive");
    require(std::isfinite(p.mu) && p.mu >= 0.0, "mu must be non-negative");
    require(std::isfinite(g.dist_m) && g.dist_m >= 0.0, "distance must be non-negative");
    return p.a_m * -std::expm1(-g.dist_m * p.mu / p.a_m);
}

double fspl_h(const LinkGeometry& g, const ItuHParams& p)
{
    return fspl(g) + itu_h_excess(g, p);
}

double sui(const LinkGeometry& g, const SuiParams& p)
{
    g.validate();
    const double v[] = {p.a, p.b, p.c, p.bs_height_m, p.d0_m};
    require_finite(v);
    require(p.bs_height_m > 0.0, "base station height must be positive");
    require(p.d0_m > 0.0, "reference distance must be positive");
    if (g.dist_m <= p.d0_m)
        return fspl_at(g.freq_hz, g.dist_m);
    const double a = 20.0 * std::log10(4.0 * pi * p.d0_m / g.wavelength_m());
    const double gamma = p.a - p.b * p.bs_height_m + p.c / p.bs_height_m;
    return a + 10.0 * gamma * std::log10(g.dist_m / p.d0_m);
}

double bhf(const LinkGeometry& g, const BhfParams& p)
{
    g.validate();
    const double v[] = {p.alpha, p.beta, p.zeta};
    require_finite(v);
    return 10.0 * p.alpha * std::log10(g.dist_m) + p.beta + p.zeta * std::tanh(g.dist_m / 20.0) +
           20.0 * std::log10(g.freq_ghz());
}

double bhf_m(const LinkGeometry& g, const BhfMParams& p, BhfMMode mode)
{
    g.validate();
    const double v[] = {p.n, p.m, p.alpha, p.beta, p.zeta, p.d0_m};
    require_finite(v);
    require(p.d0_m > 0.0, "breakpoint distance must be positive");
    const double f_term = 20.0 * std::log10(g.freq_ghz());
    auto near = [&](double d) { return 10.0 * p.n * std::log10(d / 10.0) + f_term + p.m; };
    if (g.dist_m <= p.d0_m)
        return near(g.dist_m);
    const double x = g.dist_m - p.d0_m;
    double far = 10.0 * p.alpha * std::log10(x / 10.0 + 1.0) + p.zeta * std::tanh(x / 20.0) + near(p.d0_m);
    if (mode == BhfMMode::literal)
        far += p.beta;
    return far;
}

double itu_s_excess(const LinkGeometry& g, const ItuSParams& p)
{
    const double v[] = {p.a, p.b, p.c, p.e, p.g};
    require_finite(v);
    require(std::isfinite(g.freq_hz) && g.freq_hz > 0.0, "frequency must be positive");
    require(std::isfinite(g.veg_depth_m) && g.veg_depth_m >= 0.0, "vegetation depth must be non-negative");
    if (p.a == 0.0)
        return 0.0;
    const double base = g.elev_deg() + p.e;
    if (base <= 0.0 && p.g != std::floor(p.g))
        fail(ErrorCode::domain, "theta + E must be positive for non-integer G");
    const double val = p.a * std::pow(g.freq_mhz(), p.b) * std::pow(g.veg_depth_m, p.c) * std::pow(base, p.g);
    require(std::isfinite(val), "vegetation excess loss is not finite");
    return val;
}

double fspl_s(const LinkGeometry& g, const ItuSParams& p)
{
    g.validate();
    return fspl_at(g.freq_hz, g.dist_m / 1000.0) + itu_s_excess(g, p);
}

double reflected_path_m(const LinkGeometry& g)
{
    const auto [c, s] = elev_cos_sin(g.elev_rad);
    return std::hypot(g.dist_m * c, g.dist_m * s + 2.0 * g.rx_height_m);
}

double fe2r(const LinkGeometry& g, const Fe2rParams& p, Fe2rZForm form)
{
    return two_ray(g, p.xi_r, 1.0, 0.0, 0.0, form);
}

double fe2r_m(const LinkGeometry& g, const Fe2rMParams& p, Fe2rZForm form)
{
    return two_ray(g, p.xi_r, p.n, p.m, p.l, form);
}

double hata(const LinkGeometry& g, const HataParams& p)
{
    g.validate();
    require(std::isfinite(p.bs_height_m) && p.bs_height_m > 0.0, "base station height must be positive");
    require(std::isfinite(p.ms_height_m) && p.ms_height_m > 0.0, "mobile height must be positive");
    const double lf = std::log10(g.freq_mhz());
    const double lhb = std::log10(p.bs_height_m);
    const double a_hm = (1.1 * lf - 0.7) * p.ms_height_m - (1.56 * lf - 0.8);
    const double slope = (44.9 - 6.55 * lhb) * std::log10(g.dist_m / 1000.0);
    const double urban = 69.55 + 26.16 * lf - 13.82 * lhb - a_hm + slope;
    const double cost = 46.3 + 33.9 * lf - 13.82 * lhb - a_hm + slope;
    switch (p.variant) {
    case HataVariant::okumura_open: return urban - 4.78 * lf * lf + 18.33 * lf - 40.94;
    case HataVariant::okumura_suburban: {
        const double t = std::log10(g.freq_mhz() / 28.0);
        return urban - 2.0 * t * t - 5.4;
    }
    case HataVariant::okumura_urban: return urban;
    case HataVariant::cost231_medium: return cost;
    case HataVariant::cost231_metro: return cost + 3.0;
    }
    fail(ErrorCode::domain, "unknown Hata variant");
}

bool hata_in_validity_range(const LinkGeometry& g, const HataParams& p)
{
    const double f = g.freq_mhz();
    const bool cost = p.variant == HataVariant::cost231_medium || p.variant == HataVariant::cost231_metro;
    const bool f_ok = cost ? (f >= 1500.0 && f <= 2000.0) : (f >= 150.0 && f <= 1500.0);
    return f_ok && p.bs_height_m >= 30.0 && p.bs_height_m <= 200.0 && p.ms_height_m >= 1.0 &&
           p.ms_height_m <= 10.0 && g.dist_m >= 1000.0 && g.dist_m <= 20000.0;
}

// ---- registry ------------------------------------------------------------

const std::vector<ModelInfo>& all_models()
{
    static const std::vector<ModelInfo> models = {
        {Model::fspl, "fspl", {}},
        {Model::ci, "ci", {"n"}},
        {Model::itu_h, "itu_h", {"A_m", "mu"}},
        {Model::fspl_h, "fspl_h", {"A_m", "mu"}},
        {Model::sui, "sui", {"a", "b", "c", "bs_height_m", "d0_m"}},
        {Model::bhf, "bhf", {"alpha", "beta", "zeta"}},
        {Model::bhf_m, "bhf_m", {"n", "m", "alpha", "beta", "zeta", "d0_m"}},
        {Model::itu_s, "itu_s", {"A", "B", "C", "E", "G"}},
        {Model::fspl_s, "fspl_s", {"A", "B", "C", "E", "G"}},
        {Model::fe2r, "fe2r", {"xi_r"}},
        {Model::fe2r_m, "fe2r_m", {"xi_r", "n", "m", "l"}},
        {Model::hata, "hata", {"bs_height_m", "ms_height_m", "variant"}},
    };
    return models;
}

const ModelInfo& info(Model m)
{
    return all_models().at(static_cast<std::size_t>(m));
}

std::optional<Model> model_from_name(std::string_view name)
{
    for (const auto& mi : all_models())
        if (mi.name == name)
            return mi.id;
    return std::nullopt;
}

double evaluate(Model m, const LinkGeometry& g, std::span<const double> p, const Options& opt)
{
    const auto& mi = info(m);
    if (p.size() != mi.param_names.size())
        fail(ErrorCode::arity, std::string(mi.name) + " expects " + std::to_string(mi.param_names.size()) +
                                   " parameters, got " + std::to_string(p.size()));
    switch (m) {
    case Model::fspl: return fspl(g);
    case Model::ci: return ci(g, p[0]);
    case Model::itu_h: return itu_h_excess(g, {p[0], p[1]});
    case Model::fspl_h: return fspl_h(g, {p[0], p[1]});
    case Model::sui: return sui(g, {p[0], p[1], p[2], p[3], p[4]});
    case Model::bhf: return bhf(g, {p[0], p[1], p[2]});
    case Model::bhf_m: return bhf_m(g, {p[0], p[1], p[2], p[3], p[4], p[5]}, opt.bhf_m);
    case Model::itu_s: return itu_s_excess(g, {p[0], p[1], p[2], p[3], p[4]});
    case Model::fspl_s: return fspl_s(g, {p[0], p[1], p[2], p[3], p[4]});
    case Model::fe2r: return fe2r(g, {p[0]}, opt.fe2r_z);
    case Model::fe2r_m: return fe2r_m(g, {p[0], p[1], p[2], p[3]}, opt.fe2r_z);
    case Model::hata: {
        const double v = p[2];
        if (!(v >= 0.0 && v <= 4.0 && v == std::floor(v)))
            fail(ErrorCode::domain, "Hata variant must be an integer code in 0..4");
        return hata(g, {p[0], p[1], static_cast<HataVariant>(static_cast<int>(v))});
    }
    }
    fail(ErrorCode::domain, "unknown model");
}

}  // namespace forestlink::pathloss
