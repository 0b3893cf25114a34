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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace forestlink {

inline constexpr double speed_of_light = 299792458.0;

namespace pathloss {

// Returned instead of +inf when the two-ray field cancels.
inline constexpr double null_loss_db = 300.0;

// Link geometry in canonical units (Hz, m, rad).
struct LinkGeometry {
    double freq_hz = 1.4e9;
    double dist_m = 1.0;
    double elev_rad = 0.0;
    double rx_height_m = 1.8;
    double veg_depth_m = 0.0;

    static LinkGeometry from_ghz_deg(double freq_ghz, double dist_m, double elev_deg = 0.0,
                                     double rx_height_m = 1.8, double veg_depth_m = 0.0);

    double freq_ghz() const noexcept { return freq_hz * 1e-9; }
    double freq_mhz() const noexcept { return freq_hz * 1e-6; }
    double elev_deg() const noexcept;
    double wavelength_m() const noexcept { return speed_of_light / freq_hz; }

    // Throws domain error when an invariant is violated.
    void validate() const;
};

enum class Fe2rZForm { sqrt_form, ratio_form };
enum class BhfMMode { anchored, literal };

struct Options {
    Fe2rZForm fe2r_z = Fe2rZForm::sqrt_form;
    BhfMMode bhf_m = BhfMMode::anchored;
};

struct ItuHParams { double a_m = 30.0; double mu = 0.1; };
struct SuiParams { double a = 4.6; double b = 0.0075; double c = 12.6; double bs_height_m = 40.0; double d0_m = 100.0; };
struct BhfParams { double alpha = 4.3; double beta = 89.0; double zeta = -42.0; };
struct BhfMParams {
    double n = 4.3;
    double m = 1.0;
    double alpha = 1.1;
    double beta = 33.8;
    double zeta = -11.7;
    double d0_m = 30.0;
};
struct ItuSParams { double a = 0.2; double b = 0.4; double c = 0.2; double e = 0.0; double g = 0.1; };
struct Fe2rParams { double xi_r = 15.0; };
struct Fe2rMParams { double xi_r = 15.0; double n = 1.0; double m = 0.0; double l = 0.0; };

enum class HataVariant : int {
    okumura_open = 0,
    okumura_suburban = 1,
    okumura_urban = 2,
    cost231_medium = 3,
    cost231_metro = 4,
};
struct HataParams {
    double bs_height_m = 30.0;
    double ms_height_m = 1.5;
    HataVariant variant = HataVariant::okumura_open;
};

double fspl(const LinkGeometry& g);
double ci(const LinkGeometry& g, double n);
double itu_h_excess(const LinkGeometry& g, const ItuHParams& p);
double fspl_h(const LinkGeometry& g, const ItuHParams& p);
double sui(const LinkGeometry& g, const SuiParams& p);
double bhf(const LinkGeometry& g, const BhfParams& p);
double bhf_m(const LinkGeometry& g, const BhfMParams& p, BhfMMode mode = BhfMMode::anchored);
double itu_s_excess(const LinkGeometry& g, const ItuSParams& p);
double fspl_s(const LinkGeometry& g, const ItuSParams& p);
double fe2r(const LinkGeometry& g, const Fe2rParams& p, Fe2rZForm form = Fe2rZForm::sqrt_form);
double fe2r_m(const LinkGeometry& g, const Fe2rMParams& p, Fe2rZForm form = Fe2rZForm::sqrt_form);
double hata(const LinkGeometry& g, const HataParams& p);

// Reflected path length d' for the flat-earth geometry (without bias).
double reflected_path_m(const LinkGeometry& g);

// True when the geometry lies inside the published Hata validity ranges.
bool hata_in_validity_range(const LinkGeometry& g, const HataParams& p);

// ---- generic registry --------------------------------------------------

enum class Model { fspl, ci, itu_h, fspl_h, sui, bhf, bhf_m, itu_s, fspl_s, fe2r, fe2r_m, hata };

struct ModelInfo {
    Model id;
    std::string_view name;
    std::vector<std::string_view> param_names;
};

const std::vector<ModelInfo>& all_models();
const ModelInfo& info(Model m);
std::optional<Model> model_from_name(std::string_view name);

// Evaluate a model from a flat parameter vector ordered as info(m).param_names.
double evaluate(Model m, const LinkGeometry& g, std::span<const double> params, const Options& opt = {});

}  // namespace pathloss
}  // namespace forestlink
