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

#include "pathloss.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace forestlink::fit {

enum class Env { larch, birch, other };
enum class Link { g2g, a2g };

const char* env_name(Env e) noexcept;
const char* link_name(Link l) noexcept;
std::optional<Env> env_from_name(std::string_view s);
std::optional<Link> link_from_name(std::string_view s);

struct PathLossSample {
    double dist_m = 0.0;
    double pl_db = 0.0;
    std::optional<double> elev_deg;
    Env env = Env::other;
    Link link = Link::g2g;
};

// A model with its parameter vector, bounds and free mask. Parameters follow
// pathloss::info(model).param_names; fixed entries keep their init value.
struct ModelSpec {
    pathloss::Model model = pathloss::Model::ci;
    std::vector<double> init;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<bool> free;
    pathloss::Options options;
    // Frequency, receiver height, vegetation depth and default elevation.
    // The distance (and elevation, when present) come from each sample.
    pathloss::LinkGeometry base;

    std::size_t n_free() const;
    void validate() const;
};

// Defaults shipped for every model family (bounds wide enough for the published
// birch A_m = 1335).
ModelSpec default_spec(pathloss::Model m, const pathloss::LinkGeometry& base = {});

struct FitOptions {
    std::uint64_t seed = 1;
    int n_starts = 16;     // Latin-hypercube starts in addition to init
    int max_iter = 500;
    unsigned threads = 1;  // 0 selects hardware concurrency
};

struct FittedModel {
    ModelSpec spec;
    std::vector<double> params;
    double rmse_db = 0.0;
    std::size_t n_samples = 0;
    bool converged = false;
    int iterations = 0;
    int best_start = 0;
};

struct LmResult {
    std::vector<double> params;
    double cost = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Model prediction for one sample.
double predict(std::span<const double> params, const ModelSpec& spec, const PathLossSample& s);

double rmse(std::span<const double> params, const ModelSpec& spec, std::span<const PathLossSample> samples);

// Single damped least-squares descent from a starting vector.
LmResult levenberg_marquardt(const ModelSpec& spec, std::span<const PathLossSample> samples,
                             std::span<const double> start, int max_iter = 500);

FittedModel fit_model(std::span<const PathLossSample> samples, const ModelSpec& spec, const FitOptions& opt = {});

std::vector<double> shadow_residuals(const FittedModel& fitted, std::span<const PathLossSample> samples);

struct NormalFit {
    double mu = 0.0;
    double sigma = 0.0;
    double fit_err_pct = 0.0;
    bool fit_err_defined = true;
    std::size_t n = 0;
    std::size_t bins = 0;
};

NormalFit fit_normal(std::span<const double> series);

// Synthetic measurement set: distances uniform on [d_min, d_max], the model
// evaluated at `params`, plus Normal(0, sigma_db) shadowing.
std::vector<PathLossSample> simulate_samples(const ModelSpec& spec, std::span<const double> params, double d_min,
                                             double d_max, std::size_t n, double sigma_db, std::uint64_t seed);

}  // namespace forestlink::fit
