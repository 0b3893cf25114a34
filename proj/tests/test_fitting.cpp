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

#include "doctest.h"

#include "error.hpp"
#include "fitting.hpp"
#include "rng.hpp"

#include <cmath>
#include <numeric>

using namespace forestlink;
using namespace forestlink::fit;
using pathloss::Model;

namespace {

const std::vector<double> larch_bhf_m = {4.3, 1.0, 1.1, 33.8, -11.7, 30.0};

ModelSpec bhf_m_spec()
{
    auto s = default_spec(Model::bhf_m);
    s.init[3] = 33.8;
    return s;
}

}  // namespace

TEST_CASE("noiseless close-in recovery")
{
    auto spec = default_spec(Model::ci);
    const double n[] = {2.6};
    auto s = simulate_samples(spec, n, 5, 500, 50, 0.0, 3);
    auto f = fit_model(s, spec);
    CHECK(f.converged);
    CHECK(std::abs(f.params[0] - 2.6) <= 1e-6);
    CHECK(f.rmse_db < 1e-6);
}

TEST_CASE("rmse arithmetic")
{
    auto spec = default_spec(Model::ci);
    const double n[] = {2.0};
    std::vector<PathLossSample> s;
    for (double d : {10.0, 20.0}) {
        PathLossSample p;
        p.dist_m = d;
        p.pl_db = predict(n, spec, p);
        s.push_back(p);
    }
    CHECK(rmse(n, spec, s) == 0.0);
    auto off = s;
    for (auto& p : off)
        p.pl_db -= 2.0;
    CHECK(rmse(n, spec, off) == doctest::Approx(2.0).epsilon(1e-12));
    off[0].pl_db = s[0].pl_db + 3.0;
    off[1].pl_db = s[1].pl_db - 4.0;
    CHECK(rmse(n, spec, off) == doctest::Approx(3.5355339059).epsilon(1e-9));
    CHECK_THROWS_AS(rmse(n, spec, std::span<const PathLossSample>{}), Error);
}

TEST_CASE("arity and degeneracy")
{
    auto spec = bhf_m_spec();
    std::vector<PathLossSample> s(3, PathLossSample{50.0, 100.0});
    try {
        fit_model(s, spec);
        FAIL("expected arity error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::arity);
    }
    s.assign(10, PathLossSample{50.0, 100.0});
    try {
        fit_model(s, spec);
        FAIL("expected degeneracy error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::degenerate);
    }
}

TEST_CASE("iteration cap is reported")
{
    auto spec = default_spec(Model::fe2r_m, pathloss::LinkGeometry::from_ghz_deg(1.4, 100, 30));
    const double truth[] = {15, 1.0, 0.6, 45.6};
    auto s = simulate_samples(spec, truth, 10, 640, 200, 4.9, 5);
    auto f = fit_model(s, spec, {.seed = 1, .n_starts = 0, .max_iter = 1});
    CHECK_FALSE(f.converged);
    CHECK_THROWS_AS(shadow_residuals(f, s), Error);
}

TEST_CASE("idempotence and local optimality")
{
    auto spec = bhf_m_spec();
    auto s = simulate_samples(spec, larch_bhf_m, 10, 300, 200, 3.8, 17);
    auto f = fit_model(s, spec);
    REQUIRE(f.converged);

    auto again = spec;
    again.init = f.params;
    auto g = fit_model(s, again, {.seed = 1, .n_starts = 0});
    CHECK(g.converged);
    CHECK(g.iterations <= 2);
    CHECK(std::abs(g.rmse_db - f.rmse_db) <= 1e-6);

    Rng rng(99);
    int worse = 0;
    for (int i = 0; i < 100; ++i) {
        auto p = f.params;
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (!spec.free[k])
                continue;
            const double span = spec.upper[k] - spec.lower[k];
            p[k] = std::clamp(p[k] + 0.05 * span * (rng.uniform() - 0.5), spec.lower[k], spec.upper[k]);
        }
        worse += rmse(p, spec, s) >= f.rmse_db;
    }
    CHECK(worse == 100);
}

TEST_CASE("shadow residuals")
{
    auto spec = bhf_m_spec();
    auto clean = simulate_samples(spec, larch_bhf_m, 10, 300, 60, 0.0, 4);
    spec.init = larch_bhf_m;
    auto exact = fit_model(clean, spec, {.seed = 1, .n_starts = 0});
    for (double r : shadow_residuals(exact, clean))
        CHECK(std::abs(r) < 1e-9);

    auto s = simulate_samples(bhf_m_spec(), larch_bhf_m, 10, 300, 2000, 3.8, 8);
    auto f = fit_model(s, bhf_m_spec());
    auto res = shadow_residuals(f, s);
    const double mean = std::accumulate(res.begin(), res.end(), 0.0) / static_cast<double>(res.size());
    CHECK(std::abs(mean) <= 1e-6);
    auto nf = fit_normal(res);
    CHECK(std::abs(nf.mu) < 0.1);
    CHECK(nf.sigma == doctest::Approx(3.8).epsilon(0.05));
}

TEST_CASE("fit_normal")
{
    std::vector<double> zeros(10, 0.0);
    auto z = fit_normal(zeros);
    CHECK(z.mu == 0.0);
    CHECK(z.sigma == 0.0);
    CHECK_FALSE(z.fit_err_defined);
    CHECK_THROWS_AS(fit_normal(std::vector<double>{1.0}), Error);

    Rng rng(2024);
    std::vector<double> ds(10000);
    for (auto& x : ds)
        x = rng.normal(49.5, 28.6);
    auto n = fit_normal(ds);
    CHECK(std::abs(n.mu - 49.5) <= 1.0);
    CHECK(std::abs(n.sigma - 28.6) <= 0.9);
    CHECK(n.fit_err_defined);
    CHECK(n.fit_err_pct >= 0.0);
    CHECK(n.fit_err_pct < 0.2);

    std::vector<double> sh(10000);
    for (auto& x : sh)
        x = rng.normal(0.0, 4.9);
    CHECK(fit_normal(sh).sigma == doctest::Approx(4.9).epsilon(0.05));

    // affine maps
    std::vector<double> t(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i)
        t[i] = 3.0 * ds[i] - 7.0;
    auto a = fit_normal(t);
    CHECK(a.mu == doctest::Approx(3.0 * n.mu - 7.0).epsilon(1e-12));
    CHECK(a.sigma == doctest::Approx(3.0 * n.sigma).epsilon(1e-12));
    for (std::size_t i = 0; i < ds.size(); ++i)
        t[i] = ds[i] + 12.5;
    CHECK(fit_normal(t).mu == doctest::Approx(n.mu + 12.5).epsilon(1e-14));
}

TEST_CASE("multi-start determinism across thread counts")
{
    auto spec = default_spec(Model::fe2r_m, pathloss::LinkGeometry::from_ghz_deg(1.4, 100, 30));
    const double truth[] = {15, 1.0, 0.6, 45.6};
    auto s = simulate_samples(spec, truth, 10, 640, 200, 4.9, 21);
    auto a = fit_model(s, spec, {.seed = 5, .threads = 1});
    auto b = fit_model(s, spec, {.seed = 5, .threads = 4});
    auto c = fit_model(s, spec, {.seed = 5, .threads = 1});
    CHECK(a.params == b.params);
    CHECK(a.params == c.params);
    CHECK(a.best_start == b.best_start);
    CHECK(a.rmse_db == b.rmse_db);
}

TEST_CASE("zero free parameters scores only")
{
    auto spec = default_spec(Model::hata);
    spec.init = {30.0, 1.8, 3.0};
    const double p[] = {30.0, 1.8, 3.0};
    auto s = simulate_samples(spec, p, 100, 600, 20, 1.0, 2);
    auto f = fit_model(s, spec);
    CHECK(f.converged);
    CHECK(f.params == spec.init);
    CHECK(f.rmse_db == doctest::Approx(rmse(p, spec, s)));
}
