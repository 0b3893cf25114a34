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

#include "common.hpp"
#include "verbs.hpp"

#include <fmt/format.h>

#include <map>

namespace flcli {

namespace {

struct Group {
    std::string key;
    int link = FL_LINK_G2G;
    double elev_deg = 0.0;
    Samples samples;
};

std::vector<std::string> default_models(int link)
{
    if (link == FL_LINK_A2G)
        return {"ci", "fspl_s", "fe2r_m"};
    return {"ci", "fspl_h", "bhf", "bhf_m", "sui"};
}

}  // namespace

void run_fit(const RunConfig& cfg, const FitArgs& a)
{
    const auto all = make<Samples>([&](fl_samples** o) { return fl_samples_read_csv(a.input.c_str(), o); }, a.input);

    // std::map keeps the groups in key order
    std::map<std::string, Group> groups;
    for (std::size_t i = 0; i < fl_samples_size(all.get()); ++i) {
        fl_sample s;
        check(fl_samples_get(all.get(), i, &s));
        const auto key = a.split ? scenario_key(s.env, s.link, s.has_elev != 0, s.elev_deg) : std::string("all");
        auto& g = groups[key];
        if (!g.samples) {
            g.key = key;
            g.link = s.link;
            g.elev_deg = s.has_elev ? s.elev_deg : 0.0;
            g.samples = make<Samples>([](fl_samples** o) { return fl_samples_create(o); });
        }
        check(fl_samples_append(g.samples.get(), &s));
    }

    Json out;
    out["meta"] = run_meta(cfg, "fit");
    out["input"] = std::filesystem::path(a.input).filename().string();
    out["groups"] = Json::array();
    std::string table = "scenario,model,n_samples,rmse_db,shadow_mu_db,shadow_sigma_db,converged,params\n";
    std::string resid = "scenario,model,dist_m,pl_db,fitted_db,residual_db\n";

    for (const auto& [key, g] : groups) {
        Json gj;
        gj["scenario"] = key;
        gj["n_samples"] = fl_samples_size(g.samples.get());
        gj["models"] = Json::array();
        const auto models = a.models.empty() ? default_models(g.link) : a.models;
        for (const auto& name : models) {
            const int model = model_index(name);
            const ModelSpec spec(cfg.make_spec(model, g.elev_deg));
            const auto fitted = make<Fit>([&](fl_fit** o) { return fl_fit_run(g.samples.get(), spec.get(), &cfg.fit, o); });
            fl_fit_summary sum;
            check(fl_fit_get_summary(fitted.get(), &sum));
            std::vector<double> params(static_cast<std::size_t>(fl_model_param_count(model)));
            check(fl_fit_get_params(fitted.get(), params.data(), params.size(), nullptr));
            const std::size_t n = fl_samples_size(g.samples.get());
            std::vector<double> r(n);
            check(fl_fit_residuals(fitted.get(), g.samples.get(), r.data(), r.size()));
            fl_normal nf;
            check(fl_fit_normal(r.data(), r.size(), &nf));

            Json mj;
            mj["model"] = name;
            Json pj = Json::object();
            std::string plist;
            for (std::size_t i = 0; i < params.size(); ++i) {
                const char* pname = fl_model_param_name(model, static_cast<int>(i));
                pj[pname] = params[i];
                plist += fmt::format("{}{}={}", i ? " " : "", pname, params[i]);
            }
            mj["params"] = pj;
            mj["rmse_db"] = sum.rmse_db;
            mj["converged"] = sum.converged != 0;
            mj["iterations"] = sum.iterations;
            mj["best_start"] = sum.best_start;
            mj["shadow"] = {{"mu_db", nf.mu},
                            {"sigma_db", nf.sigma},
                            {"fit_err_pct", nf.fit_err_defined ? json_num(nf.fit_err_pct) : Json(nullptr)},
                            {"bins", nf.bins}};
            gj["models"].push_back(mj);

            table += fmt::format("{},{},{},{},{},{},{},{}\n", key, name, n, csv_num(sum.rmse_db), csv_num(nf.mu),
                                 csv_num(nf.sigma), sum.converged ? "true" : "false", plist);
            for (std::size_t i = 0; i < n; ++i) {
                fl_sample s;
                check(fl_samples_get(g.samples.get(), i, &s));
                resid += fmt::format("{},{},{},{},{},{}\n", key, name, csv_num(s.dist_m), csv_num(s.pl_db),
                                     csv_num(s.pl_db - r[i]), csv_num(r[i]));
            }
        }
        out["groups"].push_back(gj);
    }

    const OutputDir dir(cfg.output_dir);
    out["artifacts"] = {dir.write("fit.csv", table), dir.write("fit_residuals.csv", resid)};
    dir.write_json("fit.json", out);
}

}  // namespace flcli
