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

namespace flcli {

namespace {

struct Curve {
    std::string label;
    int model = 0;
    std::vector<double> params;
    double sigma_db = 0.0;
};

std::vector<double> default_params(const RunConfig& cfg, int model, double elev)
{
    const ModelSpec spec(cfg.make_spec(model, elev));
    std::vector<double> p(static_cast<std::size_t>(fl_model_param_count(model)));
    for (std::size_t i = 0; i < p.size(); ++i)
        check(fl_model_spec_get_param(spec.get(), static_cast<int>(i), &p[i], nullptr, nullptr, nullptr));
    return p;
}

std::vector<Curve> published_for(const std::string& scenario, bool swap)
{
    std::vector<Curve> out;
    for (std::size_t i = 0; i < fl_model_preset_count(); ++i) {
        fl_model_preset m;
        check(fl_model_preset_get(i, swap ? 1 : 0, &m));
        if (scenario == m.scenario)
            out.push_back({m.label, m.model, {m.params, m.params + m.n_params}, m.sigma_db});
    }
    return out;
}

}  // namespace

void run_simulate(const RunConfig& cfg, const SimulateArgs& a)
{
    if (!(a.d_min > 0.0) || !(a.d_max > a.d_min) || a.points < 2)
        throw CliError(FL_ERR_DOMAIN, "need 0 < d_min < d_max and at least 2 points");

    int env = FL_ENV_OTHER, link = FL_LINK_G2G;
    double elev = a.elev_deg;
    std::vector<Curve> curves;
    if (!a.scenario.empty()) {
        fl_channel_preset c;
        check(fl_channel_preset_find(a.scenario.c_str(), &c));
        if (c.link < 0)
            throw CliError(FL_ERR_CONFIG, "scenario '" + a.scenario + "' has no fitted models");
        env = c.env;
        link = c.link;
        if (!a.elev_set)
            elev = c.elev_deg;
        const auto published = published_for(a.scenario, cfg.bhf_m_swap);
        if (a.models.empty()) {
            curves = published;
        } else {
            for (const auto& name : a.models) {
                const int m = model_index(name);
                bool found = false;
                for (const auto& p : published)
                    if (p.model == m) {
                        curves.push_back(p);
                        found = true;
                    }
                if (!found)
                    curves.push_back({name, m, default_params(cfg, m, elev), 0.0});
            }
        }
    } else {
        const std::vector<std::string> names =
            a.models.empty() ? std::vector<std::string>{"ci", "fspl_h", "bhf", "bhf_m", "sui"} : a.models;
        for (const auto& name : names) {
            const int m = model_index(name);
            curves.push_back({name, m, default_params(cfg, m, elev), 0.0});
        }
    }
    curves.insert(curves.begin(), Curve{"fspl", model_index("fspl"), {}, 0.0});

    std::string csv = "dist_m";
    for (const auto& c : curves)
        csv += "," + c.label;
    csv += "\n";
    auto g = cfg.base_geometry(elev);
    for (int i = 0; i < a.points; ++i) {
        g.dist_m = a.d_min + (a.d_max - a.d_min) * i / (a.points - 1);
        csv += csv_num(g.dist_m);
        for (const auto& c : curves) {
            double pl = 0.0;
            check(fl_pathloss_eval(c.model, &g, c.params.data(), c.params.size(), &cfg.model_options, &pl));
            csv += "," + csv_num(pl);
        }
        csv += "\n";
    }

    const OutputDir dir(cfg.output_dir);
    Json out;
    out["meta"] = run_meta(cfg, "simulate");
    out["scenario"] = a.scenario.empty() ? Json(nullptr) : Json(a.scenario);
    out["elev_deg"] = elev;
    out["curves"] = Json::array();
    for (const auto& c : curves) {
        Json p = Json::object();
        for (std::size_t i = 0; i < c.params.size(); ++i)
            p[fl_model_param_name(c.model, static_cast<int>(i))] = c.params[i];
        out["curves"].push_back({{"label", c.label}, {"model", fl_model_name(c.model)}, {"params", p}});
    }
    out["artifacts"] = {dir.write("curves.csv", csv)};

    if (a.samples > 0) {
        std::string name = a.sample_model;
        if (name.empty())
            name = a.scenario.empty() ? "ci" : (link == FL_LINK_A2G ? "fe2r_m" : "bhf_m");
        const int m = model_index(name);
        Curve src{name, m, default_params(cfg, m, elev), 0.0};
        if (!a.scenario.empty())
            for (const auto& c : curves)
                if (c.model == m && c.label != "fspl") {
                    src = c;
                    break;
                }
        const double sigma = a.sigma_db >= 0.0 ? a.sigma_db : src.sigma_db;
        const ModelSpec spec(cfg.make_spec(m, elev));
        const auto raw = make<Samples>([&](fl_samples** o) {
            return fl_simulate_samples(spec.get(), src.params.data(), src.params.size(), a.d_min, a.d_max, a.samples,
                                       sigma, cfg.seed, o);
        });
        // tag the rows with the scenario so fit can group them
        const auto tagged = make<Samples>([](fl_samples** o) { return fl_samples_create(o); });
        for (std::size_t i = 0; i < fl_samples_size(raw.get()); ++i) {
            fl_sample s;
            check(fl_samples_get(raw.get(), i, &s));
            s.env = env;
            s.link = link;
            s.has_elev = link == FL_LINK_A2G || a.elev_set ? 1 : 0;
            s.elev_deg = s.has_elev ? elev : 0.0;
            check(fl_samples_append(tagged.get(), &s));
        }
        const auto path = (dir.path() / "samples.csv").string();
        check(fl_samples_write_csv(tagged.get(), path.c_str()), path);
        Json p = Json::object();
        for (std::size_t i = 0; i < src.params.size(); ++i)
            p[fl_model_param_name(m, static_cast<int>(i))] = src.params[i];
        out["samples"] = {{"model", name}, {"label", src.label}, {"params", p}, {"n", a.samples},
                          {"sigma_db", sigma}, {"file", "samples.csv"}};
        out["artifacts"].push_back("samples.csv");
    }
    dir.write_json("simulate.json", out);
}

}  // namespace flcli
