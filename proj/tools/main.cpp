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
#include "config.hpp"
#include "output.hpp"
#include "verbs.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>

using namespace flcli;

namespace {

void print_error(const std::string& verb, int status, const std::string& message, const std::string& file, long line)
{
    Json e;
    e["verb"] = verb.empty() ? Json(nullptr) : Json(verb);
    e["code"] = status_name(status);
    e["status"] = status;
    e["message"] = message;
    e["file"] = file.empty() ? Json(nullptr) : Json(file);
    e["line"] = line > 0 ? Json(line) : Json(nullptr);
    std::cerr << Json{{"error", e}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"forestlink: forest radio channel modelling and sounding toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(fl_version()));

    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    app.add_option("--config", config_path, "key=value configuration file (default: $FOREST_LINK_CONFIG)");
    app.add_option("--set", sets, "override one configuration key, KEY=VALUE")->allow_extra_args(false);
    auto* out_opt = app.add_option("-o,--out", out_dir, "output directory (config key output_dir)");
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed (config key seed)");
    auto* threads_opt = app.add_option("--threads", threads, "worker threads (config key threads)");

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "fit path-loss models to a measurement CSV");
    fit_cmd->add_option("-i,--input", fit.input, "CSV with dist_m,pl_db[,elev_deg,env,link]")->required();
    fit_cmd->add_option("-m,--models", fit.models, "model names (default per link type)")->delimiter(',');
    fit_cmd->add_flag("!--no-split", fit.split, "fit all rows together instead of per env/link/elevation");

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "path-loss curves and synthetic sample sets");
    sim_cmd->add_option("-m,--models", sim.models, "model names")->delimiter(',');
    sim_cmd->add_option("-s,--scenario", sim.scenario, "use the published parameters of a scenario, e.g. larch-g2g");
    sim_cmd->add_option("--d-min", sim.d_min, "smallest distance (m)");
    sim_cmd->add_option("--d-max", sim.d_max, "largest distance (m)");
    sim_cmd->add_option("--points", sim.points, "curve points");
    auto* elev_opt = sim_cmd->add_option("--elev", sim.elev_deg, "elevation angle (deg)");
    sim_cmd->add_option("-n,--samples", sim.samples, "synthetic samples to draw (0: none)");
    sim_cmd->add_option("--sample-model", sim.sample_model, "model for the synthetic samples");
    sim_cmd->add_option("--sigma", sim.sigma_db, "shadowing standard deviation (dB)");

    SoundArgs snd;
    double sound_snr = 0.0;
    auto* snd_cmd = app.add_subcommand("sound", "simulate one capture and run the sounding chain");
    snd_cmd->add_option("-s,--scenario", snd.scenario, "statistics preset for the synthesized profile");
    auto* prof_opt = snd_cmd->add_option("-p,--profile", snd.profile, "profile CSV instead of a synthesized one");
    auto* k_opt = snd_cmd->add_option("--k-db", snd.k_db, "fixed Rician K (dB)");
    auto* ds_opt = snd_cmd->add_option("--ds-ns", snd.ds_ns, "fixed RMS delay spread (ns)");
    k_opt->needs(ds_opt);
    ds_opt->needs(k_opt);
    auto* sv_opt = snd_cmd->add_flag("--sv", snd.sv, "clustered Saleh-Valenzuela profile");
    prof_opt->excludes(k_opt)->excludes(sv_opt);
    sv_opt->excludes(k_opt);
    auto* snd_snr = snd_cmd->add_option("--snr-db", sound_snr, "receiver SNR (config key snr_db)");

    ExtractArgs ext;
    double extract_snr = 0.0;
    auto* ext_cmd = app.add_subcommand("extract", "delay spread and K over a batch of captures");
    ext_cmd->add_option("-c,--captures", ext.captures, "hex capture files or directories");
    ext_cmd->add_option("--synth", ext.synth, "synthesize this many captures instead");
    ext_cmd->add_option("-s,--scenario", ext.scenario, "statistics preset for --synth");
    auto* ext_snr = ext_cmd->add_option("--snr-db", extract_snr, "receiver SNR for --synth (config key snr_db)");

    AngularArgs ang;
    auto* ang_cmd = app.add_subcommand("angular", "angular power spectrum and spread from sector sweeps");
    ang_cmd->add_option("sweeps", ang.sweeps, "sweep CSV files (azimuth_deg,rssi_dbm)")->required();

    ReportArgs rep;
    auto* rep_cmd = app.add_subcommand("report", "bundle verb results and draw plots");
    rep_cmd->add_option("--from", rep.from, "directory holding earlier results (default: output_dir)");

    bool list_keys = false;
    auto* cfg_cmd = app.add_subcommand("config", "print the effective configuration and its hash");
    cfg_cmd->add_flag("--keys", list_keys, "list the documented keys");

    std::string verb;
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        print_error({}, status_usage, e.what(), {}, 0);
        return 2;
    }
    for (auto* sub : app.get_subcommands())
        verb = sub->get_name();

    try {
        RunConfig cfg;
        if (config_path.empty())
            if (const char* env = std::getenv("FOREST_LINK_CONFIG"); env && *env)
                config_path = env;
        if (!config_path.empty())
            cfg.load_file(config_path);
        for (std::size_t i = 0; i < sets.size(); ++i) {
            const auto eq = sets[i].find('=');
            if (eq == std::string::npos)
                throw CliError(FL_ERR_CONFIG, "--set expects KEY=VALUE", "<--set>", static_cast<long>(i + 1));
            cfg.set(sets[i].substr(0, eq), sets[i].substr(eq + 1), "<--set>", static_cast<long>(i + 1));
        }
        if (*out_opt)
            cfg.output_dir = out_dir;
        if (*seed_opt)
            cfg.seed = seed;
        if (*threads_opt)
            cfg.threads = threads;
        if (*snd_snr)
            cfg.snr_db = sound_snr;
        if (*ext_snr)
            cfg.snr_db = extract_snr;
        cfg.validate();

        if (*fit_cmd) {
            run_fit(cfg, fit);
        } else if (*sim_cmd) {
            sim.elev_set = elev_opt->count() > 0;
            run_simulate(cfg, sim);
        } else if (*snd_cmd) {
            snd.fixed_stats = k_opt->count() > 0;
            run_sound(cfg, snd);
        } else if (*ext_cmd) {
            run_extract(cfg, ext);
        } else if (*ang_cmd) {
            run_angular(cfg, ang);
        } else if (*rep_cmd) {
            run_report(cfg, rep);
        } else if (*cfg_cmd) {
            if (list_keys) {
                for (const auto& k : documented_keys())
                    std::cout << k.key << "\t" << k.help << "\n";
            } else {
                std::cout << cfg.canonical() << "# hash " << cfg.hash() << "\n";
            }
        }
    } catch (const CliError& e) {
        print_error(verb, e.status(), e.what(), e.file(), e.line());
        return exit_code_for(e.status());
    } catch (const std::exception& e) {
        print_error(verb, FL_ERR_INTERNAL, e.what(), {}, 0);
        return 3;
    }
    return 0;
}
