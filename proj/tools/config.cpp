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

#include "config.hpp"

#include "common.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace flcli {

namespace {

struct Located {
    std::string where;
    long line;
};

[[noreturn]] void bad(const Located& at, const std::string& key, const std::string& msg)
{
    throw CliError(FL_ERR_CONFIG, key + ": " + msg, at.where, at.line);
}

std::string trim(std::string s)
{
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos)
        return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

double to_double(const std::string& v, const Located& at, const std::string& key)
{
    if (v == "inf" || v == "+inf")
        return std::numeric_limits<double>::infinity();
    if (v == "-inf")
        return -std::numeric_limits<double>::infinity();
    double x = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc{} || r.ptr != v.data() + v.size() || std::isnan(x))
        bad(at, key, "'" + v + "' is not a number");
    return x;
}

template <class I>
I to_int(const std::string& v, const Located& at, const std::string& key)
{
    I x{};
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc{} || r.ptr != v.data() + v.size())
        bad(at, key, "'" + v + "' is not an integer in range");
    return x;
}

bool to_bool(const std::string& v, const Located& at, const std::string& key)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    bad(at, key, "'" + v + "' is not a boolean");
}

int to_choice(const std::string& v, std::initializer_list<const char*> names, const Located& at, const std::string& key)
{
    int i = 0;
    std::string all;
    for (const char* n : names) {
        if (v == n)
            return i;
        all += (i ? "|" : "") + std::string(n);
        ++i;
    }
    bad(at, key, "'" + v + "' is not one of " + all);
}

std::string num(double v) { return fmt::format("{}", v); }
std::string yes(bool b) { return b ? "true" : "false"; }

struct Key {
    const char* name;
    const char* help;
    std::function<void(RunConfig&, const std::string&, const Located&)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define FL_DOUBLE(NAME, FIELD, HELP)                                                                          \
    Key{NAME, HELP, [](RunConfig& c, const std::string& v, const Located& at) { c.FIELD = to_double(v, at, NAME); }, \
        [](const RunConfig& c) { return num(c.FIELD); }}
#define FL_INT(NAME, FIELD, HELP)                                                                                   \
    Key{NAME, HELP,                                                                                                 \
        [](RunConfig& c, const std::string& v, const Located& at) { c.FIELD = to_int<decltype(c.FIELD)>(v, at, NAME); }, \
        [](const RunConfig& c) { return std::to_string(c.FIELD); }}

const std::vector<Key>& keys()
{
    static const std::vector<Key> k = {
        FL_DOUBLE("carrier_ghz", carrier_ghz, "carrier frequency in GHz"),
        FL_DOUBLE("rx_height_m", rx_height_m, "receiver antenna height"),
        FL_DOUBLE("veg_depth_m", veg_depth_m, "vegetation depth for the foliage excess models"),
        FL_INT("seed", seed, "master RNG seed"),
        FL_INT("threads", threads, "worker threads (0: all cores)"),
        Key{"output_dir", "directory for results",
            [](RunConfig& c, const std::string& v, const Located& at) {
                if (v.empty())
                    bad(at, "output_dir", "empty path");
                c.output_dir = v;
            },
            [](const RunConfig& c) { return c.output_dir; }},
        Key{"fe2r_z", "two-ray bias term reading: sqrt|ratio",
            [](RunConfig& c, const std::string& v, const Located& at) {
                c.model_options.fe2r_z_ratio = to_choice(v, {"sqrt", "ratio"}, at, "fe2r_z");
            },
            [](const RunConfig& c) { return std::string(c.model_options.fe2r_z_ratio ? "ratio" : "sqrt"); }},
        Key{"bhf_m_mode", "modified horizontal-forest model form: anchored|literal",
            [](RunConfig& c, const std::string& v, const Located& at) {
                c.model_options.bhf_m_literal = to_choice(v, {"anchored", "literal"}, at, "bhf_m_mode");
            },
            [](const RunConfig& c) { return std::string(c.model_options.bhf_m_literal ? "literal" : "anchored"); }},
        Key{"bhf_m_swap", "read the published BHF-M columns as n then alpha",
            [](RunConfig& c, const std::string& v, const Located& at) { c.bhf_m_swap = to_bool(v, at, "bhf_m_swap"); },
            [](const RunConfig& c) { return yes(c.bhf_m_swap); }},
        FL_INT("fit.n_starts", fit.n_starts, "extra multi-start points per fit"),
        FL_INT("fit.max_iter", fit.max_iter, "iteration cap per descent"),
        FL_INT("frame.n_fft", frame.n_fft, "FFT size"),
        FL_INT("frame.n_subcarriers", frame.n_subcarriers, "active subcarriers"),
        FL_DOUBLE("frame.scs_hz", frame.scs_hz, "subcarrier spacing"),
        FL_INT("frame.n_symbols", frame.n_symbols, "symbols per frame"),
        FL_INT("frame.cp_long", frame.cp_long, "long cyclic prefix"),
        FL_INT("frame.cp_short", frame.cp_short, "short cyclic prefix"),
        FL_DOUBLE("frame.fs_hz", frame.fs_hz, "sample rate"),
        Key{"frame.pilot_symbols", "the two pilot symbol indices, e.g. 3,10",
            [](RunConfig& c, const std::string& v, const Located& at) {
                const auto comma = v.find(',');
                if (comma == std::string::npos)
                    bad(at, "frame.pilot_symbols", "expected two comma separated indices");
                c.frame.pilot_symbols[0] = to_int<int>(trim(v.substr(0, comma)), at, "frame.pilot_symbols");
                c.frame.pilot_symbols[1] = to_int<int>(trim(v.substr(comma + 1)), at, "frame.pilot_symbols");
            },
            [](const RunConfig& c) {
                return std::to_string(c.frame.pilot_symbols[0]) + "," + std::to_string(c.frame.pilot_symbols[1]);
            }},
        FL_INT("frame.capture_len", frame.capture_len, "samples per capture"),
        FL_INT("frame.timing_advance", frame.timing_advance, "FFT window advance into the cyclic prefix"),
        FL_INT("zc.root", frame.zc_root, "Zadoff-Chu root"),
        FL_INT("zc.length", frame.zc_length, "Zadoff-Chu length"),
        FL_INT("peak.min_spacing", peak.min_spacing_samples, "minimum tap spacing in samples"),
        Key{"peak.noise_floor", "noise floor estimate: trailing|percentile",
            [](RunConfig& c, const std::string& v, const Located& at) {
                c.peak.noise_floor_method = to_choice(v, {"trailing", "percentile"}, at, "peak.noise_floor");
            },
            [](const RunConfig& c) {
                return std::string(c.peak.noise_floor_method == FL_FLOOR_TRAILING ? "trailing" : "percentile");
            }},
        FL_DOUBLE("peak.trailing_fraction", peak.trailing_fraction, "CIR tail share used by the trailing floor"),
        FL_DOUBLE("peak.noise_percentile", peak.noise_percentile, "percentile used by the percentile floor"),
        FL_DOUBLE("peak.noise_margin_db", peak.noise_margin_db, "threshold above the noise floor"),
        FL_DOUBLE("peak.rel_threshold_db", peak.rel_threshold_db, "threshold below the strongest tap"),
        Key{"peak.los_mode", "LoS tap for K: first|strongest",
            [](RunConfig& c, const std::string& v, const Located& at) {
                c.peak.los_mode = to_choice(v, {"first", "strongest"}, at, "peak.los_mode");
            },
            [](const RunConfig& c) { return std::string(c.peak.los_mode == FL_LOS_FIRST ? "first" : "strongest"); }},
        Key{"peak.kernel", "fit the sounder pulse instead of picking raw maxima",
            [](RunConfig& c, const std::string& v, const Located& at) { c.peak.use_kernel = to_bool(v, at, "peak.kernel"); },
            [](const RunConfig& c) { return yes(c.peak.use_kernel != 0); }},
        FL_INT("peak.max_atoms", peak.max_atoms, "tap limit of the pulse fit"),
        FL_DOUBLE("peak.prune_factor", peak.prune_factor, "pruning strength of the pulse fit"),
        FL_DOUBLE("sync_margin", sync_margin, "required correlation peak ratio"),
        FL_DOUBLE("snr_db", snr_db, "receiver SNR for simulated captures (inf: noiseless)"),
        FL_INT("lead_in", lead_in, "zero samples before the preamble in simulated captures"),
        FL_DOUBLE("iq_peak", iq_peak, "largest |I| or |Q| of written captures"),
    };
    return k;
}

#undef FL_DOUBLE
#undef FL_INT

// "<prefix>.<model>.<param>" -> (model index, param index)
std::pair<int, int> param_key(const std::string& key, std::size_t prefix, const Located& at)
{
    const auto rest = key.substr(prefix);
    const auto dot = rest.find('.');
    if (dot == std::string::npos)
        bad(at, key, "expected <model>.<param>");
    int model = -1;
    if (fl_model_from_name(rest.substr(0, dot).c_str(), &model) != FL_OK)
        bad(at, key, "unknown model '" + rest.substr(0, dot) + "'");
    const auto pname = rest.substr(dot + 1);
    for (int i = 0; i < fl_model_param_count(model); ++i)
        if (pname == fl_model_param_name(model, i))
            return {model, i};
    bad(at, key, "model has no parameter '" + pname + "'");
}

}  // namespace

RunConfig::RunConfig()
{
    fl_frame_config_default(&frame);
    fl_peak_config_default(&peak);
    fl_fit_options_default(&fit);
}

void RunConfig::set(const std::string& key_in, const std::string& value_in, const std::string& where, long line)
{
    const auto key = trim(key_in);
    const auto value = trim(value_in);
    const Located at{where, line};
    for (const auto& k : keys())
        if (key == k.name) {
            k.set(*this, value, at);
            return;
        }
    for (const std::string prefix : {"bounds.", "init.", "fixed."}) {
        if (key.rfind(prefix, 0) != 0)
            continue;
        const auto [model, index] = param_key(key, prefix.size(), at);
        auto& o = params[std::string(fl_model_name(model)) + "." + fl_model_param_name(model, index)];
        if (prefix == "bounds.") {
            const auto comma = value.find(',');
            if (comma == std::string::npos)
                bad(at, key, "expected lower,upper");
            o.lower = to_double(trim(value.substr(0, comma)), at, key);
            o.upper = to_double(trim(value.substr(comma + 1)), at, key);
            if (!(o.lower < o.upper))
                bad(at, key, "lower bound must be below the upper bound");
            o.has_bounds = true;
        } else {
            o.init = to_double(value, at, key);
            o.has_init = true;
            o.fixed = prefix == "fixed.";
        }
        return;
    }
    bad(at, key, "unknown configuration key");
}

void RunConfig::load_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CliError(FL_ERR_IO, "cannot open configuration file", path);
    std::string text;
    long line_no = 0;
    while (std::getline(in, text)) {
        ++line_no;
        if (line_no == 1 && text.rfind("\xEF\xBB\xBF", 0) == 0)
            text.erase(0, 3);
        const auto hash = text.find('#');
        if (hash != std::string::npos)
            text.erase(hash);
        if (trim(text).empty())
            continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw CliError(FL_ERR_CONFIG, "expected key = value", path, line_no);
        set(text.substr(0, eq), text.substr(eq + 1), path, line_no);
    }
}

void RunConfig::validate() const
{
    const Located at{"<config>", 0};
    if (!(carrier_ghz > 0.0) || !std::isfinite(carrier_ghz))
        bad(at, "carrier_ghz", "must be positive");
    if (!(rx_height_m > 0.0) || !std::isfinite(rx_height_m))
        bad(at, "rx_height_m", "must be positive");
    if (!(veg_depth_m >= 0.0) || !std::isfinite(veg_depth_m))
        bad(at, "veg_depth_m", "must be non-negative");
    if (threads > 256)
        bad(at, "threads", "at most 256");
    if (fit.n_starts < 0 || fit.max_iter < 1)
        bad(at, "fit.n_starts", "n_starts must be >= 0 and max_iter >= 1");
    if (!(sync_margin > 1.0) || !std::isfinite(sync_margin))
        bad(at, "sync_margin", "must exceed 1");
    if (snr_db == -std::numeric_limits<double>::infinity())
        bad(at, "snr_db", "must be finite or inf");
    if (lead_in < 0)
        bad(at, "lead_in", "must be non-negative");
    if (!(iq_peak > 0.0 && iq_peak < 1.0))
        bad(at, "iq_peak", "must lie in (0, 1)");
    int frame_len = 0;
    if (fl_frame_numerology(&frame, &frame_len, 0, nullptr) != FL_OK)
        bad(at, "frame", fl_last_error_message());
    if (fl_peak_config_check(&peak) != FL_OK)
        bad(at, "peak", fl_last_error_message());
    for (const auto& [name, o] : params) {
        int model = -1;
        fl_model_from_name(name.substr(0, name.find('.')).c_str(), &model);
        ModelSpec spec(make_spec(model));
    }
}

std::string RunConfig::canonical() const
{
    std::vector<std::string> lines;
    for (const auto& k : keys())
        lines.push_back(std::string(k.name) + "=" + k.get(*this));
    for (const auto& [name, o] : params) {
        if (o.has_bounds)
            lines.push_back("bounds." + name + "=" + num(o.lower) + "," + num(o.upper));
        if (o.has_init)
            lines.push_back((o.fixed ? "fixed." : "init.") + name + "=" + num(o.init));
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines)
        out += l + "\n";
    return out;
}

std::uint64_t fnv1a64(const std::string& s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string RunConfig::hash() const
{
    // threads and output_dir do not change any result
    std::istringstream in(canonical());
    std::string line, text;
    while (std::getline(in, line))
        if (line.rfind("threads=", 0) != 0 && line.rfind("output_dir=", 0) != 0)
            text += line + "\n";
    return fmt::format("{:016x}", fnv1a64(text));
}

fl_geometry RunConfig::base_geometry(double elev_deg) const
{
    fl_geometry g;
    fl_geometry_default(&g);
    g.freq_ghz = carrier_ghz;
    g.rx_height_m = rx_height_m;
    g.veg_depth_m = veg_depth_m;
    g.elev_deg = elev_deg;
    return g;
}

fl_model_spec* RunConfig::make_spec(int model, double elev_deg) const
{
    const auto g = base_geometry(elev_deg);
    auto spec = make<ModelSpec>([&](fl_model_spec** o) { return fl_model_spec_create(model, &g, &model_options, o); });
    const std::string mname = fl_model_name(model);
    for (int i = 0; i < fl_model_param_count(model); ++i) {
        const auto it = params.find(mname + "." + fl_model_param_name(model, i));
        if (it == params.end())
            continue;
        const auto& o = it->second;
        double init = 0, lo = 0, hi = 0;
        int is_free = 1;
        check(fl_model_spec_get_param(spec.get(), i, &init, &lo, &hi, &is_free));
        if (o.has_bounds) {
            lo = o.lower;
            hi = o.upper;
            init = std::clamp(init, lo, hi);
        }
        if (o.has_init)
            init = o.init;
        if (o.fixed) {
            is_free = 0;
            lo = std::min(lo, init);
            hi = std::max(hi, init);
        }
        if (fl_model_spec_set_param(spec.get(), i, init, lo, hi, is_free) != FL_OK)
            throw CliError(FL_ERR_CONFIG, mname + "." + fl_model_param_name(model, i) + ": " + fl_last_error_message(),
                           "<config>");
    }
    return spec.release();
}

std::vector<KeyDoc> documented_keys()
{
    std::vector<KeyDoc> out;
    for (const auto& k : keys())
        out.push_back({k.name, k.help});
    out.push_back({"bounds.<model>.<param>", "fit bounds as lower,upper"});
    out.push_back({"init.<model>.<param>", "fit starting value"});
    out.push_back({"fixed.<model>.<param>", "hold a parameter at this value"});
    return out;
}

}  // namespace flcli
