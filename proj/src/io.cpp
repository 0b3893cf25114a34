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

#include "io.hpp"

#include "error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <unistd.h>

namespace forestlink::io {

namespace {

[[noreturn]] void parse_fail(const std::string& source, long line, const std::string& what)
{
    throw Error(ErrorCode::parse, fmt::format("{}:{}: {}", source, line, what), source, line);
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

// Lines with their 1-based numbers; a UTF-8 BOM and CR before LF are dropped.
std::vector<std::pair<long, std::string_view>> lines_of(std::string_view text)
{
    if (text.starts_with("\xEF\xBB\xBF"))
        text.remove_prefix(3);
    std::vector<std::pair<long, std::string_view>> out;
    long no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        ++no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        out.emplace_back(no, line);
        if (nl == std::string_view::npos)
            break;
        text.remove_prefix(nl + 1);
    }
    return out;
}

std::vector<std::string_view> split_csv(std::string_view line)
{
    std::vector<std::string_view> f;
    for (;;) {
        const auto c = line.find(',');
        f.push_back(trim(line.substr(0, c)));
        if (c == std::string_view::npos)
            return f;
        line.remove_prefix(c + 1);
    }
}

std::optional<double> to_double(std::string_view s)
{
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end || !std::isfinite(v))
        return std::nullopt;
    return v;
}

double number(std::string_view s, const std::string& source, long line, std::string_view column)
{
    const auto v = to_double(s);
    if (!v)
        parse_fail(source, line, fmt::format("column {}: '{}' is not a finite number", column, s));
    return *v;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::pair<long, std::vector<std::string_view>>> rows;

    int column(std::string_view name) const
    {
        const auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : static_cast<int>(it - header.begin());
    }
};

// Blank lines and lines starting with '#' are skipped.
Table read_table(std::string_view text, const std::string& source, std::span<const std::string_view> required,
                 std::span<const std::string_view> optional_cols)
{
    Table t;
    bool have_header = false;
    for (auto [no, raw] : lines_of(text)) {
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        auto fields = split_csv(line);
        if (!have_header) {
            for (auto f : fields) {
                const bool known = std::find(required.begin(), required.end(), f) != required.end() ||
                                   std::find(optional_cols.begin(), optional_cols.end(), f) != optional_cols.end();
                if (!known)
                    parse_fail(source, no, fmt::format("unknown column '{}'", f));
                if (std::find(t.header.begin(), t.header.end(), f) != t.header.end())
                    parse_fail(source, no, fmt::format("duplicate column '{}'", f));
                t.header.emplace_back(f);
            }
            for (auto r : required)
                if (t.column(r) < 0)
                    parse_fail(source, no, fmt::format("missing column '{}'", r));
            have_header = true;
            continue;
        }
        if (fields.size() != t.header.size())
            parse_fail(source, no, fmt::format("expected {} fields, got {}", t.header.size(), fields.size()));
        t.rows.emplace_back(no, std::move(fields));
    }
    if (!have_header)
        fail(ErrorCode::arity, fmt::format("{}: no header", source));
    return t;
}

std::string path_name(const std::filesystem::path& p) { return p.string(); }

}  // namespace

std::string format_double(double v) { return fmt::format("{}", v); }

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::io, fmt::format("cannot open {}", path_name(path)), path_name(path));
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw Error(ErrorCode::io, fmt::format("read error on {}", path_name(path)), path_name(path));
    return ss.str();
}

void write_text_atomic(const std::filesystem::path& path, std::string_view text)
{
    static std::atomic<unsigned> counter{0};
    auto tmp = path;
    tmp += fmt::format(".tmp{}.{}", static_cast<long>(::getpid()), counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorCode::io, fmt::format("cannot create {}", path_name(tmp)), path_name(path));
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error(ErrorCode::io, fmt::format("write error on {}", path_name(tmp)), path_name(path));
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::io, fmt::format("cannot move {} into place", path_name(path)), path_name(path));
    }
}

// ---- path loss ----------------------------------------------------------

std::vector<fit::PathLossSample> parse_pathloss_csv(std::string_view text, const std::string& source)
{
    static constexpr std::string_view req[] = {"dist_m", "pl_db"};
    static constexpr std::string_view opt[] = {"elev_deg", "env", "link"};
    const auto t = read_table(text, source, req, opt);
    const int cd = t.column("dist_m"), cp = t.column("pl_db"), ce = t.column("elev_deg"), cv = t.column("env"),
              cl = t.column("link");
    std::vector<fit::PathLossSample> out;
    out.reserve(t.rows.size());
    for (const auto& [no, f] : t.rows) {
        fit::PathLossSample s;
        s.dist_m = number(f[static_cast<std::size_t>(cd)], source, no, "dist_m");
        if (!(s.dist_m > 0.0))
            parse_fail(source, no, fmt::format("dist_m must be positive, got {}", f[static_cast<std::size_t>(cd)]));
        s.pl_db = number(f[static_cast<std::size_t>(cp)], source, no, "pl_db");
        if (ce >= 0 && !f[static_cast<std::size_t>(ce)].empty()) {
            s.elev_deg = number(f[static_cast<std::size_t>(ce)], source, no, "elev_deg");
            if (*s.elev_deg < 0.0 || *s.elev_deg > 90.0)
                parse_fail(source, no, "elev_deg must lie in [0, 90]");
        }
        if (cv >= 0 && !f[static_cast<std::size_t>(cv)].empty()) {
            const auto e = fit::env_from_name(f[static_cast<std::size_t>(cv)]);
            if (!e)
                parse_fail(source, no, fmt::format("unknown env '{}'", f[static_cast<std::size_t>(cv)]));
            s.env = *e;
        }
        if (cl >= 0 && !f[static_cast<std::size_t>(cl)].empty()) {
            const auto l = fit::link_from_name(f[static_cast<std::size_t>(cl)]);
            if (!l)
                parse_fail(source, no, fmt::format("unknown link '{}'", f[static_cast<std::size_t>(cl)]));
            s.link = *l;
        }
        out.push_back(s);
    }
    if (out.empty())
        fail(ErrorCode::arity, fmt::format("{}: no samples", source));
    return out;
}

std::string format_pathloss_csv(std::span<const fit::PathLossSample> samples)
{
    std::string out = "dist_m,pl_db,elev_deg,env,link\n";
    for (const auto& s : samples)
        out += fmt::format("{},{},{},{},{}\n", format_double(s.dist_m), format_double(s.pl_db),
                           s.elev_deg ? format_double(*s.elev_deg) : std::string{}, fit::env_name(s.env),
                           fit::link_name(s.link));
    return out;
}

std::vector<fit::PathLossSample> read_pathloss_csv(const std::filesystem::path& path)
{
    return parse_pathloss_csv(read_text(path), path_name(path));
}

void write_pathloss_csv(const std::filesystem::path& path, std::span<const fit::PathLossSample> samples)
{
    write_text_atomic(path, format_pathloss_csv(samples));
}

// ---- IQ hex -------------------------------------------------------------

ofdm::SampleStream parse_iq_hex(std::string_view text, double fs_hz, const std::string& source)
{
    ofdm::SampleStream s;
    s.fs_hz = fs_hz;
    s.origin = ofdm::Origin::rx;
    std::vector<double> words;
    std::size_t pos = 0;
    long line = 1;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (pos < text.size()) {
        if (is_space(text[pos])) {
            line += text[pos] == '\n' ? 1 : 0;
            ++pos;
            continue;
        }
        const std::size_t start = pos;
        while (pos < text.size() && !is_space(text[pos]))
            ++pos;
        const auto tok = text.substr(start, pos - start);
        unsigned v = 0;
        const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v, 16);
        if (tok.size() != 4 || ec != std::errc{} || p != tok.data() + tok.size())
            throw Error(ErrorCode::parse,
                        fmt::format("{}: byte offset {}: '{}' is not a 4-digit hex word", source, start, tok), source,
                        line);
        const int code = v >= 0x8000u ? static_cast<int>(v) - 0x10000 : static_cast<int>(v);
        words.push_back(static_cast<double>(code) / iq_scale);
    }
    if (words.size() % 2 != 0)
        throw Error(ErrorCode::parse,
                    fmt::format("{}: byte offset {}: odd number of hex words ({})", source, text.size(), words.size()),
                    source, line);
    s.samples.reserve(words.size() / 2);
    for (std::size_t i = 0; i < words.size(); i += 2)
        s.samples.emplace_back(words[i], words[i + 1]);
    return s;
}

std::string format_iq_hex(std::span<const cplx> samples)
{
    auto code = [](double x) {
        if (!std::isfinite(x))
            fail(ErrorCode::domain, "cannot quantise a non-finite sample");
        const double q = std::clamp(std::round(x * iq_scale), -32768.0, 32767.0);
        return static_cast<unsigned>(static_cast<int>(q) & 0xFFFF);
    };
    std::string out;
    out.reserve(samples.size() * 10);
    for (const auto& v : samples)
        out += fmt::format("{:04X} {:04X}\n", code(v.real()), code(v.imag()));
    return out;
}

ofdm::SampleStream read_iq_hex(const std::filesystem::path& path, double fs_hz)
{
    return parse_iq_hex(read_text(path), fs_hz, path_name(path));
}

void write_iq_hex(const std::filesystem::path& path, std::span<const cplx> samples)
{
    write_text_atomic(path, format_iq_hex(samples));
}

// ---- sweeps -------------------------------------------------------------

angular::SectorSweep parse_sweep_csv(std::string_view text, const std::string& source)
{
    static constexpr std::string_view req[] = {"azimuth_deg", "rssi_dbm"};
    const auto t = read_table(text, source, req, {});
    const int ca = t.column("azimuth_deg"), cr = t.column("rssi_dbm");
    angular::SectorSweep s;
    s.unit = angular::SweepUnit::dbm;
    for (const auto& [no, f] : t.rows)
        s.sectors.push_back({number(f[static_cast<std::size_t>(ca)], source, no, "azimuth_deg"),
                             number(f[static_cast<std::size_t>(cr)], source, no, "rssi_dbm")});
    if (s.sectors.size() != static_cast<std::size_t>(angular::n_sectors))
        fail(ErrorCode::arity,
             fmt::format("{}: a sweep needs {} rows, got {}", source, angular::n_sectors, s.sectors.size()));
    return s;
}

std::string format_sweep_csv(const angular::SectorSweep& sweep)
{
    if (sweep.unit != angular::SweepUnit::dbm)
        fail(ErrorCode::domain, "sweep CSV stores dBm readings");
    std::string out = "azimuth_deg,rssi_dbm\n";
    for (const auto& s : sweep.sectors)
        out += fmt::format("{},{}\n", format_double(s.azimuth_deg), format_double(s.value));
    return out;
}

angular::SectorSweep read_sweep_csv(const std::filesystem::path& path)
{
    return parse_sweep_csv(read_text(path), path_name(path));
}

// ---- profiles -----------------------------------------------------------

MultipathProfile parse_profile_csv(std::string_view text, const std::string& source)
{
    static constexpr std::string_view req[] = {"delay_ns", "amp_re", "amp_im", "class"};
    const auto t = read_table(text, source, req, {});
    const int cd = t.column("delay_ns"), cr = t.column("amp_re"), ci = t.column("amp_im"), cc = t.column("class");
    MultipathProfile p;
    int n_los = 0;
    for (const auto& [no, f] : t.rows) {
        Tap tap;
        tap.delay_s = number(f[static_cast<std::size_t>(cd)], source, no, "delay_ns") * 1e-9;
        tap.amp = {number(f[static_cast<std::size_t>(cr)], source, no, "amp_re"),
                   number(f[static_cast<std::size_t>(ci)], source, no, "amp_im")};
        const auto cls = tap_class_from_name(f[static_cast<std::size_t>(cc)]);
        if (!cls)
            parse_fail(source, no, fmt::format("unknown tap class '{}'", f[static_cast<std::size_t>(cc)]));
        tap.cls = *cls;
        if (tap.delay_s < 0.0)
            parse_fail(source, no, "delay_ns must be non-negative");
        switch (tap.cls) {
        case TapClass::los:
            if (++n_los > 1)
                parse_fail(source, no, "more than one los tap");
            p.los = tap;
            break;
        case TapClass::cluster: p.cluster.push_back(tap); break;
        case TapClass::scatter: p.scatter.push_back(tap); break;
        }
    }
    if (n_los != 1)
        fail(ErrorCode::arity, fmt::format("{}: a profile needs exactly one los tap", source));
    p.validate();
    return p;
}

std::string format_profile_csv(const MultipathProfile& profile)
{
    std::string out = "delay_ns,amp_re,amp_im,class\n";
    for (const auto& t : profile.taps())
        out += fmt::format("{},{},{},{}\n", format_double(t.delay_s * 1e9), format_double(t.amp.real()),
                           format_double(t.amp.imag()), tap_class_name(t.cls));
    return out;
}

MultipathProfile read_profile_csv(const std::filesystem::path& path)
{
    return parse_profile_csv(read_text(path), path_name(path));
}

void write_profile_csv(const std::filesystem::path& path, const MultipathProfile& profile)
{
    write_text_atomic(path, format_profile_csv(profile));
}

}  // namespace forestlink::io
