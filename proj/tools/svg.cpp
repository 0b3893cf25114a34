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

#include "svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace flcli::svg {

namespace {

constexpr double width = 760, height = 460;
constexpr double left = 70, right = 170, top = 40, bottom = 55;
constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string esc(const std::string& s)
{
    std::string o;
    for (char c : s) {
        switch (c) {
        case '&': o += "&amp;"; break;
        case '<': o += "&lt;"; break;
        case '>': o += "&gt;"; break;
        case '"': o += "&quot;"; break;
        default: o += c;
        }
    }
    return o;
}

const char* colour(std::size_t i) { return palette[i % std::size(palette)]; }

double nice_step(double span)
{
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
        if (raw <= m * mag)
            return m * mag;
    return 10.0 * mag;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v)
    {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void settle()
    {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        } else if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

std::string header(const std::string& title)
{
    return fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
                       "font-family=\"sans-serif\" font-size=\"12\">\n"
                       "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
                       "<text x=\"{2}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{3}</text>\n",
                       width, height, width / 2, esc(title));
}

// Plot frame, grid, ticks and axis labels.
std::string frame(const Axes& a, const Range& xr, const Range& yr)
{
    const double pw = width - left - right, ph = height - top - bottom;
    std::string s = fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n",
                                left, top, pw, ph);
    auto fx = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto fy = [&](double y) { return top + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };
    const double xs = nice_step(xr.hi - xr.lo), ys = nice_step(yr.hi - yr.lo);
    for (double x = std::ceil(xr.lo / xs) * xs; x <= xr.hi + 1e-9 * xs; x += xs)
        s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"#ddd\"/>"
                         "<text x=\"{0:.2f}\" y=\"{3}\" text-anchor=\"middle\">{4:g}</text>\n",
                         fx(x), top, top + ph, top + ph + 16, std::abs(x) < 1e-12 * xs ? 0.0 : x);
    for (double y = std::ceil(yr.lo / ys) * ys; y <= yr.hi + 1e-9 * ys; y += ys)
        s += fmt::format("<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>"
                         "<text x=\"{3}\" y=\"{4:.2f}\" text-anchor=\"end\">{5:g}</text>\n",
                         left, fy(y), left + pw, left - 6, fy(y) + 4, std::abs(y) < 1e-12 * ys ? 0.0 : y);
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", left + pw / 2, height - 14,
                     esc(a.xlabel));
    s += fmt::format("<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">{1}</text>\n",
                     top + ph / 2, esc(a.ylabel));
    return s;
}

std::string legend(const std::vector<std::string>& labels)
{
    std::string s;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double y = top + 10 + 18 * static_cast<double>(i);
        s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"14\" height=\"4\" fill=\"{}\"/>"
                         "<text x=\"{}\" y=\"{}\">{}</text>\n",
                         width - right + 12, y - 4, colour(i), width - right + 32, y, esc(labels[i]));
    }
    return s;
}

}  // namespace

std::string xy_chart(const Axes& a, const std::vector<Series>& series)
{
    Range xr, yr;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            xr.add(s.x[i]);
            yr.add(s.y[i]);
        }
    if (a.y_lo < a.y_hi) {
        yr.lo = a.y_lo;
        yr.hi = a.y_hi;
    }
    xr.settle();
    yr.settle();
    const double pad = 0.04 * (yr.hi - yr.lo);
    if (!(a.y_lo < a.y_hi)) {
        yr.lo -= pad;
        yr.hi += pad;
    }
    const double pw = width - left - right, ph = height - top - bottom;
    auto fx = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto fy = [&](double y) { return top + ph - (std::clamp(y, yr.lo, yr.hi) - yr.lo) / (yr.hi - yr.lo) * ph; };

    std::string s = header(a.title) + frame(a, xr, yr);
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& sr = series[k];
        labels.push_back(sr.label);
        if (sr.mark == Mark::line) {
            s += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"", colour(k));
            for (std::size_t i = 0; i < sr.x.size() && i < sr.y.size(); ++i)
                if (std::isfinite(sr.x[i]) && std::isfinite(sr.y[i]))
                    s += fmt::format("{:.2f},{:.2f} ", fx(sr.x[i]), fy(sr.y[i]));
            s += "\"/>\n";
        } else {
            for (std::size_t i = 0; i < sr.x.size() && i < sr.y.size(); ++i)
                if (std::isfinite(sr.x[i]) && std::isfinite(sr.y[i]))
                    s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"{}\"/>\n", fx(sr.x[i]),
                                     fy(sr.y[i]), colour(k));
        }
    }
    return s + legend(labels) + "</svg>\n";
}

std::string histogram(const Axes& a, const std::vector<double>& data, int bins)
{
    Range xr;
    for (double v : data)
        xr.add(v);
    xr.settle();
    bins = std::max(bins, 1);
    std::vector<double> count(static_cast<std::size_t>(bins), 0.0);
    const double w = (xr.hi - xr.lo) / bins;
    for (double v : data)
        if (std::isfinite(v))
            ++count[static_cast<std::size_t>(std::clamp(static_cast<int>((v - xr.lo) / w), 0, bins - 1))];
    Range yr;
    yr.lo = 0.0;
    yr.hi = std::max(1.0, *std::max_element(count.begin(), count.end())) * 1.05;
    const double pw = width - left - right, ph = height - top - bottom;
    std::string s = header(a.title) + frame(a, xr, yr);
    for (int b = 0; b < bins; ++b) {
        const double x0 = left + b * pw / bins;
        const double h = count[static_cast<std::size_t>(b)] / yr.hi * ph;
        s += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\" "
                         "stroke=\"white\"/>\n",
                         x0, top + ph - h, pw / bins, h, colour(0));
    }
    return s + legend({fmt::format("n = {}", data.size())}) + "</svg>\n";
}

std::string polar(const std::string& title, const std::vector<PolarTrace>& traces)
{
    const double cx = (width - right) / 2 + 20, cy = top + (height - top - bottom) / 2 + 10;
    const double r = std::min(cx - 40, cy - top) - 10;
    double peak = 0.0;
    for (const auto& t : traces)
        for (double p : t.power)
            peak = std::max(peak, p);
    if (peak <= 0.0)
        peak = 1.0;
    std::string s = header(title);
    for (int ring = 1; ring <= 4; ++ring)
        s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\" fill=\"none\" stroke=\"#ddd\"/>\n", cx, cy,
                         r * ring / 4);
    for (int i = 0; i < 12; ++i) {
        // 0 degrees points up, angles grow clockwise
        const double th = i * 30.0 * M_PI / 180.0;
        s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{3:.2f}\" stroke=\"#ddd\"/>"
                         "<text x=\"{4:.2f}\" y=\"{5:.2f}\" text-anchor=\"middle\">{6}</text>\n",
                         cx, cy, cx + r * std::sin(th), cy - r * std::cos(th), cx + (r + 16) * std::sin(th),
                         cy - (r + 16) * std::cos(th) + 4, i * 30);
    }
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < traces.size(); ++k) {
        labels.push_back(traces[k].label);
        s += fmt::format("<polygon fill=\"{0}\" fill-opacity=\"0.15\" stroke=\"{0}\" stroke-width=\"1.5\" points=\"",
                         colour(k));
        for (int i = 0; i < 12; ++i) {
            const double th = i * 30.0 * M_PI / 180.0;
            const double rr = r * traces[k].power[static_cast<std::size_t>(i)] / peak;
            s += fmt::format("{:.2f},{:.2f} ", cx + rr * std::sin(th), cy - rr * std::cos(th));
        }
        s += "\"/>\n";
    }
    return s + legend(labels) + "</svg>\n";
}

}  // namespace flcli::svg
