// SPDX-License-Identifier: Apache-2.0
//
// mmhp - multiuser hybrid precoding simulator for millimeter-wave downlinks
// Copyright (C) 2026 The mmhp authors
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

#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace mmhp::cli
{

namespace
{

constexpr double width = 720.0;
constexpr double height = 480.0;
constexpr double left = 70.0;
constexpr double right = 190.0;
constexpr double top = 40.0;
constexpr double bottom = 60.0;

const char *const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string &s)
{
    std::string out;
    for (char c : s)
    {
        switch (c)
        {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

double nice_step(double span)
{
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag)
            return m * mag;
    return 10.0 * mag;
}

} // namespace

std::string render_curves_svg(const MonteCarloResult &result, const std::string &title)
{
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymax = 0.0;
    for (const CurvePoint &p : result.points)
    {
        xmin = std::min(xmin, p.snr_db);
        xmax = std::max(xmax, p.snr_db);
        for (const AlgorithmStats &s : p.stats)
            if (std::isfinite(s.mean))
                ymax = std::max(ymax, s.mean);
    }
    if (!(xmax > xmin))
    {
        xmin -= 1.0;
        xmax += 1.0;
    }
    const double ystep = nice_step(ymax > 0.0 ? ymax : 1.0);
    ymax = std::ceil((ymax > 0.0 ? ymax : 1.0) / ystep) * ystep;
    const double xstep = nice_step(xmax - xmin);

    const double pw = width - left - right, ph = height - top - bottom;
    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return top + ph - y / ymax * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(title) << "</text>\n";

    for (double y = 0.0; y <= ymax + 1e-9; y += ystep)
    {
        svg << "<line x1=\"" << fmt(left) << "\" x2=\"" << fmt(left + pw) << "\" y1=\"" << fmt(sy(y)) << "\" y2=\""
            << fmt(sy(y)) << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(sy(y) + 4) << "\" text-anchor=\"end\">" << y
            << "</text>\n";
    }
    for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + 1e-9; x += xstep)
    {
        svg << "<line x1=\"" << fmt(sx(x)) << "\" x2=\"" << fmt(sx(x)) << "\" y1=\"" << fmt(top) << "\" y2=\""
            << fmt(top + ph) << "\" stroke=\"#eee\"/>\n";
        svg << "<text x=\"" << fmt(sx(x)) << "\" y=\"" << fmt(top + ph + 18) << "\" text-anchor=\"middle\">" << x
            << "</text>\n";
    }
    svg << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(pw) << "\" height=\""
        << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(height - 18)
        << "\" text-anchor=\"middle\">SNR [dB]</text>\n";
    svg << "<text transform=\"translate(20," << fmt(top + ph / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">sum rate [bit/s/Hz]</text>\n";

    const std::size_t n_alg = result.points.empty() ? 0 : result.points.front().stats.size();
    for (std::size_t a = 0; a < n_alg; ++a)
    {
        const char *colour = palette[a % std::size(palette)];
        svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.8\" points=\"";
        for (const CurvePoint &p : result.points)
            if (std::isfinite(p.stats[a].mean))
                svg << fmt(sx(p.snr_db)) << ',' << fmt(sy(p.stats[a].mean)) << ' ';
        svg << "\"/>\n";
        const double ly = top + 14.0 + 18.0 * static_cast<double>(a);
        svg << "<line x1=\"" << fmt(left + pw + 12) << "\" x2=\"" << fmt(left + pw + 36) << "\" y1=\"" << fmt(ly)
            << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << fmt(left + pw + 42) << "\" y=\"" << fmt(ly + 4) << "\">"
            << escape(algorithm_name(result.points.front().stats[a].algorithm)) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace mmhp::cli
