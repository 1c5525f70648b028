// Copyright 2026 The cvqpinn Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * @file plot.hpp
 * @brief Minimal SVG line plots and heatmaps with isotherm contours.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cvqpinn/errors.hpp"

namespace cvqpinn::plot {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dashed = false;
};

namespace detail {

inline constexpr double width = 640.0, height = 420.0;
inline constexpr double left = 70.0, right = 150.0, top = 40.0, bottom = 50.0;

inline std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

inline std::string escape(const std::string &s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += ch;
        }
    }
    return out;
}

struct Frame {
    double x0, x1, y0, y1;
    double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
    double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

inline void header(std::ostringstream &os, const std::string &title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
       << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title) << "</text>\n";
}

inline void axes(std::ostringstream &os, const Frame &f, const std::string &xlabel, const std::string &ylabel, bool log_y) {
    const double xa = left, xb = width - right, ya = top, yb = height - bottom;
    os << "<rect x=\"" << xa << "\" y=\"" << ya << "\" width=\"" << xb - xa << "\" height=\"" << yb - ya
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
        os << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << yb + 16 << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
        const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
        const std::string label = log_y ? "1e" + num(std::round(yv * 10.0) / 10.0) : num(yv);
        os << "<text x=\"" << xa - 6 << "\" y=\"" << num(f.py(yv) + 4) << "\" text-anchor=\"end\">" << label << "</text>\n";
    }
    os << "<text x=\"" << (xa + xb) / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n";
    os << "<text x=\"18\" y=\"" << (ya + yb) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << (ya + yb) / 2 << ")\">"
       << escape(ylabel) << "</text>\n";
}

} // namespace detail

/// Line plot; with `log_y` nonpositive samples are dropped.
inline std::string line_plot(const std::string &title, const std::string &xlabel, const std::string &ylabel, const std::vector<Series> &series,
                             bool log_y = false) {
    using namespace detail;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    const auto ty = [&](double y) { return log_y ? std::log10(y) : y; };
    for (const auto &s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i]) || (log_y && s.y[i] <= 0.0)) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    }
    if (!std::isfinite(x0)) throw ConfigError("nothing to plot for '" + title + "'");
    if (x1 == x0) x1 = x0 + 1.0;
    if (y1 == y0) y1 = y0 + 1.0;
    const double pad = 0.05 * (y1 - y0);
    const Frame f{x0, x1, y0 - pad, y1 + pad};
    std::ostringstream os;
    header(os, title);
    axes(os, f, xlabel, ylabel, log_y);
    double legend_y = top + 10;
    for (const auto &s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "")
           << " points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i]) || (log_y && s.y[i] <= 0.0)) continue;
            os << num(f.px(s.x[i])) << ',' << num(f.py(ty(s.y[i]))) << ' ';
        }
        os << "\"/>\n";
        const double lx = width - right + 12;
        os << "<line x1=\"" << lx << "\" y1=\"" << legend_y << "\" x2=\"" << lx + 22 << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color
           << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
        os << "<text x=\"" << lx + 28 << "\" y=\"" << legend_y + 4 << "\">" << escape(s.name) << "</text>\n";
        legend_y += 18;
    }
    os << "</svg>\n";
    return os.str();
}

/// Blue-white-red ramp over [0, 1].
inline std::string color_ramp(double v) {
    v = std::clamp(v, 0.0, 1.0);
    const auto mix = [](double a, double b, double w) { return static_cast<int>(std::lround(a + (b - a) * w)); };
    int r, g, b;
    if (v < 0.5) {
        const double w = v / 0.5;
        r = mix(49, 247, w);
        g = mix(54, 247, w);
        b = mix(149, 247, w);
    } else {
        const double w = (v - 0.5) / 0.5;
        r = mix(247, 165, w);
        g = mix(247, 0, w);
        b = mix(247, 38, w);
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

/// Line segments of the `level` contour of a grid field (marching squares).
inline std::vector<std::array<double, 4>> contour_segments(const std::vector<double> &xs, const std::vector<double> &ys,
                                                           const std::vector<std::vector<double>> &v, double level) {
    std::vector<std::array<double, 4>> segs;
    const auto lerp = [&](double a, double b, double fa, double fb) { return a + (level - fa) / (fb - fa) * (b - a); };
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            const double f00 = v[j][i], f10 = v[j][i + 1], f01 = v[j + 1][i], f11 = v[j + 1][i + 1];
            std::vector<std::array<double, 2>> cross;
            if ((f00 < level) != (f10 < level)) cross.push_back({lerp(xs[i], xs[i + 1], f00, f10), ys[j]});
            if ((f10 < level) != (f11 < level)) cross.push_back({xs[i + 1], lerp(ys[j], ys[j + 1], f10, f11)});
            if ((f01 < level) != (f11 < level)) cross.push_back({lerp(xs[i], xs[i + 1], f01, f11), ys[j + 1]});
            if ((f00 < level) != (f01 < level)) cross.push_back({xs[i], lerp(ys[j], ys[j + 1], f00, f01)});
            if (cross.size() == 2) {
                segs.push_back({cross[0][0], cross[0][1], cross[1][0], cross[1][1]});
            } else if (cross.size() == 4) {
                // Saddle: pair by the cell-centre value.
                const bool centre_above = (f00 + f10 + f01 + f11) / 4.0 >= level;
                const bool first_above = f00 >= level;
                if (centre_above == first_above) {
                    segs.push_back({cross[0][0], cross[0][1], cross[1][0], cross[1][1]});
                    segs.push_back({cross[2][0], cross[2][1], cross[3][0], cross[3][1]});
                } else {
                    segs.push_back({cross[0][0], cross[0][1], cross[3][0], cross[3][1]});
                    segs.push_back({cross[1][0], cross[1][1], cross[2][0], cross[2][1]});
                }
            }
        }
    }
    return segs;
}

/// Heatmap of v[j][i] at (xs[i], ys[j]) with labelled contour levels.
inline std::string heatmap(const std::string &title, const std::string &xlabel, const std::string &ylabel, const std::vector<double> &xs,
                           const std::vector<double> &ys, const std::vector<std::vector<double>> &v, const std::vector<double> &levels) {
    using namespace detail;
    if (xs.size() < 2 || ys.size() < 2 || v.size() != ys.size()) throw ConfigError("heatmap grid is malformed");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto &row : v) {
        if (row.size() != xs.size()) throw ConfigError("heatmap grid is malformed");
        for (double c : row) {
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
    }
    if (hi == lo) hi = lo + 1.0;
    const Frame f{xs.front(), xs.back(), ys.front(), ys.back()};
    std::ostringstream os;
    header(os, title);
    for (std::size_t j = 0; j < ys.size(); ++j) {
        const double ya = j == 0 ? ys[0] : 0.5 * (ys[j - 1] + ys[j]);
        const double yb = j + 1 == ys.size() ? ys[j] : 0.5 * (ys[j] + ys[j + 1]);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double xa = i == 0 ? xs[0] : 0.5 * (xs[i - 1] + xs[i]);
            const double xb = i + 1 == xs.size() ? xs[i] : 0.5 * (xs[i] + xs[i + 1]);
            os << "<rect x=\"" << num(f.px(xa)) << "\" y=\"" << num(f.py(yb)) << "\" width=\"" << num(f.px(xb) - f.px(xa) + 0.5)
               << "\" height=\"" << num(f.py(ya) - f.py(yb) + 0.5) << "\" fill=\"" << color_ramp((v[j][i] - lo) / (hi - lo)) << "\"/>\n";
        }
    }
    for (double level : levels) {
        const auto segs = contour_segments(xs, ys, v, level);
        if (segs.empty()) continue;
        os << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1\" d=\"";
        for (const auto &s : segs) os << 'M' << num(f.px(s[0])) << ',' << num(f.py(s[1])) << 'L' << num(f.px(s[2])) << ',' << num(f.py(s[3]));
        os << "\"/>\n";
        const auto &s = segs[segs.size() / 2];
        os << "<text x=\"" << num(f.px(s[0])) << "\" y=\"" << num(f.py(s[1]) - 3) << "\" font-size=\"10\">" << num(level) << "</text>\n";
    }
    axes(os, f, xlabel, ylabel, false);
    // Colour bar.
    const double bx = width - right + 20, by0 = top, by1 = height - bottom;
    for (int k = 0; k < 50; ++k) {
        const double w = (k + 0.5) / 50.0;
        os << "<rect x=\"" << bx << "\" y=\"" << num(by1 - (k + 1) * (by1 - by0) / 50.0) << "\" width=\"18\" height=\""
           << num((by1 - by0) / 50.0 + 0.5) << "\" fill=\"" << color_ramp(w) << "\"/>\n";
    }
    os << "<text x=\"" << bx + 24 << "\" y=\"" << by0 + 8 << "\">" << num(hi) << "</text>\n";
    os << "<text x=\"" << bx + 24 << "\" y=\"" << by1 << "\">" << num(lo) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

} // namespace cvqpinn::plot
