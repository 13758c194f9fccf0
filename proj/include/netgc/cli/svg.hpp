#pragma once

// Minimal self-contained SVG emitter for ROC overlays: one colour per SNR
// group, one dash pattern per topology.

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "netgc/simulate.hpp"

namespace netgc::cli {

struct SvgCurve {
    std::string label;
    RocCurve curve;
    std::size_t group = 0;   ///< colour index
    std::string series;      ///< dash pattern key
};

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// Polyline vertices snapped to half-pixel resolution.
inline std::string fmt_point(double x, double y) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.1f,%.1f", std::round(x * 2.0) / 2.0, std::round(y * 2.0) / 2.0);
    return buf;
}

inline std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

inline std::string render_roc_svg(const std::vector<SvgCurve>& curves) {
    constexpr double left = 60, top = 20, size = 400, legend_w = 260;
    constexpr std::array<const char*, 6> colours{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    constexpr std::array<const char*, 4> dashes{"", "8,4", "2,3", "10,3,2,3"};
    auto x = [&](double pfa) { return left + pfa * size; };
    auto y = [&](double pd) { return top + (1.0 - pd) * size; };

    std::vector<std::string> series;
    auto dash_of = [&](const std::string& s) {
        for (std::size_t k = 0; k < series.size(); ++k)
            if (series[k] == s) return dashes[k % dashes.size()];
        series.push_back(s);
        return dashes[(series.size() - 1) % dashes.size()];
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(left + size + 20 + legend_w) +
           "\" height=\"" + detail::fmt(top + size + 50) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg += "<rect x=\"" + detail::fmt(left) + "\" y=\"" + detail::fmt(top) + "\" width=\"" + detail::fmt(size) +
           "\" height=\"" + detail::fmt(size) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double v = k / 5.0;
        svg += "<line x1=\"" + detail::fmt(x(v)) + "\" y1=\"" + detail::fmt(y(0)) + "\" x2=\"" + detail::fmt(x(v)) +
               "\" y2=\"" + detail::fmt(y(0) + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + detail::fmt(x(v)) + "\" y=\"" + detail::fmt(y(0) + 18) +
               "\" text-anchor=\"middle\">" + detail::fmt(v).substr(0, 3) + "</text>\n";
        svg += "<line x1=\"" + detail::fmt(x(0) - 5) + "\" y1=\"" + detail::fmt(y(v)) + "\" x2=\"" +
               detail::fmt(x(0)) + "\" y2=\"" + detail::fmt(y(v)) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + detail::fmt(x(0) - 8) + "\" y=\"" + detail::fmt(y(v) + 4) +
               "\" text-anchor=\"end\">" + detail::fmt(v).substr(0, 3) + "</text>\n";
    }
    svg += "<text x=\"" + detail::fmt(x(0.5)) + "\" y=\"" + detail::fmt(y(0) + 38) +
           "\" text-anchor=\"middle\">probability of false alarm</text>\n";
    svg += "<text transform=\"translate(16," + detail::fmt(y(0.5)) +
           ") rotate(-90)\" text-anchor=\"middle\">probability of detection</text>\n";
    svg += "<line x1=\"" + detail::fmt(x(0)) + "\" y1=\"" + detail::fmt(y(0)) + "\" x2=\"" + detail::fmt(x(1)) +
           "\" y2=\"" + detail::fmt(y(1)) + "\" stroke=\"#cccccc\"/>\n";

    for (std::size_t k = 0; k < curves.size(); ++k) {
        const auto& c = curves[k];
        const char* colour = colours[c.group % colours.size()];
        const char* dash = dash_of(c.series);
        std::string last = detail::fmt_point(x(1), y(1));
        std::string pts = last;
        for (const auto& p : c.curve.points) {
            auto xy = detail::fmt_point(x(p.pfa), y(p.pd));
            if (xy == last) continue;
            pts += " " + xy;
            last = std::move(xy);
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\"" +
               (*dash ? " stroke-dasharray=\"" + std::string(dash) + "\"" : std::string()) + " points=\"" + pts +
               "\"/>\n";
        const double ly = top + 12 + 16.0 * static_cast<double>(k);
        const double lx = left + size + 20;
        svg += "<line x1=\"" + detail::fmt(lx) + "\" y1=\"" + detail::fmt(ly) + "\" x2=\"" + detail::fmt(lx + 30) +
               "\" y2=\"" + detail::fmt(ly) + "\" stroke=\"" + colour + "\" stroke-width=\"1.5\"" +
               (*dash ? " stroke-dasharray=\"" + std::string(dash) + "\"" : std::string()) + "/>\n";
        svg += "<text x=\"" + detail::fmt(lx + 36) + "\" y=\"" + detail::fmt(ly + 4) + "\">" +
               detail::escape_xml(c.label) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace netgc::cli
