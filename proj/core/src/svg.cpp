#include "squid_horizon/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace squid_horizon::svg {

namespace {

constexpr std::array<const char*, 6> kColours{"#1f4e9c", "#c0392b", "#2e8b57", "#7d3c98", "#d68910", "#17202a"};

std::string fixed(double v, int digits = 2) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
    return {buf, r.ptr};
}

std::string tick_label(double v) {
    if (v == 0.0) return "0";
    const double mag = std::abs(v);
    if (mag >= 1e-3 && mag < 1e4) {
        char buf[64];
        const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 4);
        return {buf, r.ptr};
    }
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 2);
    return {buf, r.ptr};
}

std::string text_escape(const std::string& s) {
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

double nice_step(double span) {
    const double raw = span / 5.0;
    const double base = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 2.5, 5.0}) {
        if (m * base >= raw) return m * base;
    }
    return 10.0 * base;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void settle() {
        if (!std::isfinite(lo)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi == lo) {
            const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
            lo -= pad;
            hi += pad;
        }
    }
};

}  // namespace

std::string render(const LinePlot& plot) {
    Range xr, yr;
    for (const auto& s : plot.series) {
        for (double v : s.x) xr.add(v);
        for (double v : s.y) yr.add(v);
    }
    for (const auto& m : plot.markers) (m.vertical ? xr : yr).add(m.value);
    xr.settle();
    yr.settle();
    const double ypad = 0.05 * (yr.hi - yr.lo);
    yr.lo -= ypad;
    yr.hi += ypad;

    const double left = 80.0, right = 20.0, top = 40.0, bottom = 60.0;
    const double pw = plot.width - left - right;
    const double ph = plot.height - top - bottom;
    auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return top + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\"" << plot.height
      << "\" viewBox=\"0 0 " << plot.width << ' ' << plot.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << fixed(plot.width / 2.0) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << text_escape(plot.title) << "</text>\n";
    o << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(pw) << "\" height=\""
      << fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int axis = 0; axis < 2; ++axis) {
        const Range& r = axis == 0 ? xr : yr;
        const double step = nice_step(r.hi - r.lo);
        for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step) {
            const double tv = std::abs(v) < 1e-9 * step ? 0.0 : v;
            if (axis == 0) {
                o << "<line x1=\"" << fixed(px(tv)) << "\" y1=\"" << fixed(top + ph) << "\" x2=\"" << fixed(px(tv))
                  << "\" y2=\"" << fixed(top + ph + 5) << "\" stroke=\"black\"/>"
                  << "<text x=\"" << fixed(px(tv)) << "\" y=\"" << fixed(top + ph + 18)
                  << "\" text-anchor=\"middle\">" << tick_label(tv) << "</text>\n";
            } else {
                o << "<line x1=\"" << fixed(left - 5) << "\" y1=\"" << fixed(py(tv)) << "\" x2=\"" << fixed(left)
                  << "\" y2=\"" << fixed(py(tv)) << "\" stroke=\"black\"/>"
                  << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(py(tv) + 4)
                  << "\" text-anchor=\"end\">" << tick_label(tv) << "</text>\n";
            }
        }
    }
    o << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(plot.height - 15.0)
      << "\" text-anchor=\"middle\">" << text_escape(plot.x_label) << "</text>\n";
    o << "<text x=\"18\" y=\"" << fixed(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fixed(top + ph / 2) << ")\">" << text_escape(plot.y_label) << "</text>\n";

    for (const auto& m : plot.markers) {
        double x1 = left, x2 = left + pw, y1 = py(m.value), y2 = y1;
        if (m.vertical) {
            x1 = x2 = px(m.value);
            y1 = top;
            y2 = top + ph;
        }
        o << "<line x1=\"" << fixed(x1) << "\" y1=\"" << fixed(y1) << "\" x2=\"" << fixed(x2) << "\" y2=\""
          << fixed(y2) << "\" stroke=\"grey\" stroke-dasharray=\"2,3\"/>";
        o << "<text x=\"" << fixed(m.vertical ? x1 + 4 : x2 - 4) << "\" y=\"" << fixed(m.vertical ? top + 14 : y1 - 4)
          << "\" text-anchor=\"" << (m.vertical ? "start" : "end") << "\" fill=\"grey\">" << text_escape(m.label)
          << "</text>\n";
    }

    for (std::size_t i = 0; i < plot.series.size(); ++i) {
        const auto& s = plot.series[i];
        const char* colour = kColours[i % kColours.size()];
        o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\"";
        if (s.dashed) o << " stroke-dasharray=\"6,4\"";
        o << " points=\"";
        const std::size_t n = std::min(s.x.size(), s.y.size());
        bool first = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(s.x[j]) || !std::isfinite(s.y[j])) continue;
            o << (first ? "" : " ") << fixed(px(s.x[j])) << ',' << fixed(py(s.y[j]));
            first = false;
        }
        o << "\"/>\n";
        const double ly = top + 16.0 + 16.0 * static_cast<double>(i);
        o << "<line x1=\"" << fixed(left + pw - 150) << "\" y1=\"" << fixed(ly - 4) << "\" x2=\""
          << fixed(left + pw - 125) << "\" y2=\"" << fixed(ly - 4) << "\" stroke=\"" << colour
          << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>"
          << "<text x=\"" << fixed(left + pw - 120) << "\" y=\"" << fixed(ly) << "\">" << text_escape(s.label)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace squid_horizon::svg
