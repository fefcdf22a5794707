#pragma once

// Minimal standalone SVG line plots for the reproduction commands.

#include <string>
#include <vector>

namespace squid_horizon::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

struct Marker {
    double value = 0.0;
    std::string label;
    bool vertical = true;  // false: horizontal line at y = value
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::vector<Marker> markers;
    int width = 640;
    int height = 420;
};

/// Deterministic SVG document; axis ranges cover every series and marker.
[[nodiscard]] std::string render(const LinePlot& plot);

}  // namespace squid_horizon::svg
