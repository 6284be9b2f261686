#pragma once

#include <string>
#include <vector>

#include "snakes/plane_tree.hpp"
#include "snakes/snake_stats.hpp"

namespace snakes {

struct PlotSeries {
    std::string name;
    std::vector<double> values;    // plotted against index
    std::string color = "#1f6fb2";
};

struct PlotSpec {
    std::vector<PlotSeries> series;
    int width = 900;
    int height = 360;
    /// peaks drawn as vertical marks; x in [0,1] maps onto the index range
    PeakSet peaks;
};

/// Deterministic SVG bytes: fixed formatting, no timestamps. Peak marks are
/// emitted as <line class="peak" .../> elements, one per peak.
std::string render_polyline_plot(const PlotSpec& spec);

/// Radial tree layout: angle = first contour visit, radius = depth. Edges are
/// coloured by the child vertex position through a blue-green-yellow-red ramp
/// (pass heights as positions for a plain render).
std::string render_tree_radial(const PlaneTree& tree, const std::vector<double>& positions,
                               int size = 720);

/// Writes spec to path; format "svg" renders, "csv" dumps the series values.
void emit_plot(const PlotSpec& spec, const std::string& path, const std::string& format = "svg");

/// Number of peak marks in rendered SVG bytes.
std::size_t count_peak_marks(const std::string& svg);

} // namespace snakes
