#include "snakes/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "snakes/serialize.hpp"
#include "snakes/tree_codec.hpp"

namespace snakes {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

/// blue -> green -> yellow -> red, t in [0,1]
std::string color_ramp(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const double stops[4][3] = {{0, 64, 224}, {0, 192, 64}, {240, 224, 0}, {224, 32, 0}};
    const double pos = t * 3.0;
    const int lo = std::min(2, static_cast<int>(pos));
    const double f = pos - lo;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                  static_cast<int>(stops[lo][0] + f * (stops[lo + 1][0] - stops[lo][0])),
                  static_cast<int>(stops[lo][1] + f * (stops[lo + 1][1] - stops[lo][1])),
                  static_cast<int>(stops[lo][2] + f * (stops[lo + 1][2] - stops[lo][2])));
    return buf;
}

} // namespace

std::string render_polyline_plot(const PlotSpec& spec) {
    if (spec.series.empty()) throw std::invalid_argument("plot: series must be nonempty");
    std::size_t max_len = 0;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& s : spec.series) {
        if (s.values.size() < 2) throw std::invalid_argument("plot: series needs >= 2 points");
        max_len = std::max(max_len, s.values.size());
        for (const double v : s.values) {
            if (!std::isfinite(v)) throw std::invalid_argument("plot: non-finite value");
            lo = first ? v : std::min(lo, v);
            hi = first ? v : std::max(hi, v);
            first = false;
        }
    }
    if (hi == lo) { hi += 1.0; lo -= 1.0; }

    const double margin = 10.0;
    const double w = spec.width - 2 * margin, h = spec.height - 2 * margin;
    const auto x_of = [&](double idx, std::size_t len) {
        return margin + w * idx / static_cast<double>(len - 1);
    };
    const auto y_of = [&](double v) { return margin + h * (hi - v) / (hi - lo); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
        << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (lo < 0.0 && hi > 0.0)
        out << "<line x1=\"" << fmt(margin) << "\" y1=\"" << fmt(y_of(0.0)) << "\" x2=\""
            << fmt(margin + w) << "\" y2=\"" << fmt(y_of(0.0))
            << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";

    for (const auto& s : spec.series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (i) out << ' ';
            out << fmt(x_of(static_cast<double>(i), s.values.size())) << ','
                << fmt(y_of(s.values[i]));
        }
        out << "\"><title>" << s.name << "</title></polyline>\n";
    }

    for (const auto& p : spec.peaks.points) {
        const double x = x_of(p.x * static_cast<double>(max_len - 1), max_len);
        out << "<line class=\"peak\" x1=\"" << fmt(x) << "\" y1=\"" << fmt(y_of(0.0))
            << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(y_of(p.value))
            << "\" stroke=\"#d03020\" stroke-width=\"1\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_tree_radial(const PlaneTree& tree, const std::vector<double>& positions,
                               int size) {
    if (positions.size() != tree.vertex_count())
        throw std::invalid_argument("tree render: one position per vertex expected");
    const auto h = height(tree);
    const auto& par = tree.parents();
    const auto seq = contour_vertices(tree);

    std::vector<std::int64_t> first_visit(tree.vertex_count(), -1);
    for (std::size_t t = 0; t < seq.size(); ++t)
        if (first_visit[seq[t]] < 0) first_visit[seq[t]] = static_cast<std::int64_t>(t);

    const std::int32_t max_depth =
        std::max<std::int32_t>(1, *std::max_element(h.begin(), h.end()));
    const auto [lo_it, hi_it] = std::minmax_element(positions.begin(), positions.end());
    const double lo = *lo_it, hi = *hi_it;
    const double span = hi > lo ? hi - lo : 1.0;

    const double cx = size / 2.0, cy = size / 2.0;
    const double radius = size / 2.0 - 8.0;
    std::vector<double> px(tree.vertex_count()), py(tree.vertex_count());
    for (std::size_t v = 0; v < tree.vertex_count(); ++v) {
        const double angle = 2.0 * M_PI * static_cast<double>(first_visit[v]) /
                             static_cast<double>(seq.size());
        const double r = radius * static_cast<double>(h[v]) / static_cast<double>(max_depth);
        px[v] = cx + r * std::cos(angle);
        py[v] = cy + r * std::sin(angle);
    }

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t v = 1; v < tree.vertex_count(); ++v) {
        out << "<line x1=\"" << fmt(px[par[v]]) << "\" y1=\"" << fmt(py[par[v]]) << "\" x2=\""
            << fmt(px[v]) << "\" y2=\"" << fmt(py[v]) << "\" stroke=\""
            << color_ramp((positions[v] - lo) / span) << "\" stroke-width=\"1\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void emit_plot(const PlotSpec& spec, const std::string& path, const std::string& format) {
    if (format == "svg") {
        write_file_atomic(path, render_polyline_plot(spec));
        return;
    }
    if (format == "csv") {
        if (spec.series.empty()) throw std::invalid_argument("plot: series must be nonempty");
        std::ostringstream out;
        out << "index";
        for (const auto& s : spec.series) out << ',' << s.name;
        out << '\n';
        std::size_t max_len = 0;
        for (const auto& s : spec.series) max_len = std::max(max_len, s.values.size());
        for (std::size_t i = 0; i < max_len; ++i) {
            out << i;
            for (const auto& s : spec.series) {
                out << ',';
                if (i < s.values.size()) {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "%.17g", s.values[i]);
                    out << buf;
                }
            }
            out << '\n';
        }
        write_file_atomic(path, out.str());
        return;
    }
    throw std::invalid_argument("plot: unknown format '" + format + "'");
}

std::size_t count_peak_marks(const std::string& svg) {
    std::size_t count = 0, pos = 0;
    const std::string needle = "class=\"peak\"";
    while ((pos = svg.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

} // namespace snakes
