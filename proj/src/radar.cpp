#include "gazekit/radar.hpp"

#include <cmath>
#include <numbers>

#include "gazekit/csv.hpp"
#include "gazekit/error.hpp"
#include "gazekit/saliency_metrics.hpp"

namespace gazekit {

namespace {

constexpr std::array<std::string_view, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c",
                                                      "#9467bd", "#ff7f0e", "#17becf"};

std::string xml_escape(std::string_view s) {
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

std::string coord(double v) { return format_number(v, 17); }

std::string point(double radius, std::size_t axis) {
    const double angle = static_cast<double>(axis) * std::numbers::pi / 3.0;
    return coord(radius * std::sin(angle)) + "," + coord(-radius * std::cos(angle));
}

}  // namespace

RadarLayout radar_layout(const std::vector<RadarModel>& models) {
    if (models.size() < 2) throw Error(ErrorCode::InvalidArgument, "a radar report needs at least two models");
    RadarLayout layout;
    layout.radii.assign(models.size(), {});
    for (std::size_t a = 0; a < kRadarAxes.size(); ++a) {
        std::vector<double> scores;
        for (const auto& m : models) scores.push_back(m.metrics[kRadarAxes[a].metric]);
        std::vector<double> r;
        try {
            r = radar_normalize(scores, kRadarAxes[a].invert);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateRange) throw;
            r.assign(models.size(), 0.5);
            layout.degenerate_axes.emplace_back(kRadarAxes[a].label);
        }
        for (std::size_t m = 0; m < models.size(); ++m) layout.radii[m][a] = r[m];
    }
    return layout;
}

std::string render_radar_svg(const std::vector<RadarModel>& models, const RadarLayout& layout) {
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.6 -1.4 3.2 3.2\" width=\"640\" height=\"640\">\n";
    for (const auto& axis : layout.degenerate_axes) {
        svg += "<!-- DegenerateRange: " + xml_escape(axis) + " drawn at 0.5 -->\n";
    }
    svg += "<g id=\"grid\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"0.005\">\n";
    for (double ring : {0.25, 0.5, 0.75, 1.0}) {
        svg += "<polygon points=\"";
        for (std::size_t a = 0; a < kRadarAxes.size(); ++a) svg += (a ? " " : "") + point(ring, a);
        svg += "\"/>\n";
    }
    for (std::size_t a = 0; a < kRadarAxes.size(); ++a) {
        svg += "<line x1=\"0\" y1=\"0\" x2=\"" + coord(std::sin(static_cast<double>(a) * std::numbers::pi / 3.0)) +
               "\" y2=\"" + coord(-std::cos(static_cast<double>(a) * std::numbers::pi / 3.0)) + "\"/>\n";
    }
    svg += "</g>\n<g id=\"labels\" font-family=\"sans-serif\" font-size=\"0.09\" text-anchor=\"middle\">\n";
    for (std::size_t a = 0; a < kRadarAxes.size(); ++a) {
        const double angle = static_cast<double>(a) * std::numbers::pi / 3.0;
        svg += "<text x=\"" + format_number(1.15 * std::sin(angle), 6) + "\" y=\"" +
               format_number(-1.15 * std::cos(angle) + 0.03, 6) + "\">" + xml_escape(kRadarAxes[a].label) +
               "</text>\n";
    }
    svg += "</g>\n<g id=\"models\" stroke-width=\"0.01\" fill-opacity=\"0.15\">\n";
    for (std::size_t m = 0; m < models.size(); ++m) {
        const auto color = kPalette[m % kPalette.size()];
        svg += "<polygon class=\"model\" data-label=\"" + xml_escape(models[m].label) + "\" data-radii=\"";
        for (std::size_t a = 0; a < kRadarAxes.size(); ++a) svg += (a ? " " : "") + coord(layout.radii[m][a]);
        svg += "\" points=\"";
        for (std::size_t a = 0; a < kRadarAxes.size(); ++a) svg += (a ? " " : "") + point(layout.radii[m][a], a);
        svg += "\" stroke=\"" + std::string(color) + "\" fill=\"" + std::string(color) + "\"/>\n";
    }
    svg += "</g>\n<g id=\"legend\" font-family=\"sans-serif\" font-size=\"0.08\">\n";
    for (std::size_t m = 0; m < models.size(); ++m) {
        const double y = -1.3 + 0.1 * static_cast<double>(m);
        svg += "<text x=\"-1.55\" y=\"" + format_number(y, 6) + "\" fill=\"" +
               std::string(kPalette[m % kPalette.size()]) + "\">" + xml_escape(models[m].label) + "</text>\n";
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

}  // namespace gazekit
