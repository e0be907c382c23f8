#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "gazekit/tables.hpp"

namespace gazekit {

struct RadarAxis {
    std::string_view label;
    std::size_t metric;  ///< index into kMetricColumns
    bool invert;
};

/// CC, SIM, NSS, AUC-J, AUC-B and inverted KL, clockwise from the top at 60 degree spacing.
inline constexpr std::array<RadarAxis, 6> kRadarAxes = {{
    {"CC", 0, false},
    {"SIM", 2, false},
    {"NSS", 5, false},
    {"AUC-J", 3, false},
    {"AUC-B", 4, false},
    {"KL (inv)", 1, true},
}};

struct RadarModel {
    std::string label;
    std::array<double, kMetricCount> metrics{};  ///< ordered as kMetricColumns
};

struct RadarLayout {
    std::vector<std::array<double, kRadarAxes.size()>> radii;  ///< per model, per axis, in [0, 1]
    std::vector<std::string> degenerate_axes;                  ///< axes drawn at 0.5 for every model
};

/// Per-axis min-max normalization across models; an axis where all models
/// tie falls back to 0.5.
RadarLayout radar_layout(const std::vector<RadarModel>& models);

/// Unit-radius chart centred on the origin: a vertex at radius r on axis k
/// sits at (r sin(k pi/3), -r cos(k pi/3)). Coordinates use 17 significant digits.
std::string render_radar_svg(const std::vector<RadarModel>& models, const RadarLayout& layout);

}  // namespace gazekit
