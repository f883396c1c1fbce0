#pragma once

#include <span>
#include <string>

#include "modechoice/harness.hpp"

namespace modechoice {

struct PlotSpec {
    std::string title = "Distribution of transport users";
    int width = 880;
    int height = 540;
    double y_min = 0.0;
    double y_max = 1.0; // share plots span [0,1]
};

/// Self-contained SVG line chart of the three mode shares over time: one
/// polyline per mode, a shaded confidence band each, legend labels
/// mot/car/pub. Input is the aggregate table; rows with other indicators are
/// ignored. Throws DataError when no share rows are present.
std::string plot_shares_svg(std::span<const AggregateRow> rows, const PlotSpec& spec = {});

} // namespace modechoice
