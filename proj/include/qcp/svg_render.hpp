#pragma once

#include <array>
#include <string>

#include "qcp/geometry.hpp"

namespace qcp {

// Euclidean layout of a three-circle configuration: center i at the origin,
// center j on the positive x-axis, center k in the upper half-plane.
struct TripleLayout {
    std::array<std::array<double, 2>, 3> centers{};
    std::array<double, 3> radii{};
    std::array<double, 3> lengths{}; // lengths[s] opposite circle s
    std::array<double, 3> angles{};  // angles of the center triangle, from coordinates
};

// Throws Error{Domain} when the configuration is degenerate
// (euclidean_E <= 0).
TripleLayout layout_triple(const std::array<double, 3>& radii, const std::array<double, 3>& phi);

// SVG drawing of the configuration: the three circles, the triangle of
// centers, and angle labels.
std::string render_triple_svg(const std::array<double, 3>& radii,
                              const std::array<double, 3>& phi);

} // namespace qcp
