#pragma once

#include <string>

#include "codi/field.hpp"

namespace codi {

/// Synthetic test images (objects white 255 on black 0), constructed from the
/// controlled experiments' descriptions.
///
///   two-squares-a   two squares, thick narrow boundary opening (9 x 15)
///   two-squares-b   two squares, thin narrow opening (9 x 3)
///   two-squares-c   two squares, thin wide opening (21 x 3)
///   ten-squares     10-square grid, 126 x 127
///   hexagons        6 hexagons in a row, 281 x 87
///   three-cells     one blob split by two partially open walls
///   object-grid     20 x 10 grid of 200 small squares
ScalarField gen_fixture(const std::string& name);

/// Two-squares fixture with explicit opening height and wall thickness.
ScalarField two_squares_fixture(int opening_height, int wall_thickness);

}  // namespace codi
