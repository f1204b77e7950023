#pragma once

#include <string>

#include "codi/field.hpp"

namespace codi {

/// Decodes a PGM (P2/P5), PPM (P3/P6), or PNG file. Grayscale inputs
/// replicate into three equal channels.
RgbImage load_image(const std::string& path);

/// Writes a scalar field as binary PGM, values rounded and clamped to [0,255].
void save_field(const ScalarField& f, const std::string& path);

/// Writes a color image as binary PPM.
void save_ppm(const RgbImage& img, const std::string& path);

}  // namespace codi
