#pragma once

#include <cstdint>
#include <vector>

#include "codi/errors.hpp"

namespace codi {

/// 2-D grid of real values, row-major: data[row * width + col], row 0 at the
/// top, col 0 at the left. Every module in this project shares this layout.
struct ScalarField {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    ScalarField() = default;
    ScalarField(int w, int h, double fill = 0.0);

    double& at(int row, int col) { return data[static_cast<size_t>(row) * width + col]; }
    double at(int row, int col) const { return data[static_cast<size_t>(row) * width + col]; }

    size_t size() const { return data.size(); }
    bool same_dims(const ScalarField& other) const {
        return width == other.width && height == other.height;
    }

    /// Throws NumericalError if any value is NaN/Inf.
    void check_finite(const char* context) const;
};

/// 8-bit color image, three planes of width*height values.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> r, g, b;

    RgbImage() = default;
    RgbImage(int w, int h);
};

/// One boolean per pixel, same layout as ScalarField.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false);

    bool at(int row, int col) const { return data[static_cast<size_t>(row) * width + col] != 0; }
    void set(int row, int col, bool v) { data[static_cast<size_t>(row) * width + col] = v ? 1 : 0; }
    size_t count_true() const;
};

/// p-channel stack of ScalarFields (the diffused index image U and its
/// companions V, lambda).
struct IndexField {
    std::vector<ScalarField> channels;

    IndexField() = default;
    IndexField(int p, int w, int h, double fill = 0.0);

    int num_channels() const { return static_cast<int>(channels.size()); }
    int width() const { return channels.empty() ? 0 : channels.front().width; }
    int height() const { return channels.empty() ? 0 : channels.front().height; }
};

/// Per-pixel luma 0.299 R + 0.587 G + 0.114 B, values in [0,255].
ScalarField to_grayscale(const RgbImage& img);

/// Box-average resampling; output dims = round(factor * dims); factor 1 is the
/// identity. Output must be at least 8x8.
ScalarField downsample(const ScalarField& f, double factor);

/// Sets the outermost `width` rings of pixels to 0 (diffusion-blocking) so
/// objects cannot merge across the periodic FFT wrap. Interior unchanged.
ScalarField add_border_outline(const ScalarField& g, int width);

}  // namespace codi
