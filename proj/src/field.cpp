#include "codi/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace codi {

ScalarField::ScalarField(int w, int h, double fill) : width(w), height(h) {
    if (w < 1 || h < 1) throw ParamError("ScalarField dimensions must be >= 1");
    data.assign(static_cast<size_t>(w) * h, fill);
}

void ScalarField::check_finite(const char* context) const {
    for (double v : data) {
        if (!std::isfinite(v)) {
            throw NumericalError(std::string("non-finite value in ") + context);
        }
    }
}

RgbImage::RgbImage(int w, int h) : width(w), height(h) {
    if (w < 1 || h < 1) throw ParamError("RgbImage dimensions must be >= 1");
    const size_t n = static_cast<size_t>(w) * h;
    r.assign(n, 0);
    g.assign(n, 0);
    b.assign(n, 0);
}

BinaryMask::BinaryMask(int w, int h, bool fill) : width(w), height(h) {
    if (w < 1 || h < 1) throw ParamError("BinaryMask dimensions must be >= 1");
    data.assign(static_cast<size_t>(w) * h, fill ? 1 : 0);
}

size_t BinaryMask::count_true() const {
    return static_cast<size_t>(std::count_if(data.begin(), data.end(),
                                             [](uint8_t v) { return v != 0; }));
}

IndexField::IndexField(int p, int w, int h, double fill) {
    if (p < 1) throw ParamError("IndexField needs at least one channel");
    channels.assign(p, ScalarField(w, h, fill));
}

ScalarField to_grayscale(const RgbImage& img) {
    ScalarField out(img.width, img.height);
    for (size_t i = 0; i < out.size(); ++i) {
        out.data[i] = 0.299 * img.r[i] + 0.587 * img.g[i] + 0.114 * img.b[i];
    }
    return out;
}

ScalarField downsample(const ScalarField& f, double factor) {
    if (!(factor > 0.0 && factor <= 1.0)) {
        throw ParamError("downsample factor must be in (0,1]");
    }
    if (factor == 1.0) return f;
    const int ow = static_cast<int>(std::lround(factor * f.width));
    const int oh = static_cast<int>(std::lround(factor * f.height));
    if (ow < 8 || oh < 8) throw ParamError("downsample result smaller than 8x8");

    // Box average: output pixel (i,j) averages the source rectangle
    // [i*H/oh, (i+1)*H/oh) x [j*W/ow, (j+1)*W/ow).
    ScalarField out(ow, oh);
    for (int i = 0; i < oh; ++i) {
        const int r0 = static_cast<int>(std::floor(static_cast<double>(i) * f.height / oh));
        int r1 = static_cast<int>(std::ceil(static_cast<double>(i + 1) * f.height / oh));
        r1 = std::min(r1, f.height);
        for (int j = 0; j < ow; ++j) {
            const int c0 = static_cast<int>(std::floor(static_cast<double>(j) * f.width / ow));
            int c1 = static_cast<int>(std::ceil(static_cast<double>(j + 1) * f.width / ow));
            c1 = std::min(c1, f.width);
            double sum = 0.0;
            for (int r = r0; r < r1; ++r) {
                for (int c = c0; c < c1; ++c) sum += f.at(r, c);
            }
            out.at(i, j) = sum / (static_cast<double>(r1 - r0) * (c1 - c0));
        }
    }
    return out;
}

ScalarField add_border_outline(const ScalarField& g, int width) {
    if (width < 1 || 2 * width >= std::min(g.width, g.height)) {
        throw ParamError("border outline width out of range");
    }
    ScalarField out = g;
    for (int i = 0; i < g.height; ++i) {
        for (int j = 0; j < g.width; ++j) {
            const int d = std::min({i, j, g.height - 1 - i, g.width - 1 - j});
            if (d < width) out.at(i, j) = 0.0;
        }
    }
    return out;
}

}  // namespace codi
