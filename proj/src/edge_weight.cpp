#include "codi/edge_weight.hpp"

#include <algorithm>
#include <cmath>

namespace codi {

EdgeWeight EdgeWeight::from_field(ScalarField f) {
    EdgeWeight w;
    w.g = std::move(f);
    w.G0 = *std::max_element(w.g.data.begin(), w.g.data.end());
    if (w.G0 <= 0.0) throw DegenerateWeightError("edge weight is identically zero");
    return w;
}

EdgeWeight EdgeWeight::from_mask(const BinaryMask& m) {
    ScalarField f(m.width, m.height);
    for (size_t i = 0; i < f.size(); ++i) f.data[i] = m.data[i] ? 1.0 : 0.0;
    return from_field(std::move(f));
}

ScalarField gaussian_smooth(const ScalarField& f, double sigma) {
    if (!(sigma > 0.0)) throw ParamError("gaussian_smooth needs sigma > 0");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    if (radius == 0) return f;

    std::vector<double> kernel(static_cast<size_t>(2 * radius) + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[static_cast<size_t>(i + radius)] = std::exp(-0.5 * i * i / (sigma * sigma));
        sum += kernel[static_cast<size_t>(i + radius)];
    }
    for (double& k : kernel) k /= sum;

    const auto clampi = [](int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); };

    // Horizontal pass, then vertical, replicate padding.
    ScalarField tmp(f.width, f.height);
    for (int i = 0; i < f.height; ++i) {
        for (int j = 0; j < f.width; ++j) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[static_cast<size_t>(k + radius)] *
                       f.at(i, clampi(j + k, 0, f.width - 1));
            }
            tmp.at(i, j) = acc;
        }
    }
    ScalarField out(f.width, f.height);
    for (int i = 0; i < f.height; ++i) {
        for (int j = 0; j < f.width; ++j) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[static_cast<size_t>(k + radius)] *
                       tmp.at(clampi(i + k, 0, f.height - 1), j);
            }
            out.at(i, j) = acc;
        }
    }
    return out;
}

EdgeWeight edge_function(const ScalarField& f, EdgeKind kind, double tau, double sigma) {
    if (!(tau > 0.0)) throw ParamError("edge_function needs tau > 0");
    if (sigma < 0.0) throw ParamError("edge_function needs sigma >= 0");
    const ScalarField s = sigma > 0.0 ? gaussian_smooth(f, sigma) : f;

    const auto clampi = [](int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); };
    ScalarField g(f.width, f.height);
    for (int i = 0; i < f.height; ++i) {
        for (int j = 0; j < f.width; ++j) {
            const double gx = 0.5 * (s.at(i, clampi(j + 1, 0, f.width - 1)) -
                                     s.at(i, clampi(j - 1, 0, f.width - 1)));
            const double gy = 0.5 * (s.at(clampi(i + 1, 0, f.height - 1), j) -
                                     s.at(clampi(i - 1, 0, f.height - 1), j));
            const double t2 = gx * gx + gy * gy;
            g.at(i, j) = kind == EdgeKind::Exp ? std::exp(-tau * t2) : 1.0 / (1.0 + tau * t2);
        }
    }
    return EdgeWeight::from_field(std::move(g));
}

BinaryMask threshold_mask(const ScalarField& f, CompareOp op, double t) {
    BinaryMask m(f.width, f.height);
    for (size_t i = 0; i < f.size(); ++i) {
        m.data[i] = (op == CompareOp::Lt ? f.data[i] < t : f.data[i] > t) ? 1 : 0;
    }
    return m;
}

BinaryMask morphology(const BinaryMask& mask, MorphOp op, int radius) {
    if (radius < 1) throw ParamError("morphology radius must be >= 1");

    // Offsets of the discrete Euclidean disk.
    std::vector<std::pair<int, int>> disk;
    for (int dr = -radius; dr <= radius; ++dr) {
        for (int dc = -radius; dc <= radius; ++dc) {
            if (dr * dr + dc * dc <= radius * radius) disk.emplace_back(dr, dc);
        }
    }

    const bool dilate = op == MorphOp::Dilate;
    BinaryMask out(mask.width, mask.height);
    for (int i = 0; i < mask.height; ++i) {
        for (int j = 0; j < mask.width; ++j) {
            bool hit = !dilate;
            for (const auto& [dr, dc] : disk) {
                const int r = i + dr, c = j + dc;
                const bool v = (r >= 0 && r < mask.height && c >= 0 && c < mask.width)
                                   ? mask.at(r, c)
                                   : false;  // outside the image is background
                if (dilate) {
                    if (v) { hit = true; break; }
                } else {
                    if (!v) { hit = false; break; }
                }
            }
            out.set(i, j, hit);
        }
    }
    return out;
}

ScalarField channel_subtract(const RgbImage& img, int a, int b) {
    if (a < 0 || a > 2 || b < 0 || b > 2) throw ParamError("channel index must be 0, 1, or 2");
    const std::vector<uint8_t>* chans[3] = {&img.r, &img.g, &img.b};
    ScalarField out(img.width, img.height);
    for (size_t i = 0; i < out.size(); ++i) {
        const double v = static_cast<double>((*chans[a])[i]) - static_cast<double>((*chans[b])[i]);
        out.data[i] = v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v);
    }
    return out;
}

ScalarField equalize_histogram(const ScalarField& f) {
    size_t hist[256] = {};
    for (double v : f.data) {
        int level = static_cast<int>(std::lround(v));
        level = level < 0 ? 0 : (level > 255 ? 255 : level);
        hist[level]++;
    }
    double cdf[256];
    double acc = 0.0;
    for (int k = 0; k < 256; ++k) {
        acc += static_cast<double>(hist[k]) / static_cast<double>(f.size());
        cdf[k] = acc;
    }
    ScalarField out(f.width, f.height);
    for (size_t i = 0; i < f.size(); ++i) {
        int level = static_cast<int>(std::lround(f.data[i]));
        level = level < 0 ? 0 : (level > 255 ? 255 : level);
        out.data[i] = 255.0 * cdf[level];
    }
    return out;
}

EdgeWeight compose_weight(const std::vector<WeightPart>& parts) {
    if (parts.empty()) throw ParamError("compose_weight needs at least one part");
    int w = 0, h = 0;
    const auto dims = [](const WeightPart& p) {
        return p.kind == WeightPart::Kind::Weight ? std::pair{p.weight.width, p.weight.height}
                                                  : std::pair{p.mask.width, p.mask.height};
    };
    std::tie(w, h) = dims(parts.front());
    ScalarField g(w, h, 1.0);
    for (const auto& part : parts) {
        if (dims(part) != std::pair{w, h}) throw ParamError("compose_weight dimension mismatch");
        if (part.kind == WeightPart::Kind::Weight) {
            for (size_t i = 0; i < g.size(); ++i) g.data[i] *= part.weight.data[i];
        } else {
            for (size_t i = 0; i < g.size(); ++i) g.data[i] *= part.mask.data[i] ? 1.0 : 0.0;
        }
    }
    return EdgeWeight::from_field(std::move(g));
}

}  // namespace codi
