#include "codi/codi_s.hpp"

#include <algorithm>
#include <cmath>

namespace codi {

IndexHistogram build_histogram(const ScalarField& U, const BinaryMask& mask) {
    if (U.width != mask.width || U.height != mask.height) {
        throw ParamError("histogram mask dimensions do not match field");
    }
    IndexHistogram h;
    for (size_t i = 0; i < U.size(); ++i) {
        if (!mask.data[i]) continue;
        int level = static_cast<int>(std::lround(U.data[i]));
        level = level < 0 ? 0 : (level > 255 ? 255 : level);
        h.bins[static_cast<size_t>(level)]++;
        h.total++;
    }
    if (h.total == 0) throw EmptyDomainError("histogram over empty mask");
    return h;
}

IndexHistogram smooth_histogram(const IndexHistogram& h, double sigma, int r) {
    if (!(sigma > 0.0)) throw ParamError("smooth_histogram needs sigma > 0");
    if (r < 1) throw ParamError("smooth_histogram needs radius >= 1");

    std::vector<double> kernel(static_cast<size_t>(2 * r) + 1);
    for (int i = -r; i <= r; ++i) {
        kernel[static_cast<size_t>(i + r)] = std::exp(-0.5 * i * i / (sigma * sigma));
    }

    IndexHistogram out = h;
    out.smoothed.assign(256, 0.0);
    // Scatter each source bin with per-source renormalization over the taps
    // inside [0,255]; total mass is preserved exactly.
    for (int src = 0; src < 256; ++src) {
        if (h.bins[static_cast<size_t>(src)] == 0) continue;
        double weight_in_range = 0.0;
        for (int i = -r; i <= r; ++i) {
            const int dst = src + i;
            if (dst >= 0 && dst <= 255) weight_in_range += kernel[static_cast<size_t>(i + r)];
        }
        const double mass = static_cast<double>(h.bins[static_cast<size_t>(src)]);
        for (int i = -r; i <= r; ++i) {
            const int dst = src + i;
            if (dst < 0 || dst > 255) continue;
            out.smoothed[static_cast<size_t>(dst)] +=
                mass * kernel[static_cast<size_t>(i + r)] / weight_in_range;
        }
    }
    return out;
}

PeakCount count_peaks(const IndexHistogram& h) {
    if (!h.has_smoothed()) throw ParamError("count_peaks needs a smoothed histogram");

    // Bin 0 is the background level; the curve is bins 1..255.
    const int lo = 1, hi = 255;
    bool any = false;
    for (int i = lo; i <= hi; ++i) {
        if (h.smoothed[static_cast<size_t>(i)] > 0.0) any = true;
    }
    if (!any) throw EmptyDomainError("all-zero histogram curve");

    // Collapse plateaus into runs, then test each run against its differing
    // neighbors.
    PeakCount out;
    int run_start = lo;
    while (run_start <= hi) {
        const double v = h.smoothed[static_cast<size_t>(run_start)];
        int run_end = run_start;
        while (run_end + 1 <= hi && h.smoothed[static_cast<size_t>(run_end + 1)] == v) ++run_end;
        // Bin 0 still acts as the left neighbor, so background spillover into
        // bin 1 is not a peak.
        const bool left_ok = h.smoothed[static_cast<size_t>(run_start - 1)] < v;
        const bool right_ok = run_end == hi || h.smoothed[static_cast<size_t>(run_end + 1)] < v;
        if (left_ok && right_ok && v > 0.0) {
            out.maxima.push_back(run_start);
        }
        run_start = run_end + 1;
    }
    out.K = static_cast<int>(out.maxima.size());
    for (size_t m = 1; m < out.maxima.size(); ++m) {
        int best = out.maxima[m - 1] + 1;
        for (int i = best + 1; i < out.maxima[m]; ++i) {
            if (h.smoothed[static_cast<size_t>(i)] < h.smoothed[static_cast<size_t>(best)]) best = i;
        }
        out.minima.push_back(best);
    }
    return out;
}

ScalarField label_pixels_1d(const ScalarField& U, const BinaryMask& mask,
                            const std::vector<int>& minima) {
    ScalarField labels(U.width, U.height, 0.0);
    for (size_t i = 0; i < U.size(); ++i) {
        if (!mask.data[i]) continue;
        int level = static_cast<int>(std::lround(U.data[i]));
        level = level < 0 ? 0 : (level > 255 ? 255 : level);
        // Interval index among the sorted split points.
        int label = 1;
        for (int split : minima) {
            if (level > split) ++label;
        }
        labels.data[i] = label;
    }
    return labels;
}

std::vector<uint64_t> label_sizes(const ScalarField& labels, int num_labels) {
    std::vector<uint64_t> sizes(static_cast<size_t>(num_labels) + 1, 0);
    for (double v : labels.data) {
        const int lab = static_cast<int>(v);
        if (lab >= 0 && lab <= num_labels) sizes[static_cast<size_t>(lab)]++;
    }
    return sizes;
}

}  // namespace codi
