#pragma once

#include <cstdint>
#include <vector>

#include "codi/field.hpp"

namespace codi {

/// 256-bin gray-level histogram of a diffused index channel, masked pixels
/// only, plus its Gaussian-smoothed curve.
struct IndexHistogram {
    std::vector<uint64_t> bins = std::vector<uint64_t>(256, 0);
    uint64_t total = 0;
    std::vector<double> smoothed;  // empty until smooth_histogram

    bool has_smoothed() const { return !smoothed.empty(); }
};

/// Rounds each masked pixel to the nearest level in [0,255] and counts it.
/// Throws EmptyDomainError on an empty mask.
IndexHistogram build_histogram(const ScalarField& U, const BinaryMask& mask);

/// Convolves the raw bins with the sampled Gaussian p(i) = exp(-i^2 / 2
/// sigma^2), i in [-r, r]. Each source bin's mass is renormalized over the
/// kernel taps that land inside [0,255], so the smoothed curve keeps the
/// total mass exactly.
IndexHistogram smooth_histogram(const IndexHistogram& h, double sigma, int r);

struct PeakCount {
    int K = 0;
    std::vector<int> maxima;  ///< bin index of each counted peak
    std::vector<int> minima;  ///< minimum-value bin between adjacent peaks
};

/// Counts strict local maxima of the smoothed curve (plateaus collapsed to
/// one peak); bin 0 is the background level and never participates.
PeakCount count_peaks(const IndexHistogram& h);

/// Labels each masked pixel with the interval index of its gray level among
/// the split points (1..K); unmasked pixels get 0. Returns the label image
/// as integers stored in a ScalarField.
ScalarField label_pixels_1d(const ScalarField& U, const BinaryMask& mask,
                            const std::vector<int>& minima);

/// Pixel count per label (index 0 = unmasked/background).
std::vector<uint64_t> label_sizes(const ScalarField& labels, int num_labels);

}  // namespace codi
