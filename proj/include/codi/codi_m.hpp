#pragma once

#include <cstdint>
#include <vector>

#include "codi/field.hpp"

namespace codi {

/// Masked pixels' p-dimensional index vectors, in row-major pixel order.
struct PointSet {
    int dim = 0;
    std::vector<double> coords;               ///< point i at [i*dim, (i+1)*dim)
    std::vector<std::pair<int, int>> origin;  ///< (row, col) per point

    size_t size() const { return origin.size(); }
    const double* point(size_t i) const { return coords.data() + i * static_cast<size_t>(dim); }

    static PointSet from_field(const IndexField& U, const BinaryMask& mask);
};

struct ClusterResult {
    std::vector<int> labels;      ///< per point, 0 = noise
    int K = 0;                    ///< cluster count (noise excluded)
    std::vector<uint64_t> sizes;  ///< |C_1| .. |C_K| in pixels
    uint64_t noise_count = 0;
};

/// DBSCAN with Euclidean distance: core points have >= min_pts neighbors
/// within eps (closed ball, counting self); border points join the first
/// discovered core's cluster in row-major scan order. Neighborhood queries
/// run over a uniform grid of cell size eps.
ClusterResult dbscan(const PointSet& pts, double eps, int min_pts);

/// Quadratic reference DBSCAN, used as the test oracle for the grid version.
ClusterResult dbscan_brute_force(const PointSet& pts, double eps, int min_pts);

/// Builds the point set from masked pixels and clusters it; returns K and the
/// full result. Requires p >= 3 channels.
ClusterResult count_multi(const IndexField& U, const BinaryMask& mask, double eps, int min_pts);

/// Colorized per-pixel label map: distinct colors per cluster, a reserved
/// dark gray for noise, black background.
RgbImage label_image_multi(const ClusterResult& result, const PointSet& pts, int width,
                           int height);

/// Same rendering for a 1-D label field (labels 1..K, 0 = background).
RgbImage colorize_labels(const ScalarField& labels);

}  // namespace codi
