#include "codi/codi_m.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <functional>
#include <unordered_map>

namespace codi {

PointSet PointSet::from_field(const IndexField& U, const BinaryMask& mask) {
    if (U.num_channels() < 1) throw ParamError("point set needs at least one channel");
    if (U.width() != mask.width || U.height() != mask.height) {
        throw ParamError("point set mask dimensions do not match field");
    }
    PointSet pts;
    pts.dim = U.num_channels();
    for (int i = 0; i < mask.height; ++i) {
        for (int j = 0; j < mask.width; ++j) {
            if (!mask.at(i, j)) continue;
            pts.origin.emplace_back(i, j);
            for (int c = 0; c < pts.dim; ++c) pts.coords.push_back(U.channels[c].at(i, j));
        }
    }
    return pts;
}

namespace {

constexpr int kNoiseLabel = 0;
constexpr int kUnvisited = -1;

double dist2(const double* a, const double* b, int dim) {
    double acc = 0.0;
    for (int c = 0; c < dim; ++c) {
        const double d = a[c] - b[c];
        acc += d * d;
    }
    return acc;
}

struct CellKeyHash {
    size_t operator()(const std::vector<int64_t>& key) const {
        size_t h = 1469598103934665603ull;
        for (int64_t v : key) {
            h ^= static_cast<size_t>(v);
            h *= 1099511628211ull;
        }
        return h;
    }
};

// Uniform grid of cell size eps over the bounding box.
class CellGrid {
public:
    CellGrid(const PointSet& pts, double eps) : pts_(pts), eps_(eps), dim_(pts.dim) {
        lo_.assign(static_cast<size_t>(dim_), 0.0);
        for (int c = 0; c < dim_; ++c) {
            double m = pts.point(0)[c];
            for (size_t i = 1; i < pts.size(); ++i) m = std::min(m, pts.point(i)[c]);
            lo_[static_cast<size_t>(c)] = m;
        }
        for (size_t i = 0; i < pts.size(); ++i) {
            cells_[cell_of(pts.point(i))].push_back(static_cast<int>(i));
        }
    }

    // Indices within the closed eps-ball around point i, in ascending index
    // order (scan order determinism).
    std::vector<int> neighbors(int i) const {
        const double* q = pts_.point(static_cast<size_t>(i));
        std::vector<int> out;
        std::vector<int64_t> key = cell_of(q);
        std::vector<int64_t> probe(key);
        walk(key, probe, 0, q, out);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::vector<int64_t> cell_of(const double* p) const {
        std::vector<int64_t> key(static_cast<size_t>(dim_));
        for (int c = 0; c < dim_; ++c) {
            key[static_cast<size_t>(c)] =
                static_cast<int64_t>(std::floor((p[c] - lo_[static_cast<size_t>(c)]) / eps_));
        }
        return key;
    }

    void walk(const std::vector<int64_t>& center, std::vector<int64_t>& probe, int axis,
              const double* q, std::vector<int>& out) const {
        if (axis == dim_) {
            const auto it = cells_.find(probe);
            if (it == cells_.end()) return;
            const double e2 = eps_ * eps_;
            for (int idx : it->second) {
                if (dist2(q, pts_.point(static_cast<size_t>(idx)), dim_) <= e2) out.push_back(idx);
            }
            return;
        }
        for (int64_t d = -1; d <= 1; ++d) {
            probe[static_cast<size_t>(axis)] = center[static_cast<size_t>(axis)] + d;
            walk(center, probe, axis + 1, q, out);
        }
    }

    const PointSet& pts_;
    double eps_;
    int dim_;
    std::vector<double> lo_;
    std::unordered_map<std::vector<int64_t>, std::vector<int>, CellKeyHash> cells_;
};

ClusterResult run_dbscan(const PointSet& pts,
                         const std::function<std::vector<int>(int)>& neighbors, int min_pts) {
    const size_t n = pts.size();
    ClusterResult result;
    result.labels.assign(n, kUnvisited);
    std::vector<uint64_t> sizes{0};  // index 0 unused (noise tracked separately)

    int next_cluster = 0;
    for (size_t start = 0; start < n; ++start) {
        if (result.labels[start] != kUnvisited) continue;
        std::vector<int> nbrs = neighbors(static_cast<int>(start));
        if (static_cast<int>(nbrs.size()) < min_pts) {
            result.labels[start] = kNoiseLabel;
            continue;
        }
        ++next_cluster;
        sizes.push_back(0);
        result.labels[start] = next_cluster;
        sizes[static_cast<size_t>(next_cluster)]++;
        std::deque<int> frontier(nbrs.begin(), nbrs.end());
        while (!frontier.empty()) {
            const int q = frontier.front();
            frontier.pop_front();
            const int lab = result.labels[static_cast<size_t>(q)];
            if (lab == kNoiseLabel) {
                // Border point: joins the first cluster that reaches it.
                result.labels[static_cast<size_t>(q)] = next_cluster;
                sizes[static_cast<size_t>(next_cluster)]++;
                continue;
            }
            if (lab != kUnvisited) continue;
            result.labels[static_cast<size_t>(q)] = next_cluster;
            sizes[static_cast<size_t>(next_cluster)]++;
            std::vector<int> qn = neighbors(q);
            if (static_cast<int>(qn.size()) >= min_pts) {
                frontier.insert(frontier.end(), qn.begin(), qn.end());
            }
        }
    }
    result.K = next_cluster;
    result.sizes.assign(sizes.begin() + 1, sizes.end());
    for (int lab : result.labels) {
        if (lab == kNoiseLabel) result.noise_count++;
    }
    return result;
}

}  // namespace

ClusterResult dbscan(const PointSet& pts, double eps, int min_pts) {
    if (!(eps > 0.0)) throw ParamError("dbscan needs eps > 0");
    if (min_pts < 1) throw ParamError("dbscan needs min_pts >= 1");
    if (pts.size() == 0) throw EmptyDomainError("dbscan needs at least one point");
    const CellGrid grid(pts, eps);
    return run_dbscan(pts, [&grid](int i) { return grid.neighbors(i); }, min_pts);
}

ClusterResult dbscan_brute_force(const PointSet& pts, double eps, int min_pts) {
    if (!(eps > 0.0)) throw ParamError("dbscan needs eps > 0");
    if (min_pts < 1) throw ParamError("dbscan needs min_pts >= 1");
    if (pts.size() == 0) throw EmptyDomainError("dbscan needs at least one point");
    const double e2 = eps * eps;
    const auto neighbors = [&](int i) {
        std::vector<int> out;
        for (size_t j = 0; j < pts.size(); ++j) {
            if (dist2(pts.point(static_cast<size_t>(i)), pts.point(j), pts.dim) <= e2) {
                out.push_back(static_cast<int>(j));
            }
        }
        return out;
    };
    return run_dbscan(pts, neighbors, min_pts);
}

ClusterResult count_multi(const IndexField& U, const BinaryMask& mask, double eps, int min_pts) {
    if (U.num_channels() < 3) throw ParamError("count_multi needs p >= 3 channels");
    const PointSet pts = PointSet::from_field(U, mask);
    if (pts.size() == 0) throw EmptyDomainError("count_multi over empty mask");
    return dbscan(pts, eps, min_pts);
}

namespace {

// Well-separated hues for label rendering.
void label_color(int label, uint8_t& r, uint8_t& g, uint8_t& b) {
    const double golden = 0.618033988749895;
    const double hue = std::fmod(golden * label, 1.0) * 6.0;
    const int sector = static_cast<int>(hue);
    const double f = hue - sector;
    const double v = 0.95, s = 0.75;
    const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
    double rr, gg, bb;
    switch (sector % 6) {
        case 0: rr = v; gg = t; bb = p; break;
        case 1: rr = q; gg = v; bb = p; break;
        case 2: rr = p; gg = v; bb = t; break;
        case 3: rr = p; gg = q; bb = v; break;
        case 4: rr = t; gg = p; bb = v; break;
        default: rr = v; gg = p; bb = q; break;
    }
    r = static_cast<uint8_t>(std::lround(rr * 255));
    g = static_cast<uint8_t>(std::lround(gg * 255));
    b = static_cast<uint8_t>(std::lround(bb * 255));
}

}  // namespace

RgbImage label_image_multi(const ClusterResult& result, const PointSet& pts, int width,
                           int height) {
    if (result.labels.size() != pts.size()) {
        throw ParamError("cluster result does not match point set");
    }
    RgbImage img(width, height);
    for (size_t i = 0; i < pts.size(); ++i) {
        const auto [row, col] = pts.origin[i];
        const size_t idx = static_cast<size_t>(row) * width + col;
        const int lab = result.labels[i];
        if (lab == 0) {
            img.r[idx] = img.g[idx] = img.b[idx] = 64;  // noise
        } else {
            label_color(lab, img.r[idx], img.g[idx], img.b[idx]);
        }
    }
    return img;
}

RgbImage colorize_labels(const ScalarField& labels) {
    RgbImage img(labels.width, labels.height);
    for (size_t i = 0; i < labels.size(); ++i) {
        const int lab = static_cast<int>(labels.data[i]);
        if (lab > 0) label_color(lab, img.r[i], img.g[i], img.b[i]);
    }
    return img;
}

}  // namespace codi
