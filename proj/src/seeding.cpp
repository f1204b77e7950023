#include "codi/seeding.hpp"

#include <algorithm>
#include <queue>
#include <random>
#include <set>
#include <sstream>

namespace codi {

void SeedSpec::validate(int width, int height) const {
    if (n1 < 1 || n2 < 1) throw ParamError("seed grid counts must be >= 1");
    if (d < 1) throw ParamError("seed size d must be >= 1");
    if (l < 0) throw ParamError("seed gap l must be >= 0");
    if (p < 1) throw ParamError("seed dimension p must be >= 1");
    const long span_h = static_cast<long>(n1) * d + static_cast<long>(n1 - 1) * l;
    const long span_w = static_cast<long>(n2) * d + static_cast<long>(n2 - 1) * l;
    if (span_h > height || span_w > width) {
        std::ostringstream msg;
        msg << "seeds do not fit: need " << span_w << "x" << span_h
            << " inside " << width << "x" << height;
        throw ParamError(msg.str());
    }
}

namespace {

// Top-left corner of seed square (i,j), 0-based grid indices, grid centered.
struct SeedLayout {
    int row0, col0, pitch;
    SeedLayout(const SeedSpec& s, int width, int height) {
        pitch = s.d + s.l;
        const int span_h = s.n1 * s.d + (s.n1 - 1) * s.l;
        const int span_w = s.n2 * s.d + (s.n2 - 1) * s.l;
        row0 = (height - span_h) / 2;
        col0 = (width - span_w) / 2;
    }
    int top(int i) const { return row0 + i * pitch; }
    int left(int j) const { return col0 + j * pitch; }
};

// Fisher-Yates with explicit bounded draws so the permutation depends only on
// the mt19937_64 stream, not on stdlib distribution internals.
void shuffle_indices(std::vector<int>& idx, std::mt19937_64& rng) {
    for (size_t i = idx.size(); i > 1; --i) {
        const size_t j = static_cast<size_t>(rng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
}

}  // namespace

SeedImage make_seed_image(const SeedSpec& spec, int width, int height) {
    spec.validate(width, height);
    const int M = spec.seed_count();
    const SeedLayout layout(spec, width, height);

    SeedImage out;
    out.seeded = BinaryMask(width, height, false);
    out.seed_values.resize(M);
    for (int m = 0; m < M; ++m) out.seed_values[m] = 255.0 / M * (m + 1);

    // Per-channel value for seed square (i,j), as a flat M-vector in raster
    // order of (i,j).
    std::vector<std::vector<double>> channel_values(spec.p, std::vector<double>(M));
    for (int i = 0; i < spec.n1; ++i) {
        for (int j = 0; j < spec.n2; ++j) {
            const int m = i * spec.n2 + j;
            channel_values[0][m] = 255.0 / M * (i * spec.n2 + (j + 1));
            if (spec.p >= 2) {
                // 1-based formula v = 255/M [n1 n2 - i n2 + j].
                channel_values[1][m] = 255.0 / M * (spec.n1 * spec.n2 - (i + 1) * spec.n2 + (j + 1));
            }
        }
    }
    std::mt19937_64 rng(spec.rng_seed);
    for (int c = 2; c < spec.p; ++c) {
        std::vector<int> perm(M);
        for (int m = 0; m < M; ++m) perm[m] = m;
        shuffle_indices(perm, rng);
        for (int m = 0; m < M; ++m) channel_values[c][m] = out.seed_values[perm[m]];
    }

    out.channels.assign(spec.p, ScalarField(width, height, 0.0));
    for (int i = 0; i < spec.n1; ++i) {
        for (int j = 0; j < spec.n2; ++j) {
            const int m = i * spec.n2 + j;
            for (int r = layout.top(i); r < layout.top(i) + spec.d; ++r) {
                for (int cpx = layout.left(j); cpx < layout.left(j) + spec.d; ++cpx) {
                    out.seeded.set(r, cpx, true);
                    for (int c = 0; c < spec.p; ++c) {
                        out.channels[c].at(r, cpx) = channel_values[c][m];
                    }
                }
            }
        }
    }
    return out;
}

int connected_components(const BinaryMask& mask, std::vector<int>& labels) {
    labels.assign(mask.data.size(), 0);
    int next = 0;
    std::queue<std::pair<int, int>> frontier;
    for (int i = 0; i < mask.height; ++i) {
        for (int j = 0; j < mask.width; ++j) {
            if (!mask.at(i, j) || labels[static_cast<size_t>(i) * mask.width + j] != 0) continue;
            ++next;
            labels[static_cast<size_t>(i) * mask.width + j] = next;
            frontier.emplace(i, j);
            while (!frontier.empty()) {
                auto [r, c] = frontier.front();
                frontier.pop();
                const int dr[4] = {-1, 1, 0, 0};
                const int dc[4] = {0, 0, -1, 1};
                for (int k = 0; k < 4; ++k) {
                    const int nr = r + dr[k], nc = c + dc[k];
                    if (nr < 0 || nr >= mask.height || nc < 0 || nc >= mask.width) continue;
                    size_t idx = static_cast<size_t>(nr) * mask.width + nc;
                    if (mask.at(nr, nc) && labels[idx] == 0) {
                        labels[idx] = next;
                        frontier.emplace(nr, nc);
                    }
                }
            }
        }
    }
    return next;
}

SeedRuleReport check_seed_rules(const SeedSpec& spec, const BinaryMask& mask) {
    spec.validate(mask.width, mask.height);
    const SeedLayout layout(spec, mask.width, mask.height);

    SeedRuleReport report;
    std::vector<int> labels;
    report.num_components = connected_components(mask, labels);
    if (report.num_components == 0) return report;

    std::vector<bool> covered(static_cast<size_t>(report.num_components) + 1, false);
    for (int i = 0; i < spec.n1; ++i) {
        for (int j = 0; j < spec.n2; ++j) {
            // Component ids touched by this seed square, 0 = background.
            std::set<int> touched;
            bool fully_inside_one = true;
            int inside = -1;
            for (int r = layout.top(i); r < layout.top(i) + spec.d; ++r) {
                for (int c = layout.left(j); c < layout.left(j) + spec.d; ++c) {
                    const int lab = labels[static_cast<size_t>(r) * mask.width + c];
                    touched.insert(lab);
                    if (lab == 0) fully_inside_one = false;
                    else if (inside == -1) inside = lab;
                    else if (inside != lab) fully_inside_one = false;
                }
            }
            if (fully_inside_one && inside > 0) covered[static_cast<size_t>(inside)] = true;
            touched.erase(0);
            if (touched.size() > 1) {
                std::ostringstream msg;
                msg << "seed (" << i + 1 << "," << j + 1 << ") spans " << touched.size()
                    << " components";
                report.violations.push_back({2, i * spec.n2 + j, msg.str()});
            }
        }
    }
    for (int comp = 1; comp <= report.num_components; ++comp) {
        if (!covered[static_cast<size_t>(comp)]) {
            std::ostringstream msg;
            msg << "component " << comp << " contains no full seed square";
            report.violations.push_back({1, comp, msg.str()});
        }
    }
    return report;
}

}  // namespace codi
