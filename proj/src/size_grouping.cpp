#include "codi/size_grouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace codi {

double grouping_energy(const std::vector<SizeGroup>& groups, double lambda) {
    double energy = 0.0;
    for (const auto& g : groups) {
        energy += lambda / g.count;
        for (double s : g.members) {
            const double d = s - g.centroid;
            energy += d * d;
        }
    }
    return energy;
}

SizeGrouping regularized_kmeans(const std::vector<double>& sizes, double lambda) {
    if (sizes.empty()) throw ParamError("regularized_kmeans needs at least one size");
    if (lambda < 0.0) throw ParamError("regularized_kmeans needs lambda >= 0");

    std::vector<double> s = sizes;
    std::sort(s.begin(), s.end());
    const size_t n = s.size();

    // Prefix sums for O(1) interval SSE.
    std::vector<double> ps(n + 1, 0.0), ps2(n + 1, 0.0);
    for (size_t i = 0; i < n; ++i) {
        ps[i + 1] = ps[i] + s[i];
        ps2[i + 1] = ps2[i] + s[i] * s[i];
    }
    const auto segment_cost = [&](size_t i, size_t j) {  // items [i, j)
        const double cnt = static_cast<double>(j - i);
        const double sum = ps[j] - ps[i];
        const double sse = (ps2[j] - ps2[i]) - sum * sum / cnt;
        return lambda / cnt + std::max(sse, 0.0);
    };

    // best[j] = minimal (cost, group count) over partitions of the first j
    // items; ties break toward fewer groups.
    std::vector<double> best(n + 1, std::numeric_limits<double>::infinity());
    std::vector<int> best_k(n + 1, 0);
    std::vector<size_t> cut(n + 1, 0);
    best[0] = 0.0;
    for (size_t j = 1; j <= n; ++j) {
        for (size_t i = 0; i < j; ++i) {
            const double cost = best[i] + segment_cost(i, j);
            const int k = best_k[i] + 1;
            const double tol =
                std::isfinite(best[j]) ? 1e-12 * (1.0 + std::abs(best[j])) : 0.0;
            if (cost < best[j] - tol || (std::abs(cost - best[j]) <= tol && k < best_k[j])) {
                best[j] = cost;
                best_k[j] = k;
                cut[j] = i;
            }
        }
    }

    SizeGrouping out;
    out.lambda = lambda;
    out.energy = best[n];
    out.k = best_k[n];
    std::vector<std::pair<size_t, size_t>> segments;
    for (size_t j = n; j > 0; j = cut[j]) segments.emplace_back(cut[j], j);
    std::reverse(segments.begin(), segments.end());
    for (const auto& [i, j] : segments) {
        SizeGroup g;
        g.members.assign(s.begin() + static_cast<long>(i), s.begin() + static_cast<long>(j));
        g.count = static_cast<int>(j - i);
        g.centroid = (ps[j] - ps[i]) / g.count;
        out.groups.push_back(std::move(g));
    }
    return out;
}

LambdaSweep lambda_sweep(const std::vector<double>& sizes, const std::vector<double>& grid) {
    if (grid.empty()) throw ParamError("lambda_sweep needs a non-empty grid");
    if (!std::is_sorted(grid.begin(), grid.end())) {
        throw ParamError("lambda_sweep grid must be ascending");
    }
    LambdaSweep sweep;
    sweep.lambdas = grid;
    for (double lam : grid) sweep.ks.push_back(regularized_kmeans(sizes, lam).k);

    size_t start = 0;
    for (size_t i = 1; i <= sweep.ks.size(); ++i) {
        if (i == sweep.ks.size() || sweep.ks[i] != sweep.ks[start]) {
            sweep.plateaus.push_back({sweep.ks[start], start, i - 1, grid[start], grid[i - 1]});
            start = i;
        }
    }
    std::stable_sort(sweep.plateaus.begin(), sweep.plateaus.end(),
                     [](const auto& a, const auto& b) { return a.width() > b.width(); });
    return sweep;
}

std::vector<double> default_lambda_grid() {
    std::vector<double> grid;
    const int count = 60;
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        grid.push_back(std::pow(10.0, 2.0 + 4.0 * t));
    }
    return grid;
}

}  // namespace codi
