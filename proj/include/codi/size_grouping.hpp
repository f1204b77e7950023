#pragma once

#include <vector>

#include "codi/errors.hpp"

namespace codi {

/// One group of similar-sized objects: a contiguous interval of the sorted
/// sizes.
struct SizeGroup {
    double centroid = 0.0;          ///< mean size in the group, pixels
    int count = 0;                  ///< number of objects in the group
    std::vector<double> members;    ///< the sizes themselves, ascending
};

struct SizeGrouping {
    int k = 0;
    std::vector<SizeGroup> groups;  ///< ascending by centroid
    double energy = 0.0;
    double lambda = 0.0;
};

/// Energy of a given contiguous grouping under the regularizer weight lambda:
/// lambda * sum(1/n_i) + within-group squared deviation from the mean.
double grouping_energy(const std::vector<SizeGroup>& groups, double lambda);

/// Global minimizer of the regularized grouping energy over every k and every
/// contiguous partition of the sorted sizes, by exact dynamic programming.
/// Ties break toward smaller k.
SizeGrouping regularized_kmeans(const std::vector<double>& sizes, double lambda);

struct LambdaSweep {
    std::vector<double> lambdas;
    std::vector<int> ks;           ///< k at each grid value
    struct Plateau {
        int k;
        size_t first, last;        ///< inclusive grid index range
        double lambda_lo, lambda_hi;
        size_t width() const { return last - first + 1; }
    };
    std::vector<Plateau> plateaus;  ///< sorted by width, widest first
};

/// Evaluates regularized_kmeans over the grid and extracts maximal runs of
/// constant k.
LambdaSweep lambda_sweep(const std::vector<double>& sizes, const std::vector<double>& grid);

/// 60 log-spaced values in [1e2, 1e6].
std::vector<double> default_lambda_grid();

}  // namespace codi
