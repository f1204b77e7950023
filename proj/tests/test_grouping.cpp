#include <doctest.h>

#include <algorithm>
#include <random>

#include "codi/size_grouping.hpp"

using namespace codi;

namespace {

// Minimum energy over every contiguous partition of the sorted sizes,
// enumerated via the 2^(n-1) cut masks.
double exhaustive_best(const std::vector<double>& sizes, double lambda) {
    std::vector<double> s = sizes;
    std::sort(s.begin(), s.end());
    const int n = static_cast<int>(s.size());
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
        double energy = 0.0;
        int start = 0;
        for (int i = 0; i < n; ++i) {
            if (i == n - 1 || (mask >> i) & 1u) {
                const int cnt = i - start + 1;
                double mean = 0.0;
                for (int j = start; j <= i; ++j) mean += s[static_cast<size_t>(j)];
                mean /= cnt;
                double sse = 0.0;
                for (int j = start; j <= i; ++j) {
                    const double d = s[static_cast<size_t>(j)] - mean;
                    sse += d * d;
                }
                energy += lambda / cnt + sse;
                start = i + 1;
            }
        }
        best = std::min(best, energy);
    }
    return best;
}

}  // namespace

TEST_CASE("grouping energy formula") {
    SizeGroup g1{10.0, 2, {9.0, 11.0}};
    SizeGroup g2{100.0, 1, {100.0}};
    // lambda (1/2 + 1/1) + (1 + 1) + 0
    CHECK(grouping_energy({g1, g2}, 4.0) == doctest::Approx(4.0 * 1.5 + 2.0));
}

TEST_CASE("DP equals exhaustive enumeration on random instances") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> n_dist(1, 8);
    std::uniform_real_distribution<double> size_dist(1.0, 1500.0);
    std::uniform_real_distribution<double> lam_dist(0.0, 5.0);  // exponent of 10
    for (int trial = 0; trial < 100; ++trial) {
        const int n = n_dist(rng);
        std::vector<double> sizes;
        for (int i = 0; i < n; ++i) sizes.push_back(size_dist(rng));
        const double lambda = std::pow(10.0, lam_dist(rng));
        const SizeGrouping dp = regularized_kmeans(sizes, lambda);
        const double oracle = exhaustive_best(sizes, lambda);
        CHECK(dp.energy == doctest::Approx(oracle).epsilon(1e-9));
        // The reported groups reproduce the reported energy.
        CHECK(grouping_energy(dp.groups, lambda) == doctest::Approx(dp.energy).epsilon(1e-9));
    }
}

TEST_CASE("groups partition the sorted input into contiguous intervals") {
    const std::vector<double> sizes = {5, 300, 7, 290, 6, 1000};
    const SizeGrouping g = regularized_kmeans(sizes, 10.0);
    std::vector<double> flat;
    for (const auto& grp : g.groups) {
        CHECK(grp.count == static_cast<int>(grp.members.size()));
        CHECK(std::is_sorted(grp.members.begin(), grp.members.end()));
        double mean = 0;
        for (double v : grp.members) mean += v;
        CHECK(grp.centroid == doctest::Approx(mean / grp.count));
        flat.insert(flat.end(), grp.members.begin(), grp.members.end());
    }
    CHECK(std::is_sorted(flat.begin(), flat.end()));
    std::vector<double> sorted = sizes;
    std::sort(sorted.begin(), sorted.end());
    CHECK(flat == sorted);
}

TEST_CASE("lambda limits: zero gives singletons, huge gives one group") {
    const std::vector<double> sizes = {10, 20, 30, 500};
    const SizeGrouping fine = regularized_kmeans(sizes, 0.0);
    CHECK(fine.k == 4);
    const SizeGrouping coarse = regularized_kmeans(sizes, 1e12);
    CHECK(coarse.k == 1);
    CHECK(coarse.groups[0].centroid == doctest::Approx(140.0));
}

TEST_CASE("ties break toward fewer groups") {
    // Two identical sizes: k=1 and k=2 both give zero SSE; the penalty
    // lambda/1 * 2 vs lambda/2 decides, but at lambda = 0 they tie exactly.
    const SizeGrouping g = regularized_kmeans({5.0, 5.0}, 0.0);
    CHECK(g.k == 1);
}

TEST_CASE("k is non-increasing along a lambda sweep") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> size_dist(1.0, 2000.0);
    std::vector<double> sizes;
    for (int i = 0; i < 40; ++i) sizes.push_back(size_dist(rng));
    const LambdaSweep sweep = lambda_sweep(sizes, default_lambda_grid());
    REQUIRE(sweep.ks.size() == 60);
    for (size_t i = 1; i < sweep.ks.size(); ++i) CHECK(sweep.ks[i] <= sweep.ks[i - 1]);

    // Plateaus tile the grid and are sorted widest first.
    size_t covered = 0;
    for (const auto& p : sweep.plateaus) covered += p.width();
    CHECK(covered == sweep.ks.size());
    for (size_t i = 1; i < sweep.plateaus.size(); ++i) {
        CHECK(sweep.plateaus[i].width() <= sweep.plateaus[i - 1].width());
    }
}

TEST_CASE("well-separated size groups produce their plateau") {
    std::vector<double> sizes;
    std::mt19937_64 rng(11);
    std::normal_distribution<double> small(50.0, 3.0), big(400.0, 10.0);
    for (int i = 0; i < 15; ++i) sizes.push_back(small(rng));
    for (int i = 0; i < 10; ++i) sizes.push_back(big(rng));
    const LambdaSweep sweep = lambda_sweep(sizes, default_lambda_grid());
    const bool has_k2 = std::any_of(sweep.plateaus.begin(), sweep.plateaus.end(),
                                    [](const auto& p) { return p.k == 2; });
    CHECK(has_k2);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(regularized_kmeans({}, 1.0), ParamError);
    CHECK_THROWS_AS(regularized_kmeans({1.0}, -1.0), ParamError);
    CHECK_THROWS_AS(lambda_sweep({1.0, 2.0}, {}), ParamError);
}
