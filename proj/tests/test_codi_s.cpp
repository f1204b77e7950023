#include <doctest.h>

#include <numeric>

#include "codi/codi_s.hpp"

using namespace codi;

namespace {

IndexHistogram spikes(std::initializer_list<std::pair<int, uint64_t>> entries) {
    IndexHistogram h;
    for (const auto& [bin, count] : entries) {
        h.bins[static_cast<size_t>(bin)] = count;
        h.total += count;
    }
    return h;
}

}  // namespace

TEST_CASE("histogram counts rounded masked pixels") {
    ScalarField u(3, 1);
    u.data = {10.4, 10.6, 200.0};
    BinaryMask mask(3, 1, true);
    mask.set(0, 2, false);
    const IndexHistogram h = build_histogram(u, mask);
    CHECK(h.total == 2);
    CHECK(h.bins[10] == 1);
    CHECK(h.bins[11] == 1);
    CHECK(h.bins[200] == 0);  // unmasked

    const BinaryMask empty(3, 1, false);
    CHECK_THROWS_AS(build_histogram(u, empty), EmptyDomainError);
}

TEST_CASE("histogram clamps out-of-range values to the end bins") {
    ScalarField u(2, 1);
    u.data = {-5.0, 300.0};
    const IndexHistogram h = build_histogram(u, BinaryMask(2, 1, true));
    CHECK(h.bins[0] == 1);
    CHECK(h.bins[255] == 1);
}

TEST_CASE("smoothing preserves total mass exactly") {
    const IndexHistogram h = spikes({{3, 100}, {128, 50}, {254, 77}});
    for (const double sigma : {0.05, 0.3, 0.6, 1.2}) {
        const IndexHistogram s = smooth_histogram(h, sigma, 5);
        REQUIRE(s.has_smoothed());
        const double mass = std::accumulate(s.smoothed.begin(), s.smoothed.end(), 0.0);
        CHECK(mass == doctest::Approx(static_cast<double>(h.total)).epsilon(1e-12));
    }
}

TEST_CASE("smoothing a single spike is symmetric around it") {
    const IndexHistogram s = smooth_histogram(spikes({{100, 1000}}), 1.0, 5);
    CHECK(s.smoothed[99] == doctest::Approx(s.smoothed[101]));
    CHECK(s.smoothed[95] == doctest::Approx(s.smoothed[105]));
    CHECK(s.smoothed[100] > s.smoothed[99]);
}

TEST_CASE("peak counting finds separated spikes and their split points") {
    const IndexHistogram s = smooth_histogram(spikes({{40, 100}, {120, 80}, {220, 90}}), 0.6, 5);
    const PeakCount peaks = count_peaks(s);
    CHECK(peaks.K == 3);
    REQUIRE(peaks.maxima.size() == 3);
    CHECK(peaks.maxima[0] == 40);
    CHECK(peaks.maxima[1] == 120);
    CHECK(peaks.maxima[2] == 220);
    REQUIRE(peaks.minima.size() == 2);
    CHECK(peaks.minima[0] > 40);
    CHECK(peaks.minima[0] < 120);
}

TEST_CASE("bin zero never counts as a peak") {
    const IndexHistogram s = smooth_histogram(spikes({{0, 100000}, {128, 10}}), 0.6, 5);
    const PeakCount peaks = count_peaks(s);
    CHECK(peaks.K == 1);
    CHECK(peaks.maxima[0] == 128);
}

TEST_CASE("plateaus collapse to a single peak") {
    IndexHistogram h;
    h.smoothed.assign(256, 0.0);
    for (int i = 50; i <= 54; ++i) h.smoothed[static_cast<size_t>(i)] = 10.0;  // flat top
    h.smoothed[150] = 5.0;
    const PeakCount peaks = count_peaks(h);
    CHECK(peaks.K == 2);
}

TEST_CASE("boundary maxima at bin 255 are counted") {
    IndexHistogram h;
    h.smoothed.assign(256, 0.0);
    h.smoothed[255] = 3.0;
    h.smoothed[254] = 1.0;
    const PeakCount peaks = count_peaks(h);
    CHECK(peaks.K == 1);
    CHECK(peaks.maxima[0] == 255);
}

TEST_CASE("1-D labeling splits pixels at the minima") {
    ScalarField u(4, 1);
    u.data = {30.0, 35.0, 200.0, 210.0};
    BinaryMask mask(4, 1, true);
    const ScalarField labels = label_pixels_1d(u, mask, {100});
    CHECK(labels.data == std::vector<double>{1, 1, 2, 2});
    const auto sizes = label_sizes(labels, 2);
    CHECK(sizes == std::vector<uint64_t>{0, 2, 2});

    mask.set(0, 1, false);
    const ScalarField masked = label_pixels_1d(u, mask, {100});
    CHECK(masked.data[1] == 0.0);
}
