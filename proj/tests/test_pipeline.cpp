#include <doctest.h>

#include "codi/fixtures.hpp"
#include "codi/pipeline.hpp"
#include "codi/seeding.hpp"

using namespace codi;

namespace {

RgbImage to_rgb(const ScalarField& f) {
    RgbImage img(f.width, f.height);
    for (size_t i = 0; i < f.size(); ++i) {
        const auto v = static_cast<uint8_t>(f.data[i]);
        img.r[i] = img.g[i] = img.b[i] = v;
    }
    return img;
}

int component_count(const ScalarField& f) {
    BinaryMask m(f.width, f.height);
    for (size_t i = 0; i < f.size(); ++i) m.data[i] = f.data[i] > 128.0 ? 1 : 0;
    std::vector<int> labels;
    return connected_components(m, labels);
}

}  // namespace

TEST_CASE("config parsing applies keys and rejects bad input") {
    const PipelineConfig cfg = parse_config(
        "# comment line\n"
        "counter = scalar\n"
        "sigma = 0.8\n"
        "n1 = 3  # trailing comment\n"
        "max_iters = 40\n");
    CHECK(cfg.counter == PipelineConfig::Counter::Scalar);
    CHECK(cfg.p == 1);  // counter choice resolves the default p
    CHECK(cfg.sigma == 0.8);
    CHECK(cfg.n1 == 3);
    CHECK(cfg.solver.max_iters == 40);

    CHECK_THROWS_AS(parse_config("bogus_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("sigma\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("sigma = fast\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("n1 = 2.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("counter = both\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("fidelity = nowhere\n"), ConfigError);

    // Error messages name the offending key.
    try {
        parse_config("minpts = soon\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("minpts") != std::string::npos);
    }
}

TEST_CASE("counter/p cross-constraints") {
    CHECK_THROWS_AS(parse_config("counter = scalar\np = 4\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("counter = multi\np = 1\n"), ConfigError);
    // Explicit valid combination survives.
    const PipelineConfig cfg = parse_config("counter = multi\np = 3\n");
    CHECK(cfg.p == 3);
}

TEST_CASE("lambda_grid accepts ranges and lists") {
    const PipelineConfig ranged = parse_config("lambda_grid = 1e2:1e4:5\n");
    REQUIRE(ranged.lambda_grid.size() == 5);
    CHECK(ranged.lambda_grid.front() == doctest::Approx(100.0));
    CHECK(ranged.lambda_grid.back() == doctest::Approx(10000.0));
    CHECK(ranged.lambda_grid[1] / ranged.lambda_grid[0] ==
          doctest::Approx(ranged.lambda_grid[2] / ranged.lambda_grid[1]));  // log-spaced

    const PipelineConfig listed = parse_config("lambda_grid = 5,1,3\n");
    CHECK(listed.lambda_grid == std::vector<double>{1.0, 3.0, 5.0});

    CHECK_THROWS_AS(parse_config("lambda_grid = 10:5:4\n"), ConfigError);
}

TEST_CASE("seed spec auto-fit packs the usable interior") {
    PipelineConfig cfg;
    cfg.d = 2;
    cfg.l = 6;
    cfg.border_width = 1;
    // usable = extent - 2; n = (usable - d) / (d + l) + 1
    const SeedSpec spec = cfg.resolve_seed_spec(100, 50);
    CHECK(spec.n2 == (100 - 2 - 2) / 8 + 1);
    CHECK(spec.n1 == (50 - 2 - 2) / 8 + 1);
    CHECK(spec.p == cfg.p);

    cfg.n1 = 4;
    CHECK(cfg.resolve_seed_spec(100, 50).n1 == 4);

    PipelineConfig tiny;
    CHECK_THROWS_AS(tiny.resolve_seed_spec(3, 3), ConfigError);
}

TEST_CASE("fixtures have the advertised shapes and component counts") {
    const ScalarField two = gen_fixture("two-squares-a");
    CHECK(two.width == 91);
    CHECK(two.height == 47);
    CHECK(component_count(two) == 1);  // open passage joins the squares

    const ScalarField ten = gen_fixture("ten-squares");
    CHECK(ten.width == 127);
    CHECK(ten.height == 126);
    CHECK(component_count(ten) == 10);

    const ScalarField hex = gen_fixture("hexagons");
    CHECK(hex.width == 281);
    CHECK(component_count(hex) == 6);

    const ScalarField cells = gen_fixture("three-cells");
    CHECK(component_count(cells) == 1);  // walls are partially open

    const ScalarField grid = gen_fixture("object-grid");
    CHECK(component_count(grid) == 200);

    CHECK_THROWS_AS(gen_fixture("nonagons"), ParamError);
}

TEST_CASE("pipeline runs end to end on a small fixture") {
    PipelineConfig cfg;
    cfg.solver.max_iters = 80;
    const RunReport report = run_pipeline_on(to_rgb(gen_fixture("two-squares-b")), cfg);
    CHECK(report.width == 91);
    CHECK(report.height == 47);
    CHECK(report.count >= 1);
    CHECK(report.trials.size() == 1);
    CHECK(report.report_text.find("count:") != std::string::npos);
    CHECK(!report.object_sizes.empty());
}

TEST_CASE("multi-trial reports aggregate min/max/mode") {
    PipelineConfig cfg;
    cfg.solver.max_iters = 40;
    cfg.trials = 3;
    const RunReport report = run_pipeline_on(to_rgb(gen_fixture("two-squares-b")), cfg);
    CHECK(report.trials.size() == 3);
    CHECK(report.count_min <= report.count);
    CHECK(report.count <= report.count_max);
    // Trial seeds advance deterministically.
    CHECK(report.trials[0].rng_seed + 1 == report.trials[1].rng_seed);
}

TEST_CASE("pipeline errors carry the failing stage") {
    PipelineConfig cfg;
    cfg.recipe = "thresh:gt,300";  // empty mask: weight degenerates
    try {
        run_pipeline_on(to_rgb(gen_fixture("two-squares-b")), cfg);
        FAIL("expected a stage error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("[weight]") != std::string::npos);
    }
}
