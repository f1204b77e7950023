#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codi/codi_m.hpp"
#include "codi/codi_s.hpp"
#include "codi/diffusion.hpp"
#include "codi/size_grouping.hpp"

namespace codi {

struct PipelineConfig {
    std::string input;
    std::string output_dir;
    double downsample_factor = 1.0;
    std::string recipe = "thresh:gt,128";

    // Seed layout; n1/n2 = 0 means fit as many as the image allows.
    int n1 = 0, n2 = 0;
    int d = 2, l = 6;
    int p = 4;
    bool p_explicit = false;
    uint64_t rng_seed = 0;

    SolverParams solver;
    int border_width = 1;

    enum class Counter { Scalar, Multi };
    Counter counter = Counter::Multi;
    double sigma = 0.6;  ///< CODI-S histogram smoothing
    int r = 5;           ///< CODI-S kernel radius, bins
    double eps = 1.1;    ///< CODI-M neighborhood radius
    int min_pts = 15;    ///< CODI-M density threshold

    int trials = 1;
    bool group = false;
    std::vector<double> lambda_grid;  ///< empty = default grid

    void validate() const;
    /// Resolves counter-dependent defaults (p) and auto seed counts for the
    /// given image size.
    SeedSpec resolve_seed_spec(int width, int height) const;
};

/// Parses a key=value document (one pair per line, '#' comments). Unknown
/// keys and constraint violations throw ConfigError naming the key.
PipelineConfig parse_config(const std::string& text);

/// Applies one "key=value" assignment on top of an existing config.
void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value);

struct TrialResult {
    int count = 0;
    uint64_t rng_seed = 0;
    double seconds = 0.0;
};

struct RunReport {
    int width = 0, height = 0;       ///< dims after downsampling
    int count = 0;                   ///< mode of the trial counts
    int count_min = 0, count_max = 0;
    double mean_seconds = 0.0;
    std::vector<TrialResult> trials;
    std::vector<uint64_t> object_sizes;  ///< pixels per counted object, last trial
    SeedRuleReport seed_report;
    LambdaSweep sweep;                   ///< populated when grouping requested
    SizeGrouping grouping;               ///< grouping at the widest plateau
    std::string report_text;
};

/// Full pipeline on an in-memory image: weight recipe, border outline, seeds,
/// diffusion, counting, optional size grouping, artifact emission (when
/// output_dir is set).
RunReport run_pipeline_on(const RgbImage& img, const PipelineConfig& cfg);

/// Loads cfg.input and runs the pipeline.
RunReport run_pipeline(const PipelineConfig& cfg);

}  // namespace codi
