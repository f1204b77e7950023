#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codi/field.hpp"

namespace codi {

/// Seed layout: an n1 x n2 grid of d x d squares with gap l between adjacent
/// square boundaries (centers spaced d + l), centered in the target field.
struct SeedSpec {
    int n1 = 1;         ///< seed rows
    int n2 = 1;         ///< seed cols
    int d = 2;          ///< seed square side, pixels
    int l = 0;          ///< gap between adjacent seed boundaries, pixels
    int p = 1;          ///< number of seed dimensions (1 scalar, >= 3 multi)
    uint64_t rng_seed = 0;  ///< seed for the random-permutation dimensions

    int seed_count() const { return n1 * n2; }
    void validate(int width, int height) const;
};

struct SeedImage {
    std::vector<ScalarField> channels;  ///< U0^1 .. U0^p
    BinaryMask seeded;                  ///< D, union of all seed squares
    std::vector<double> seed_values;    ///< the M base values v_1..v_M

    int num_channels() const { return static_cast<int>(channels.size()); }
    int width() const { return seeded.width; }
    int height() const { return seeded.height; }
};

/// Generates the seed image. Channel 1 rasters values horizontally
/// (v = 255/M * [(i-1) n2 + j]), channel 2 starts from the bottom row
/// (v = 255/M * [n1 n2 - i n2 + j]), channels >= 3 permute channel 1's value
/// set with a PRNG seeded from spec.rng_seed.
SeedImage make_seed_image(const SeedSpec& spec, int width, int height);

/// Advisory check of the seed placement rules against the object mask:
/// rule 1, every 4-connected component contains at least one full seed
/// square; rule 2, no seed square spans two components.
struct SeedRuleReport {
    struct Violation {
        int rule;       // 1 or 2
        int component;  // component id (rule 1) or seed index (rule 2)
        std::string detail;
    };
    int num_components = 0;
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

SeedRuleReport check_seed_rules(const SeedSpec& spec, const BinaryMask& mask);

/// 4-connected component labeling; labels start at 1, background 0.
/// Returns the number of components.
int connected_components(const BinaryMask& mask, std::vector<int>& labels);

}  // namespace codi
