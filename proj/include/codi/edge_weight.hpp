#pragma once

#include <string>
#include <vector>

#include "codi/field.hpp"

namespace codi {

/// Diffusion weight g(Phi0) with values in [0,1] and its maximum G0.
struct EdgeWeight {
    ScalarField g;
    double G0 = 0.0;

    static EdgeWeight from_field(ScalarField f);
    static EdgeWeight from_mask(const BinaryMask& m);
};

enum class EdgeKind { Exp, Rational };       // e^{-tau t^2} vs (1 + tau t^2)^{-1}
enum class CompareOp { Lt, Gt };
enum class MorphOp { Dilate, Erode };

/// Separable convolution with a truncated sampled Gaussian (radius ceil(3
/// sigma)), replicate-edge padding. Preserves constants exactly.
ScalarField gaussian_smooth(const ScalarField& f, double sigma);

/// g = ghat(|grad(G_sigma * f)|) with central differences and replicate
/// boundary; sigma = 0 skips the smoothing.
EdgeWeight edge_function(const ScalarField& f, EdgeKind kind, double tau, double sigma);

/// Pixelwise indicator: mask true where the comparison against t holds.
BinaryMask threshold_mask(const ScalarField& f, CompareOp op, double t);

/// Dilation/erosion with a Euclidean-distance disk of the given radius.
/// Outside the image counts as false.
BinaryMask morphology(const BinaryMask& mask, MorphOp op, int radius);

/// Pixelwise (channel a - channel b), clamped to [0,255]. Channels 0=R, 1=G,
/// 2=B.
ScalarField channel_subtract(const RgbImage& img, int a, int b);

/// Global histogram equalization over 256 gray levels, output in [0,255].
ScalarField equalize_histogram(const ScalarField& f);

/// Pointwise product of edge-weight fields and masks (masks cast to {0,1}).
/// Throws DegenerateWeightError if the product is identically zero.
struct WeightPart {
    enum class Kind { Weight, Mask } kind;
    ScalarField weight;  // valid when kind == Weight
    BinaryMask mask;     // valid when kind == Mask

    static WeightPart from(EdgeWeight w) {
        return {Kind::Weight, std::move(w.g), {}};
    }
    static WeightPart from(BinaryMask m) { return {Kind::Mask, {}, std::move(m)}; }
};

EdgeWeight compose_weight(const std::vector<WeightPart>& parts);

}  // namespace codi
