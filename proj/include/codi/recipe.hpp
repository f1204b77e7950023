#pragma once

#include <string>

#include "codi/edge_weight.hpp"

namespace codi {

/// Result of evaluating a weight recipe: the diffusion weight g and the
/// object mask (AND of all mask-valued parts; all-true when the recipe never
/// produced a mask).
struct RecipeResult {
    EdgeWeight weight;
    BinaryMask object_mask;
};

/// Evaluates the weight recipe mini-language against an input image.
///
/// Steps, separated by whitespace or ';', evaluated left to right:
///   smooth:SIGMA       Gaussian-smooth the working field
///   equalize           global histogram equalization of the working field
///   chansub:A,B        restart the working field from channel A - B (0=R,1=G,2=B)
///   edge:KIND,TAU      apply g-tilde (exp) or g-bar (rational) to |grad|
///   thresh:OP,T        binarize the working field (OP is lt or gt)
///   morph:OP,R         dilate/erode the working mask with a radius-R disk
///   maskfile:PATH      load an image, nonzero pixels true
///
/// A step that starts a new source (chansub, maskfile) commits the previous
/// working value as a factor of the final weight; the last value is committed
/// at the end. All committed factors are multiplied pointwise.
RecipeResult eval_recipe(const RgbImage& img, const std::string& recipe);

}  // namespace codi
