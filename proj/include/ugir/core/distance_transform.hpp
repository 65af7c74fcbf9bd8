#pragma once

#include "ugir/core/volume.hpp"

namespace ugir {

/// Exact squared Euclidean distance from every pixel to the nearest nonzero
/// pixel of `features` (separable lower-envelope algorithm). Distances are in
/// spacing units. Pixels get +inf when `features` is empty.
ImageD squared_distance_transform(const MaskImage& features, double row_spacing = 1.0, double col_spacing = 1.0);

ImageD distance_transform(const MaskImage& features, double row_spacing = 1.0, double col_spacing = 1.0);

/// Signed distance to the contour between inside and outside pixels, which
/// lies half a pixel from each: inside pixels carry +(distance to the
/// nearest outside pixel - 1/2), outside pixels -(distance to the nearest
/// inside pixel - 1/2). An empty (full) mask maps to the constant
/// -(rows + cols) (+(rows + cols)).
ImageD signed_distance(const MaskImage& mask);

}  // namespace ugir
