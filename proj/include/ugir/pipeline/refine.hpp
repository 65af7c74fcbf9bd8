#pragma once

#include "ugir/core/config.hpp"
#include "ugir/core/scribbles.hpp"
#include "ugir/geodesic/geodesic.hpp"
#include "ugir/levelset/levelset.hpp"

namespace ugir {

struct SliceRefinement {
  MaskImage mask;
  LevelSetField phi;
  LikelihoodMap eta;
  SeedMasks seeds;
  double geodesic_ms = 0.0;
  double evolve_ms = 0.0;
};

/// One interactive refinement: rasterize scribbles, geodesic likelihood on
/// the [0,1]-normalized intensity, then level-set evolution started from the
/// signed distance of `current`.
SliceRefinement refine_slice(const ImageD& intensity, const ImageD& prob, const MaskImage& current,
                             const ScribbleSet& scribbles, const RefineConfig& cfg);

}  // namespace ugir
