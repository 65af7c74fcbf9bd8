#pragma once

#include <optional>

#include "ugir/core/scribbles.hpp"
#include "ugir/core/volume.hpp"

namespace ugir {

/// Geodesic distance from a seed set; 0 on seeds.
struct DistanceMap {
  ImageD values;
};

/// Per-pixel foreground likelihood derived from user scribbles.
struct LikelihoodMap {
  ImageD eta;
};

/// Exact shortest-path distance on the 8-connected pixel graph with edge
/// cost sqrt(|a - b|^2 + gamma^2 (I(a) - I(b))^2). `intensity` is expected in
/// [0, 1]. Throws when `seeds` is empty.
DistanceMap geodesic_distance(const ImageD& intensity, const MaskImage& seeds, double gamma);

/// eta = exp(-G_F) / (exp(-G_F) + exp(-G_B)) with G = min(g, D); a missing
/// map stands for the constant D.
LikelihoodMap interaction_likelihood(const std::optional<DistanceMap>& to_foreground,
                                     const std::optional<DistanceMap>& to_background, double D, int rows, int cols);

/// Geodesic maps from both seed sets (skipping empty ones), then eta.
LikelihoodMap likelihood_from_seeds(const ImageD& intensity, const SeedMasks& seeds, double gamma, double D);

}  // namespace ugir
