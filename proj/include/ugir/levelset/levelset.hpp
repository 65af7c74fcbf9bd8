#pragma once

#include <functional>

#include "ugir/core/config.hpp"
#include "ugir/core/scribbles.hpp"
#include "ugir/core/volume.hpp"
#include "ugir/geodesic/geodesic.hpp"

namespace ugir {

/// Level-set function, positive inside the segmented region.
struct LevelSetField {
  ImageD phi;
};

/// Mean foreground probability inside {phi > 0} (c1) and in {phi <= 0} (c2).
struct RegionStats {
  double c1 = 1.0;
  double c2 = 0.0;
};

struct EnergyBreakdown {
  double e_region = 0.0;
  double e_user = 0.0;
  double e_length = 0.0;
  double e_distance = 0.0;
  double e_total = 0.0;
};

/// Numerical blow-up during evolution.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Signed distance of the mask, positive inside, zero level on pixel edges.
LevelSetField init_phi(const MaskImage& mask);

/// Empty inside falls back to c1 = 1, empty outside to c2 = 0.
RegionStats region_stats(const ImageD& prob, const ImageD& phi);

/// Discrete energy alpha*E_r + beta*E_u + lambda*E_l + mu*E_d. Rejects eta
/// values equal to 0 or 1.
EnergyBreakdown energy(const ImageD& phi, const ImageD& prob, const LikelihoodMap& eta, const RefineConfig& cfg);

/// Pixel-wise derivative of alpha*E_r + beta*E_u with c1/c2 held fixed at
/// their current values.
ImageD data_term_gradient(const ImageD& phi, const ImageD& prob, const LikelihoodMap& eta, const RefineConfig& cfg);

/// Called after every step with the step index (1-based) and the new field.
using EvolveObserver = std::function<void(int, const ImageD&)>;

/// Runs cfg.max_steps explicit gradient-descent steps. After each step
/// foreground seeds are lifted to >= epsilon and background seeds pushed to
/// <= -epsilon. Throws NumericalError on non-finite values.
LevelSetField evolve(const LevelSetField& phi0, const ImageD& prob, const LikelihoodMap& eta, const RefineConfig& cfg,
                     const SeedMasks* seeds = nullptr, const EvolveObserver& observer = {});

MaskImage extract_mask(const LevelSetField& field);

/// Mean |grad phi| over {|phi| < width}; 0 when the band is empty.
double mean_gradient_in_band(const ImageD& phi, double width);

}  // namespace ugir
