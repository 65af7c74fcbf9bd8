#pragma once

#include <vector>

#include "ugir/core/scribbles.hpp"
#include "ugir/core/volume.hpp"
#include "ugir/pipeline/session.hpp"

namespace ugir {

/// Connected components (8-connectivity) of the nonzero pixels, each as a
/// pixel list in raster order. Components are listed by first pixel.
std::vector<std::vector<Pixel>> connected_components(const MaskImage& mask);

/// Largest error component size between `pred` and `gt` in pixels.
int largest_error_component(const MaskImage& pred, const MaskImage& gt);

/// Scribbles a careful user would draw: one foreground stroke group per
/// missed component (gt minus pred) and one background group per spurious
/// component (pred minus gt), for components of at least `min_component`
/// pixels. Each group traces the component core, the pixels whose distance
/// to the component border is at least half the component's maximum.
ScribbleSet simulate_scribbles(const MaskImage& pred, const MaskImage& gt, int min_component = 20);

/// Simulated user against a ground-truth stack. A later round resubmits the
/// earlier strokes together with strokes for the remaining errors.
class SimulatedUser : public ScribbleSource {
 public:
  SimulatedUser(const BinaryMask& gt, int min_component = 20);
  ScribbleSet scribbles(int slice, int round, const MaskImage& current) override;

 private:
  const BinaryMask& gt_;
  int min_component_;
  int last_slice_ = -1;
  ScribbleSet previous_;
};

}  // namespace ugir
