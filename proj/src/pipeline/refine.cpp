#include "ugir/pipeline/refine.hpp"

#include <chrono>

namespace ugir {
namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

SliceRefinement refine_slice(const ImageD& intensity, const ImageD& prob, const MaskImage& current,
                             const ScribbleSet& scribbles, const RefineConfig& cfg) {
  cfg.validate();
  if (!intensity.same_shape(prob) || !intensity.same_shape(current)) {
    throw InvalidInput("image, probability and mask slices differ in dims");
  }
  SliceRefinement out;
  auto t0 = std::chrono::steady_clock::now();
  out.seeds = rasterize_scribbles(scribbles, intensity.rows(), intensity.cols());
  out.eta = likelihood_from_seeds(intensity, out.seeds, cfg.gamma, cfg.D);
  out.geodesic_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  out.phi = evolve(init_phi(current), prob, out.eta, cfg, &out.seeds);
  out.evolve_ms = ms_since(t0);
  out.mask = extract_mask(out.phi);
  return out;
}

}  // namespace ugir
