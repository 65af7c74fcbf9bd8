#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP variant that share the same per-row body, so both produce
// bit-identical output regardless of thread count.

#include <cstdint>
#include <span>
#include <vector>

#include "ugir/core/volume.hpp"

namespace ugir::kernels {

/// Per-pixel mean, population variance and thresholded mask over N maps.
struct FuseOutputs {
  std::span<double> mean;
  std::span<double> variance;
  std::span<std::uint8_t> mask;
};

void fuse_serial(std::span<const std::span<const float>> members, double threshold, FuseOutputs out);
void fuse_parallel(std::span<const std::span<const float>> members, double threshold, FuseOutputs out);

/// Coefficients of one explicit level-set update.
struct StepCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double epsilon = 1.5;
  double dt = 1.0;
  double c1 = 1.0;
  double c2 = 0.0;
};

/// Scratch fields reused across steps.
struct StepWorkspace {
  ImageD flux_r, flux_c;    // d_p(|grad phi|) * grad phi
  ImageD normal_r, normal_c;  // grad phi / |grad phi|
  void resize(int rows, int cols);
};

/// next = phi + dt * (mu*R + lambda*delta*K + alpha*delta*((P-c2)^2 - (P-c1)^2) + beta*delta*log_odds)
/// with central differences and replicated borders. `log_odds` is
/// log(eta) - log(1 - eta).
void levelset_step_serial(const ImageD& phi, const ImageD& prob, const ImageD& log_odds, const StepCoefficients& k,
                          StepWorkspace& ws, ImageD& next);
void levelset_step_parallel(const ImageD& phi, const ImageD& prob, const ImageD& log_odds, const StepCoefficients& k,
                            StepWorkspace& ws, ImageD& next);

/// Largest absolute value of each update term, for divergence diagnostics.
struct TermMagnitudes {
  double distance = 0.0;
  double length = 0.0;
  double region = 0.0;
  double user = 0.0;
};
TermMagnitudes levelset_term_magnitudes(const ImageD& phi, const ImageD& prob, const ImageD& log_odds,
                                        const StepCoefficients& k);

/// True when OpenMP support was compiled in.
bool openmp_enabled();
int max_threads();

}  // namespace ugir::kernels
