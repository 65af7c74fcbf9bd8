#include <algorithm>
#include <cmath>

#include "ugir/kernels/kernels.hpp"
#include "ugir/levelset/functions.hpp"

namespace ugir::kernels {
namespace {

constexpr double kGradientFloor = 1e-8;

inline int clampi(int v, int hi) { return v < 0 ? 0 : (v > hi ? hi : v); }

// Gradient, regularization flux and unit normal for row r.
inline void gradient_row(const ImageD& phi, StepWorkspace& ws, int r) {
  const int rows = phi.rows(), cols = phi.cols();
  const int up = clampi(r - 1, rows - 1), down = clampi(r + 1, rows - 1);
  for (int c = 0; c < cols; ++c) {
    const int left = clampi(c - 1, cols - 1), right = clampi(c + 1, cols - 1);
    const double gr = 0.5 * (phi(down, c) - phi(up, c));
    const double gc = 0.5 * (phi(r, right) - phi(r, left));
    const double s = std::sqrt(gr * gr + gc * gc);
    const double rate = levelset::double_well_rate(s);
    const double inv = 1.0 / std::max(s, kGradientFloor);
    ws.flux_r(r, c) = rate * gr;
    ws.flux_c(r, c) = rate * gc;
    ws.normal_r(r, c) = gr * inv;
    ws.normal_c(r, c) = gc * inv;
  }
}

inline double divergence(const ImageD& fr, const ImageD& fc, int r, int c) {
  const int rows = fr.rows(), cols = fr.cols();
  const int up = clampi(r - 1, rows - 1), down = clampi(r + 1, rows - 1);
  const int left = clampi(c - 1, cols - 1), right = clampi(c + 1, cols - 1);
  return 0.5 * (fr(down, c) - fr(up, c)) + 0.5 * (fc(r, right) - fc(r, left));
}

inline void update_row(const ImageD& phi, const ImageD& prob, const ImageD& log_odds, const StepCoefficients& k,
                       const StepWorkspace& ws, ImageD& next, int r) {
  for (int c = 0; c < phi.cols(); ++c) {
    const double v = phi(r, c);
    const double dist_reg = divergence(ws.flux_r, ws.flux_c, r, c);
    double update = k.mu * dist_reg;
    const double dirac = levelset::smoothed_dirac(v, k.epsilon);
    if (dirac != 0.0) {
      const double curvature = divergence(ws.normal_r, ws.normal_c, r, c);
      const double p = prob(r, c);
      const double region = (p - k.c2) * (p - k.c2) - (p - k.c1) * (p - k.c1);
      update += dirac * (k.lambda * curvature + k.alpha * region + k.beta * log_odds(r, c));
    }
    next(r, c) = v + k.dt * update;
  }
}

}  // namespace

void StepWorkspace::resize(int rows, int cols) {
  if (flux_r.rows() == rows && flux_r.cols() == cols) return;
  flux_r = ImageD(rows, cols);
  flux_c = ImageD(rows, cols);
  normal_r = ImageD(rows, cols);
  normal_c = ImageD(rows, cols);
}

void levelset_step_serial(const ImageD& phi, const ImageD& prob, const ImageD& log_odds, const StepCoefficients& k,
                          StepWorkspace& ws, ImageD& next) {
  ws.resize(phi.rows(), phi.cols());
  if (!next.same_shape(phi)) next = ImageD(phi.rows(), phi.cols());
  for (int r = 0; r < phi.rows(); ++r) gradient_row(phi, ws, r);
  for (int r = 0; r < phi.rows(); ++r) update_row(phi, prob, log_odds, k, ws, next, r);
}

void levelset_step_parallel(const ImageD& phi, const ImageD& prob, const ImageD& log_odds, const StepCoefficients& k,
                            StepWorkspace& ws, ImageD& next) {
  ws.resize(phi.rows(), phi.cols());
  if (!next.same_shape(phi)) next = ImageD(phi.rows(), phi.cols());
  const int rows = phi.rows();
#pragma omp parallel
  {
#pragma omp for schedule(static)
    for (int r = 0; r < rows; ++r) gradient_row(phi, ws, r);
#pragma omp for schedule(static)
    for (int r = 0; r < rows; ++r) update_row(phi, prob, log_odds, k, ws, next, r);
  }
}

TermMagnitudes levelset_term_magnitudes(const ImageD& phi, const ImageD& prob, const ImageD& log_odds,
                                        const StepCoefficients& k) {
  StepWorkspace ws;
  ws.resize(phi.rows(), phi.cols());
  for (int r = 0; r < phi.rows(); ++r) gradient_row(phi, ws, r);
  TermMagnitudes m;
  auto track = [](double& slot, double v) {
    if (std::isnan(v) || std::abs(v) > slot) slot = std::isnan(v) ? v : std::abs(v);
  };
  for (int r = 0; r < phi.rows(); ++r) {
    for (int c = 0; c < phi.cols(); ++c) {
      const double dirac = levelset::smoothed_dirac(phi(r, c), k.epsilon);
      const double p = prob(r, c);
      track(m.distance, k.mu * divergence(ws.flux_r, ws.flux_c, r, c));
      track(m.length, k.lambda * dirac * divergence(ws.normal_r, ws.normal_c, r, c));
      track(m.region, k.alpha * dirac * ((p - k.c2) * (p - k.c2) - (p - k.c1) * (p - k.c1)));
      track(m.user, k.beta * dirac * log_odds(r, c));
    }
  }
  return m;
}

}  // namespace ugir::kernels
