#include "ugir/levelset/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ugir/core/distance_transform.hpp"
#include "ugir/kernels/kernels.hpp"
#include "ugir/levelset/functions.hpp"

namespace ugir {
namespace {

void require_same(const ImageD& a, const auto& b, const char* what) {
  if (!a.same_shape(b)) throw InvalidInput(std::string("dims mismatch: ") + what);
}

ImageD gradient_magnitude(const ImageD& phi) {
  const int rows = phi.rows(), cols = phi.cols();
  ImageD out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const int up = std::max(r - 1, 0), down = std::min(r + 1, rows - 1);
    for (int c = 0; c < cols; ++c) {
      const int left = std::max(c - 1, 0), right = std::min(c + 1, cols - 1);
      const double gr = 0.5 * (phi(down, c) - phi(up, c));
      const double gc = 0.5 * (phi(r, right) - phi(r, left));
      out(r, c) = std::sqrt(gr * gr + gc * gc);
    }
  }
  return out;
}

void check_eta(const LikelihoodMap& eta) {
  for (double e : eta.eta.values()) {
    if (!(e > 0.0 && e < 1.0)) throw InvalidInput("eta must lie strictly inside (0, 1)");
  }
}

ImageD log_odds_of(const LikelihoodMap& eta) {
  ImageD out(eta.eta.rows(), eta.eta.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::log(eta.eta[i]) - std::log1p(-eta.eta[i]);
  return out;
}

void project_seeds(ImageD& phi, const SeedMasks& seeds, double eps) {
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (seeds.foreground[i]) phi[i] = std::max(phi[i], eps);
    if (seeds.background[i]) phi[i] = std::min(phi[i], -eps);
  }
}

}  // namespace

LevelSetField init_phi(const MaskImage& mask) { return {signed_distance(mask)}; }

RegionStats region_stats(const ImageD& prob, const ImageD& phi) {
  require_same(prob, phi, "probability map vs phi");
  double sum_in = 0.0, sum_out = 0.0;
  std::size_t nin = 0, nout = 0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (phi[i] > 0.0) {
      sum_in += prob[i];
      ++nin;
    } else {
      sum_out += prob[i];
      ++nout;
    }
  }
  RegionStats s;
  if (nin > 0) s.c1 = sum_in / static_cast<double>(nin);
  if (nout > 0) s.c2 = sum_out / static_cast<double>(nout);
  return s;
}

EnergyBreakdown energy(const ImageD& phi, const ImageD& prob, const LikelihoodMap& eta, const RefineConfig& cfg) {
  require_same(phi, prob, "phi vs probability map");
  require_same(phi, eta.eta, "phi vs eta");
  check_eta(eta);
  const auto stats = region_stats(prob, phi);
  const auto grad = gradient_magnitude(phi);
  const double eps = cfg.epsilon;
  EnergyBreakdown e;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double hin = levelset::smoothed_heaviside(phi[i], eps);
    const double hout = levelset::smoothed_heaviside(-phi[i], eps);
    const double p = prob[i];
    e.e_region += (p - stats.c1) * (p - stats.c1) * hin + (p - stats.c2) * (p - stats.c2) * hout;
    e.e_user -= hin * std::log(eta.eta[i]) + hout * std::log1p(-eta.eta[i]);
    e.e_length += levelset::smoothed_dirac(phi[i], eps) * grad[i];
    e.e_distance += levelset::double_well(grad[i]);
  }
  e.e_total = cfg.alpha * e.e_region + cfg.beta * e.e_user + cfg.lambda * e.e_length + cfg.mu * e.e_distance;
  return e;
}

ImageD data_term_gradient(const ImageD& phi, const ImageD& prob, const LikelihoodMap& eta, const RefineConfig& cfg) {
  require_same(phi, prob, "phi vs probability map");
  require_same(phi, eta.eta, "phi vs eta");
  check_eta(eta);
  const auto stats = region_stats(prob, phi);
  ImageD out(phi.rows(), phi.cols());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double d = levelset::smoothed_dirac(phi[i], cfg.epsilon);
    const double p = prob[i];
    const double region = (p - stats.c1) * (p - stats.c1) - (p - stats.c2) * (p - stats.c2);
    const double user = -(std::log(eta.eta[i]) - std::log1p(-eta.eta[i]));
    out[i] = d * (cfg.alpha * region + cfg.beta * user);
  }
  return out;
}

LevelSetField evolve(const LevelSetField& phi0, const ImageD& prob, const LikelihoodMap& eta, const RefineConfig& cfg,
                     const SeedMasks* seeds, const EvolveObserver& observer) {
  cfg.validate();
  require_same(phi0.phi, prob, "phi vs probability map");
  require_same(phi0.phi, eta.eta, "phi vs eta");
  check_eta(eta);
  if (seeds) {
    require_same(phi0.phi, seeds->foreground, "phi vs foreground seeds");
    require_same(phi0.phi, seeds->background, "phi vs background seeds");
  }

  const ImageD log_odds = log_odds_of(eta);
  ImageD phi = phi0.phi;
  if (seeds) project_seeds(phi, *seeds, cfg.epsilon);
  ImageD next(phi.rows(), phi.cols());
  kernels::StepWorkspace ws;
  kernels::StepCoefficients k{cfg.alpha, cfg.beta, cfg.lambda, cfg.mu, cfg.epsilon, cfg.dt, 1.0, 0.0};

  for (int step = 1; step <= cfg.max_steps; ++step) {
    const auto stats = region_stats(prob, phi);
    k.c1 = stats.c1;
    k.c2 = stats.c2;
    kernels::levelset_step_parallel(phi, prob, log_odds, k, ws, next);
    if (seeds) project_seeds(next, *seeds, cfg.epsilon);
    for (double v : next.values()) {
      if (!std::isfinite(v)) {
        const auto m = kernels::levelset_term_magnitudes(phi, prob, log_odds, k);
        std::ostringstream msg;
        msg << "level set diverged at step " << step << " (max |term|: distance " << m.distance << ", length "
            << m.length << ", region " << m.region << ", user " << m.user << ")";
        throw NumericalError(msg.str());
      }
    }
    std::swap(phi, next);
    if (observer) observer(step, phi);
  }
  return {std::move(phi)};
}

MaskImage extract_mask(const LevelSetField& field) {
  MaskImage out(field.phi.rows(), field.phi.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = field.phi[i] > 0.0 ? 1 : 0;
  return out;
}

double mean_gradient_in_band(const ImageD& phi, double width) {
  const auto grad = gradient_magnitude(phi);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (std::abs(phi[i]) < width) {
      sum += grad[i];
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

}  // namespace ugir
