#pragma once

#include <json.hpp>

namespace ugir {

/// Tunables for scheduling and level-set refinement.
struct RefineConfig {
  double alpha = 0.1;    // region (probability map) weight
  double beta = 0.5;     // user-interaction weight
  double lambda = 0.3;   // contour length weight
  double mu = 0.005;     // distance regularization weight
  double D = 4.0;        // geodesic distance clamp
  double epsilon = 1.5;  // Heaviside / Dirac half-width, pixels
  double dt = 1.0;
  int max_steps = 200;
  double zeta = 1e-6;    // slice-uncertainty stabilizer
  double m_prime_fraction = 0.6;
  int early_stop_count = 3;
  double gamma = 1.0;    // intensity weight of geodesic edge cost
  double threshold = 0.5;

  /// Throws InvalidInput on any violated invariant (mu*dt < 0.25, 0 < threshold < 1, ...).
  void validate() const;

  bool operator==(const RefineConfig&) const = default;
};

void to_json(nlohmann::json& j, const RefineConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected.
void from_json(const nlohmann::json& j, RefineConfig& c);

}  // namespace ugir
