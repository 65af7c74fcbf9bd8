#include "ugir/core/config.hpp"

#include <json.hpp>
#include <set>
#include <string>

#include "ugir/core/volume.hpp"

namespace ugir {

void RefineConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidInput(std::string("invalid refine config: ") + what);
  };
  require(alpha >= 0 && beta >= 0 && lambda >= 0 && mu >= 0, "weights must be nonnegative");
  require(D > 0, "D must be positive");
  require(epsilon > 0, "epsilon must be positive");
  require(dt > 0, "dt must be positive");
  require(mu * dt < 0.25, "mu*dt must stay below 0.25");
  require(max_steps >= 0, "max_steps must be nonnegative");
  require(zeta > 0, "zeta must be positive");
  require(m_prime_fraction > 0 && m_prime_fraction <= 1, "m_prime_fraction must lie in (0, 1]");
  require(early_stop_count >= 1, "early_stop_count must be at least 1");
  require(gamma >= 0, "gamma must be nonnegative");
  require(threshold > 0 && threshold < 1, "threshold must lie in (0, 1)");
}

void to_json(nlohmann::json& j, const RefineConfig& c) {
  j = nlohmann::json{{"alpha", c.alpha},
                     {"beta", c.beta},
                     {"lambda", c.lambda},
                     {"mu", c.mu},
                     {"D", c.D},
                     {"epsilon", c.epsilon},
                     {"dt", c.dt},
                     {"max_steps", c.max_steps},
                     {"zeta", c.zeta},
                     {"m_prime_fraction", c.m_prime_fraction},
                     {"early_stop_count", c.early_stop_count},
                     {"gamma", c.gamma},
                     {"threshold", c.threshold}};
}

void from_json(const nlohmann::json& j, RefineConfig& c) {
  if (!j.is_object()) throw InvalidInput("refine config must be a JSON object");
  static const std::set<std::string> known = {"alpha", "beta",      "lambda",           "mu",
                                              "D",     "epsilon",   "dt",               "max_steps",
                                              "zeta",  "gamma",     "m_prime_fraction", "early_stop_count",
                                              "threshold"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw InvalidInput("unknown refine config field '" + key + "'");
  }
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("alpha", c.alpha);
  get("beta", c.beta);
  get("lambda", c.lambda);
  get("mu", c.mu);
  get("D", c.D);
  get("epsilon", c.epsilon);
  get("dt", c.dt);
  get("max_steps", c.max_steps);
  get("zeta", c.zeta);
  get("m_prime_fraction", c.m_prime_fraction);
  get("early_stop_count", c.early_stop_count);
  get("gamma", c.gamma);
  get("threshold", c.threshold);
}

}  // namespace ugir
