#include "ugir/core/volume.hpp"

#include <algorithm>
#include <cmath>

namespace ugir {

std::string to_string(const Shape3& s) {
  return std::to_string(s.slices) + "x" + std::to_string(s.rows) + "x" + std::to_string(s.cols);
}

void Stack::validate() const {
  const auto& s = data.shape();
  if (s.slices < 1 || s.rows < 1 || s.cols < 1) throw InvalidInput("stack must have at least one non-empty slice");
  for (float v : data.values()) {
    if (!std::isfinite(v)) throw InvalidInput("stack contains non-finite intensities");
  }
}

ProbabilityGroup::ProbabilityGroup(std::vector<Volume<float>> members) : members_(std::move(members)) {
  if (!members_.empty()) shape_ = members_.front().shape();
  validate();
}

void ProbabilityGroup::validate() const {
  if (members_.empty()) throw InvalidInput("probability group needs at least one predictor");
  for (const auto& m : members_) {
    if (m.shape() != shape_) throw InvalidInput("probability group members disagree on dims");
    for (float v : m.values()) {
      if (!(v >= 0.0f && v <= 1.0f)) throw InvalidInput("probability outside [0, 1]");
    }
  }
}

ImageD normalized_slice(const Stack& stack, int k) {
  auto vals = stack.data.slice_values(k);
  ImageD out(stack.data.rows(), stack.data.cols());
  if (vals.empty()) return out;
  auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
  const double lo_v = *lo;
  const double range = static_cast<double>(*hi) - lo_v;
  if (range <= 0.0) return out;
  for (std::size_t i = 0; i < vals.size(); ++i) out[i] = (static_cast<double>(vals[i]) - lo_v) / range;
  return out;
}

}  // namespace ugir
