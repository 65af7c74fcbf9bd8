#include <vector>

#include "ugir/kernels/kernels.hpp"
#include "ugir/uncertainty/uncertainty.hpp"

namespace ugir {

FusedResult fuse_predictions(const ProbabilityGroup& group, double threshold) {
  if (group.size() == 0) throw InvalidInput("cannot fuse an empty probability group");
  if (!(threshold > 0.0 && threshold < 1.0)) throw InvalidInput("threshold must lie in (0, 1)");
  const Shape3 shape = group.shape();
  std::vector<std::span<const float>> members;
  members.reserve(static_cast<std::size_t>(group.size()));
  for (const auto& m : group.members()) {
    if (m.shape() != shape) throw InvalidInput("probability group members disagree on dims");
    members.push_back(m.values());
  }
  FusedResult out{Volume<double>(shape), Volume<double>(shape), BinaryMask(shape)};
  kernels::fuse_parallel(members, threshold, {out.mean.values(), out.variance.values(), out.mask.values()});
  return out;
}

}  // namespace ugir
