#include "ugir/geodesic/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

namespace ugir {
namespace {

struct Offset {
  int dr, dc;
  double spatial_sq;
};

constexpr Offset kNeighbors[8] = {{-1, -1, 2.0}, {-1, 0, 1.0}, {-1, 1, 2.0}, {0, -1, 1.0},
                                  {0, 1, 1.0},   {1, -1, 2.0}, {1, 0, 1.0},  {1, 1, 2.0}};

}  // namespace

DistanceMap geodesic_distance(const ImageD& intensity, const MaskImage& seeds, double gamma) {
  if (!intensity.same_shape(seeds)) throw InvalidInput("seed mask and image differ in dims");
  const int rows = intensity.rows(), cols = intensity.cols();
  const double g2 = gamma * gamma;
  ImageD dist(rows, cols, std::numeric_limits<double>::infinity());

  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (seeds[i]) {
      dist[i] = 0.0;
      open.emplace(0.0, i);
    }
  }
  if (open.empty()) throw InvalidInput("geodesic distance needs a non-empty seed set");

  std::vector<std::uint8_t> done(dist.size(), 0);
  while (!open.empty()) {
    const auto [d, i] = open.top();
    open.pop();
    if (done[i]) continue;
    done[i] = 1;
    const int r = static_cast<int>(i / static_cast<std::size_t>(cols));
    const int c = static_cast<int>(i % static_cast<std::size_t>(cols));
    const double here = intensity[i];
    for (const auto& o : kNeighbors) {
      const int nr = r + o.dr, nc = c + o.dc;
      if (!dist.contains(nr, nc)) continue;
      const std::size_t j = dist.index(nr, nc);
      if (done[j]) continue;
      const double di = intensity[j] - here;
      const double nd = d + std::sqrt(o.spatial_sq + g2 * di * di);
      if (nd < dist[j]) {
        dist[j] = nd;
        open.emplace(nd, j);
      }
    }
  }
  return {std::move(dist)};
}

LikelihoodMap interaction_likelihood(const std::optional<DistanceMap>& to_foreground,
                                     const std::optional<DistanceMap>& to_background, double D, int rows, int cols) {
  if (!(D > 0.0)) throw InvalidInput("D must be positive");
  for (const auto* m : {&to_foreground, &to_background}) {
    if (*m && ((*m)->values.rows() != rows || (*m)->values.cols() != cols)) {
      throw InvalidInput("distance map dims do not match the slice");
    }
  }
  LikelihoodMap out{ImageD(rows, cols)};
  for (std::size_t i = 0; i < out.eta.size(); ++i) {
    const double gf = to_foreground ? std::min(to_foreground->values[i], D) : D;
    const double gb = to_background ? std::min(to_background->values[i], D) : D;
    // exp(-gf) / (exp(-gf) + exp(-gb)) rewritten as a logistic of gb - gf
    out.eta[i] = 1.0 / (1.0 + std::exp(gf - gb));
  }
  return out;
}

LikelihoodMap likelihood_from_seeds(const ImageD& intensity, const SeedMasks& seeds, double gamma, double D) {
  std::optional<DistanceMap> gf, gb;
  if (seeds.has_foreground()) gf = geodesic_distance(intensity, seeds.foreground, gamma);
  if (seeds.has_background()) gb = geodesic_distance(intensity, seeds.background, gamma);
  return interaction_likelihood(gf, gb, D, intensity.rows(), intensity.cols());
}

}  // namespace ugir
