#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ugir/uncertainty/uncertainty.hpp"

namespace ugir {

double slice_uncertainty(std::span<const double> variance, std::span<const std::uint8_t> mask, double zeta) {
  if (variance.size() != mask.size()) throw InvalidInput("uncertainty and mask slices differ in size");
  const double u = std::accumulate(variance.begin(), variance.end(), 0.0);
  double y = 0.0;
  for (auto v : mask) y += v;
  return u / (y + zeta);
}

double naive_slice_uncertainty(std::span<const double> variance) {
  return std::accumulate(variance.begin(), variance.end(), 0.0);
}

int review_cutoff(int num_slices, double fraction) {
  if (num_slices < 1) throw InvalidInput("a stack needs at least one slice");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidInput("review fraction must lie in (0, 1]");
  const int m = static_cast<int>(std::ceil(fraction * num_slices - 1e-9));
  return std::clamp(m, 1, num_slices);
}

SliceQueue make_queue(std::span<const double> scores, double fraction) {
  SliceQueue q;
  q.cutoff = review_cutoff(static_cast<int>(scores.size()), fraction);
  for (std::size_t k = 0; k < scores.size(); ++k) q.entries.push_back({static_cast<int>(k), scores[k]});
  std::stable_sort(q.entries.begin(), q.entries.end(),
                   [](const QueueEntry& a, const QueueEntry& b) { return a.score > b.score; });
  return q;
}

SliceQueue rank_slices(const FusedResult& fused, const RefineConfig& cfg, RankMode mode) {
  std::vector<double> scores(static_cast<std::size_t>(fused.num_slices()));
#pragma omp parallel for schedule(static)
  for (int k = 0; k < fused.num_slices(); ++k) {
    const auto u = fused.variance.slice_values(k);
    scores[static_cast<std::size_t>(k)] = mode == RankMode::normalized
                                              ? slice_uncertainty(u, fused.mask.slice_values(k), cfg.zeta)
                                              : naive_slice_uncertainty(u);
  }
  return make_queue(scores, cfg.m_prime_fraction);
}

std::optional<int> next_slice(const SliceQueue& queue, std::span<const FetchRecord> history, int early_stop_count) {
  if (history.size() > queue.entries.size()) throw InvalidInput("fetch history longer than the queue");
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (history[i].slice != queue.entries[i].slice) {
      throw InvalidInput("fetch history diverges from queue order at position " + std::to_string(i));
    }
  }
  const auto fetched = static_cast<int>(history.size());
  if (fetched >= queue.cutoff) return std::nullopt;
  if (early_stop_count > 0 && fetched >= early_stop_count) {
    const bool idle = std::none_of(history.end() - early_stop_count, history.end(),
                                   [](const FetchRecord& r) { return r.edited; });
    if (idle) return std::nullopt;
  }
  return queue.entries[static_cast<std::size_t>(fetched)].slice;
}

}  // namespace ugir
