#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ugir/core/config.hpp"
#include "ugir/core/volume.hpp"

namespace ugir {

/// Fused segmentation: mean probability P, population variance U and the
/// binary mask Y = [P >= threshold].
struct FusedResult {
  Volume<double> mean;
  Volume<double> variance;
  BinaryMask mask;

  int num_slices() const { return mean.slices(); }
};

FusedResult fuse_predictions(const ProbabilityGroup& group, double threshold);

/// nu = sum(U) / (sum(Y) + zeta).
double slice_uncertainty(std::span<const double> variance, std::span<const std::uint8_t> mask, double zeta);

/// nu* = sum(U); favours slices with large uncertain regions.
double naive_slice_uncertainty(std::span<const double> variance);

enum class RankMode { normalized, naive };

struct QueueEntry {
  int slice = 0;
  double score = 0.0;
  bool operator==(const QueueEntry&) const = default;
};

/// Slices in descending score order (ties: lower index first) plus the
/// review cutoff M'.
struct SliceQueue {
  std::vector<QueueEntry> entries;
  int cutoff = 0;

  int size() const { return static_cast<int>(entries.size()); }
  bool operator==(const SliceQueue&) const = default;
};

/// M' = ceil(fraction * M), at least 1.
int review_cutoff(int num_slices, double fraction);

SliceQueue make_queue(std::span<const double> scores, double fraction);
SliceQueue rank_slices(const FusedResult& fused, const RefineConfig& cfg, RankMode mode);

/// One fetched slice and whether the user edited it.
struct FetchRecord {
  int slice = 0;
  bool edited = false;
  bool operator==(const FetchRecord&) const = default;
};

/// Next queue entry to show, or nullopt when the review is done: either M'
/// slices were fetched or the last `early_stop_count` fetched slices were
/// all left unedited. `history` must be a prefix of the queue order.
std::optional<int> next_slice(const SliceQueue& queue, std::span<const FetchRecord> history, int early_stop_count);

}  // namespace ugir
