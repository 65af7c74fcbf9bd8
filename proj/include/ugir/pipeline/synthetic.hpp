#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "ugir/core/volume.hpp"

namespace ugir {

/// Shape and noise parameters of a synthetic refinement benchmark.
struct SynthSpec {
  int slices = 10;
  int rows = 64;
  int cols = 64;
  int members = 4;
  int hard_slices = 2;
  double corruption = 1.0;      // 0 disables the corrupted blobs
  double noise = 0.05;          // speckle std relative to intensity
  double contrast = 0.4;        // foreground minus background intensity
  double temperature = 0.5;     // logistic width, pixels
  double member_jitter = 0.2;   // per-member boundary offset, pixels
  double min_axis = 0.18;       // ellipse semi-axes as a fraction of min(rows, cols)
  double max_axis = 0.30;
  Spacing spacing{3.0, 1.0, 1.0};
};

void to_json(nlohmann::json& j, const SynthSpec& s);
void from_json(const nlohmann::json& j, SynthSpec& s);

struct SyntheticCase {
  Stack stack;
  BinaryMask gt;
  ProbabilityGroup probs;
  std::vector<int> hard_slices;  // ascending
};

/// Deterministic in (spec, seed). Each slice holds one random ellipse with
/// speckle noise; each predictor is a logistic of the ground-truth signed
/// distance with a small member offset. On hard slices all but one predictor
/// additionally add or remove a disk on the boundary.
SyntheticCase generate_synthetic_stack(const SynthSpec& spec, std::uint64_t seed);

/// Small seeded generator with a fixed, platform-independent output.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  int below(int n);  // [0, n)

 private:
  std::uint64_t state_;
};

}  // namespace ugir
