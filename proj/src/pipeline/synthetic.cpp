#include "ugir/pipeline/synthetic.hpp"

#include "ugir/core/scribbles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ugir/core/distance_transform.hpp"
#include "ugir/metrics/metrics.hpp"

namespace ugir {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::normal() {
  // Box-Muller; 1 - u keeps the log argument in (0, 1]
  const double u = 1.0 - uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

int SplitMix64::below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

void to_json(nlohmann::json& j, const SynthSpec& s) {
  j = nlohmann::json{{"slices", s.slices},
                     {"rows", s.rows},
                     {"cols", s.cols},
                     {"members", s.members},
                     {"hard_slices", s.hard_slices},
                     {"corruption", s.corruption},
                     {"noise", s.noise},
                     {"contrast", s.contrast},
                     {"temperature", s.temperature},
                     {"member_jitter", s.member_jitter},
                     {"min_axis", s.min_axis},
                     {"max_axis", s.max_axis},
                     {"spacing", {s.spacing.slice_mm, s.spacing.row_mm, s.spacing.col_mm}}};
}

void from_json(const nlohmann::json& j, SynthSpec& s) {
  try {
    s.slices = j.value("slices", s.slices);
    s.rows = j.value("rows", s.rows);
    s.cols = j.value("cols", s.cols);
    s.members = j.value("members", s.members);
    s.hard_slices = j.value("hard_slices", s.hard_slices);
    s.corruption = j.value("corruption", s.corruption);
    s.noise = j.value("noise", s.noise);
    s.contrast = j.value("contrast", s.contrast);
    s.temperature = j.value("temperature", s.temperature);
    s.member_jitter = j.value("member_jitter", s.member_jitter);
    s.min_axis = j.value("min_axis", s.min_axis);
    s.max_axis = j.value("max_axis", s.max_axis);
    if (j.contains("spacing")) {
      const auto v = j.at("spacing").get<std::vector<double>>();
      if (v.size() != 3) throw InvalidInput("synth spacing must be [slice, row, col]");
      s.spacing = {v[0], v[1], v[2]};
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed synth spec: ") + e.what());
  }
}

SyntheticCase generate_synthetic_stack(const SynthSpec& spec, std::uint64_t seed) {
  if (spec.slices < 1 || spec.rows < 8 || spec.cols < 8 || spec.members < 1)
    throw InvalidInput("synthetic stack needs >= 1 slice, >= 8x8 pixels and >= 1 member");
  if (spec.hard_slices < 0 || spec.hard_slices > spec.slices) throw InvalidInput("hard_slices out of range");
  if (!(spec.temperature > 0) || spec.min_axis <= 0 || spec.max_axis < spec.min_axis)
    throw InvalidInput("invalid synthetic shape parameters");

  SplitMix64 rng(seed);
  const Shape3 shape{spec.slices, spec.rows, spec.cols};
  SyntheticCase out;
  out.stack = Stack{Volume<float>(shape), spec.spacing};
  out.gt = BinaryMask(shape);
  std::vector<Volume<float>> members(static_cast<std::size_t>(spec.members), Volume<float>(shape));

  // Partial Fisher-Yates picks the hard slices.
  std::vector<int> order(static_cast<std::size_t>(spec.slices));
  for (int k = 0; k < spec.slices; ++k) order[static_cast<std::size_t>(k)] = k;
  for (int i = 0; i < spec.hard_slices; ++i) std::swap(order[static_cast<std::size_t>(i)],
                                                       order[static_cast<std::size_t>(i + rng.below(spec.slices - i))]);
  out.hard_slices.assign(order.begin(), order.begin() + spec.hard_slices);
  std::sort(out.hard_slices.begin(), out.hard_slices.end());

  const double side = std::min(spec.rows, spec.cols);
  for (int k = 0; k < spec.slices; ++k) {
    const double cr = spec.rows / 2.0 + rng.uniform(-0.08, 0.08) * spec.rows;
    const double cc = spec.cols / 2.0 + rng.uniform(-0.08, 0.08) * spec.cols;
    const double a = rng.uniform(spec.min_axis, spec.max_axis) * side;
    const double b = rng.uniform(spec.min_axis, spec.max_axis) * side;
    const double theta = rng.uniform(0.0, std::numbers::pi);
    const double ct = std::cos(theta), st = std::sin(theta);

    MaskImage gt(spec.rows, spec.cols);
    for (int r = 0; r < spec.rows; ++r) {
      for (int c = 0; c < spec.cols; ++c) {
        const double x = c - cc, y = r - cr;
        const double u = (x * ct + y * st) / a, v = (-x * st + y * ct) / b;
        gt(r, c) = u * u + v * v < 1.0 ? 1 : 0;
        const double base = gt(r, c) ? 0.3 + spec.contrast : 0.3;
        out.stack.data(k, r, c) = static_cast<float>(base * (1.0 + spec.noise * rng.normal()));
      }
    }
    out.gt.set_slice(k, gt);
    const ImageD sdf = signed_distance(gt);

    const bool hard = std::binary_search(out.hard_slices.begin(), out.hard_slices.end(), k) && spec.corruption > 0;
    double blob_r = 0.0, blob_cr = 0.0, blob_cc = 0.0;
    bool over = false;
    int dissenter = -1;
    if (hard) {
      const auto edge = metrics::boundary(gt);
      std::vector<Pixel> ring;
      for (int r = 0; r < spec.rows; ++r)
        for (int c = 0; c < spec.cols; ++c)
          if (edge(r, c)) ring.push_back({r, c});
      const Pixel centre = ring.empty() ? Pixel{spec.rows / 2, spec.cols / 2} : ring[static_cast<std::size_t>(
                                                                                   rng.below(static_cast<int>(ring.size())))];
      blob_cr = centre.row;
      blob_cc = centre.col;
      blob_r = spec.corruption * rng.uniform(5.0, 7.0);
      over = rng.uniform() < 0.5;
      dissenter = spec.members > 1 ? rng.below(spec.members) : -1;
    }

    for (int n = 0; n < spec.members; ++n) {
      const double bias = rng.uniform(-spec.member_jitter, spec.member_jitter);
      auto& m = members[static_cast<std::size_t>(n)];
      for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
          double s = sdf(r, c);
          if (hard && n != dissenter) {
            const double blob = blob_r - std::hypot(r - blob_cr, c - blob_cc);
            s = over ? std::max(s, blob) : std::min(s, -blob);
          }
          const double jitter = rng.uniform(-0.1, 0.1);
          m(k, r, c) = static_cast<float>(1.0 / (1.0 + std::exp(-(s + bias + jitter) / spec.temperature)));
        }
      }
    }
  }
  out.probs = ProbabilityGroup(std::move(members));
  return out;
}

}  // namespace ugir
