#pragma once
// Brute-force oracles and synthetic scenarios shared by the unit tests and
// the acceptance runner. Nothing here calls the code under test except where
// a scenario needs library types to be built.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ugir/core/scribbles.hpp"
#include "ugir/core/volume.hpp"
#include "ugir/pipeline/synthetic.hpp"

namespace ugir::testing {

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- fusion

struct NaiveFusion {
  std::vector<double> mean, variance;
  std::vector<std::uint8_t> mask;
};

inline NaiveFusion naive_fuse(const std::vector<Volume<float>>& members, double threshold) {
  const auto& s = members.front().shape();
  NaiveFusion out;
  for (int k = 0; k < s.slices; ++k) {
    for (int r = 0; r < s.rows; ++r) {
      for (int c = 0; c < s.cols; ++c) {
        double sum = 0.0;
        for (const auto& m : members) sum += m(k, r, c);
        const double mean = sum / static_cast<double>(members.size());
        double sq = 0.0;
        for (const auto& m : members) sq += (m(k, r, c) - mean) * (m(k, r, c) - mean);
        out.mean.push_back(mean);
        out.variance.push_back(sq / static_cast<double>(members.size()));
        out.mask.push_back(mean >= threshold ? 1 : 0);
      }
    }
  }
  return out;
}

inline std::vector<Volume<float>> random_members(SplitMix64& rng, int n, Shape3 shape) {
  std::vector<Volume<float>> out;
  for (int i = 0; i < n; ++i) {
    Volume<float> v(shape);
    for (auto& x : v.values()) x = static_cast<float>(rng.uniform());
    out.push_back(std::move(v));
  }
  return out;
}

// -------------------------------------------------------------- geodesic

// Relaxes every 8-neighbour edge until nothing changes.
inline ImageD relaxation_geodesic(const ImageD& img, const MaskImage& seeds, double gamma) {
  const double inf = std::numeric_limits<double>::infinity();
  ImageD d(img.rows(), img.cols(), inf);
  for (std::size_t i = 0; i < d.size(); ++i)
    if (seeds[i]) d[i] = 0.0;
  for (bool changed = true; changed;) {
    changed = false;
    for (int r = 0; r < img.rows(); ++r) {
      for (int c = 0; c < img.cols(); ++c) {
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int rr = r + dr, cc = c + dc;
            if ((dr == 0 && dc == 0) || !img.contains(rr, cc) || d(rr, cc) == inf) continue;
            const double di = img(r, c) - img(rr, cc);
            const double cand = d(rr, cc) + std::sqrt(dr * dr + dc * dc + gamma * gamma * di * di);
            if (cand < d(r, c)) {
              d(r, c) = cand;
              changed = true;
            }
          }
        }
      }
    }
  }
  return d;
}

// 8-connected chamfer distance between two grid points with unit and
// sqrt(2) steps.
inline double octile(int dr, int dc) {
  const int a = std::abs(dr), b = std::abs(dc);
  return std::abs(a - b) + std::numbers::sqrt2 * std::min(a, b);
}

inline double eta_formula(double gf, double gb, double D) {
  const double a = std::exp(-std::min(gf, D)), b = std::exp(-std::min(gb, D));
  return a / (a + b);
}

// ---------------------------------------------------------------- shapes

inline MaskImage disk(int rows, int cols, double cr, double cc, double radius) {
  MaskImage m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = (r - cr) * (r - cr) + (c - cc) * (c - cc) <= radius * radius ? 1 : 0;
  return m;
}

inline MaskImage ellipse(int rows, int cols, double cr, double cc, double ar, double ac, double angle) {
  MaskImage m(rows, cols);
  const double ca = std::cos(angle), sa = std::sin(angle);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double y = (r - cr) * ca + (c - cc) * sa, x = -(r - cr) * sa + (c - cc) * ca;
      m(r, c) = (y * y) / (ar * ar) + (x * x) / (ac * ac) <= 1.0 ? 1 : 0;
    }
  }
  return m;
}

inline MaskImage mask_or(MaskImage a, const MaskImage& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] || b[i];
  return a;
}

inline MaskImage mask_minus(MaskImage a, const MaskImage& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] && !b[i];
  return a;
}

inline ImageD as_double(const MaskImage& m) {
  ImageD out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i];
  return out;
}

inline std::size_t count(const MaskImage& m) {
  return static_cast<std::size_t>(std::count_if(m.values().begin(), m.values().end(), [](auto v) { return v != 0; }));
}

// Union of a few random ellipses, never empty.
inline MaskImage random_shape(SplitMix64& rng, int rows, int cols) {
  MaskImage m(rows, cols);
  const int parts = 1 + rng.below(3);
  for (int i = 0; i < parts; ++i) {
    m = mask_or(m, ellipse(rows, cols, rng.uniform(0.3, 0.7) * rows, rng.uniform(0.3, 0.7) * cols,
                           rng.uniform(2.0, 0.25 * rows), rng.uniform(2.0, 0.25 * cols),
                           rng.uniform(0.0, std::numbers::pi)));
  }
  if (count(m) == 0) m(rows / 2, cols / 2) = 1;
  return m;
}

inline MaskImage random_mask(SplitMix64& rng, int rows, int cols, double p) {
  MaskImage m(rows, cols);
  for (auto& v : m.values()) v = rng.uniform() < p ? 1 : 0;
  return m;
}

// --------------------------------------------------------------- metrics

inline MaskImage naive_boundary(const MaskImage& m) {
  MaskImage b(m.rows(), m.cols());
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (!m(r, c)) continue;
      const int nb[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
      for (const auto& p : nb)
        if (!m.contains(p[0], p[1]) || !m(p[0], p[1])) b(r, c) = 1;
    }
  }
  return b;
}

// All-pairs boundary distances, mean of the two directional means.
inline double brute_assd(const MaskImage& a, const MaskImage& b, double row_mm, double col_mm) {
  std::vector<std::pair<int, int>> ba, bb;
  const auto ea = naive_boundary(a), eb = naive_boundary(b);
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) {
      if (ea(r, c)) ba.emplace_back(r, c);
      if (eb(r, c)) bb.emplace_back(r, c);
    }
  }
  auto nearest = [&](const std::pair<int, int>& p, const std::vector<std::pair<int, int>>& set) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : set) {
      const double dr = (p.first - q.first) * row_mm, dc = (p.second - q.second) * col_mm;
      best = std::min(best, std::sqrt(dr * dr + dc * dc));
    }
    return best;
  };
  double ab = 0.0, ba_sum = 0.0;
  for (const auto& p : ba) ab += nearest(p, bb);
  for (const auto& p : bb) ba_sum += nearest(p, ba);
  return 0.5 * (ab / static_cast<double>(ba.size()) + ba_sum / static_cast<double>(bb.size()));
}

inline double count_dice(const MaskImage& a, const MaskImage& b) {
  double inter = 0, sa = 0, sb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += (a[i] && b[i]);
    sa += a[i] != 0;
    sb += b[i] != 0;
  }
  return sa + sb == 0 ? 1.0 : 2.0 * inter / (sa + sb);
}

inline ImageD brute_edt(const MaskImage& features) {
  ImageD out(features.rows(), features.cols(), std::numeric_limits<double>::infinity());
  for (int r = 0; r < features.rows(); ++r)
    for (int c = 0; c < features.cols(); ++c)
      for (int fr = 0; fr < features.rows(); ++fr)
        for (int fc = 0; fc < features.cols(); ++fc)
          if (features(fr, fc)) out(r, c) = std::min(out(r, c), std::hypot(r - fr, c - fc));
  return out;
}

// ------------------------------------------------------ level-set suite

struct LevelSetCase {
  std::string name;
  ImageD intensity;  // [0, 1]
  ImageD prob;
  MaskImage initial;
  MaskImage target;
  std::optional<ScribbleSet> scribbles;  // drawn against target when present
};

inline ImageD speckled(const MaskImage& target, SplitMix64& rng) {
  ImageD out(target.rows(), target.cols());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::clamp((target[i] ? 0.7 : 0.3) + 0.03 * rng.normal(), 0.0, 1.0);
  return out;
}

inline LevelSetCase shifted_disk_case(int radius, int dr, int dc, std::uint64_t seed = 1) {
  SplitMix64 rng(seed);
  const int n = 64;
  LevelSetCase c;
  c.name = "shifted disk r=" + std::to_string(radius) + " (" + std::to_string(dr) + "," + std::to_string(dc) + ")";
  c.target = disk(n, n, 32, 32, radius);
  c.initial = disk(n, n, 32 + dr, 32 + dc, radius);
  c.prob = as_double(c.target);
  c.intensity = speckled(c.target, rng);
  return c;
}

// Target minus a square notch on its boundary, or plus a bump.
inline LevelSetCase notched_case(int i) {
  SplitMix64 rng(100 + static_cast<std::uint64_t>(i));
  const int n = 64;
  const double radius = 14 + 2 * (i % 3);
  const double angle = i * 1.1;
  const double br = 32 + radius * std::sin(angle), bc = 32 + radius * std::cos(angle);
  LevelSetCase c;
  c.target = disk(n, n, 32, 32, radius);
  if (i < 3) {
    MaskImage notch(n, n);
    for (int r = -3; r <= 3; ++r)
      for (int q = -3; q <= 3; ++q)
        if (notch.contains(static_cast<int>(br) + r, static_cast<int>(bc) + q))
          notch(static_cast<int>(br) + r, static_cast<int>(bc) + q) = 1;
    c.initial = mask_minus(c.target, notch);
    c.name = "notched disk " + std::to_string(i);
  } else {
    c.initial = mask_or(c.target, disk(n, n, br, bc, 4.5));
    c.name = "bumped disk " + std::to_string(i);
  }
  c.prob = as_double(c.target);
  c.intensity = speckled(c.target, rng);
  return c;
}

// The probability map itself is wrong on a blob; scribbles carry the fix.
inline LevelSetCase scribbled_case(int i, ScribbleSet scribbles_for(const MaskImage&, const MaskImage&)) {
  SplitMix64 rng(200 + static_cast<std::uint64_t>(i));
  const int n = 64;
  const double radius = 13 + i;
  const double angle = 0.7 + i * 0.9;
  const double br = 32 + radius * std::sin(angle), bc = 32 + radius * std::cos(angle);
  LevelSetCase c;
  c.target = disk(n, n, 32, 32, radius);
  const MaskImage blob = disk(n, n, br, bc, 6.0);
  const bool over = i % 2 == 0;
  c.initial = over ? mask_or(c.target, blob) : mask_minus(c.target, blob);
  c.prob = ImageD(n, n);
  for (std::size_t k = 0; k < c.prob.size(); ++k) c.prob[k] = c.initial[k] ? 0.85 : 0.1;
  c.intensity = speckled(c.target, rng);
  c.name = std::string(over ? "over" : "under") + "-segmented blob " + std::to_string(i);
  c.scribbles = scribbles_for(c.initial, c.target);
  return c;
}

// 8 shifted disks, 3 notched and 3 bumped disks, 6 scribbled corrections.
inline std::vector<LevelSetCase> levelset_suite(ScribbleSet scribbles_for(const MaskImage&, const MaskImage&)) {
  std::vector<LevelSetCase> out;
  const int shifts[8][2] = {{0, 3}, {3, 0}, {0, -3}, {-3, 0}, {2, 2}, {-2, 2}, {2, -2}, {-2, -2}};
  for (int i = 0; i < 8; ++i) out.push_back(shifted_disk_case(12 + 2 * (i % 4), shifts[i][0], shifts[i][1], 1 + i));
  for (int i = 0; i < 6; ++i) out.push_back(notched_case(i));
  for (int i = 0; i < 6; ++i) out.push_back(scribbled_case(i, scribbles_for));
  return out;
}

// -------------------------------------------------- small-target scenario

// Slices 0..M-2 hold large targets whose predictors disagree along a wide
// rim; the last slice holds a small target where one predictor misses a
// blob. nu* favours the large slices, nu the small one.
struct SmallTargetScenario {
  Stack stack;
  BinaryMask gt;
  ProbabilityGroup probs;
  int small_slice = 0;
};

inline SmallTargetScenario small_target_scenario(int slices = 10) {
  const int n = 64, members = 4;
  SmallTargetScenario s;
  s.small_slice = slices - 1;
  const Shape3 shape{slices, n, n};
  s.stack.data = Volume<float>(shape);
  s.stack.spacing = {3.0, 1.0, 1.0};
  s.gt = BinaryMask(shape);
  std::vector<Volume<float>> vols(members, Volume<float>(shape));
  auto logistic = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  for (int k = 0; k < slices; ++k) {
    const bool small = k == s.small_slice;
    const double radius = small ? 5.0 : 20.0 + 0.5 * k;
    const MaskImage blob = disk(n, n, 32, 32 + radius + 1.5, 3.5);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const double sd = radius - std::hypot(r - 32.0, c - 32.0);
        s.gt(k, r, c) = sd >= 0 ? 1 : 0;
        s.stack.data(k, r, c) = static_cast<float>(sd >= 0 ? 0.7 : 0.3);
        for (int m = 0; m < members; ++m) {
          double p;
          if (small) {
            p = logistic(sd / 0.5);
            if (blob(r, c) && m != 0) p = std::max(p, 0.9);
          } else {
            // Wide soft rim with a large per-member offset; the fused mask
            // still matches the ground truth.
            const double offset = (m - 1.5) * 0.9;
            p = logistic((sd + offset) / 2.5);
          }
          vols[static_cast<std::size_t>(m)](k, r, c) = static_cast<float>(p);
        }
      }
    }
  }
  s.probs = ProbabilityGroup(std::move(vols));
  return s;
}

}  // namespace ugir::testing
