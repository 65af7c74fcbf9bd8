#include "ugir/core/distance_transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ugir {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower envelope of parabolas w*(p - q)^2 + f[q] over the finite samples.
void envelope_1d(const std::vector<double>& f, std::vector<double>& d, double w, std::vector<int>& v,
                 std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (k < 0) {
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      k = 0;
      continue;
    }
    double s;
    for (;;) {
      const int p = v[k];
      s = ((f[q] + w * q * q) - (f[p] + w * p * p)) / (2.0 * w * (q - p));
      if (s <= z[k] && k > 0) {
        --k;
        continue;
      }
      break;
    }
    if (s <= z[k]) {
      // k == 0 and the new parabola dominates the whole line
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (k < 0) {
    for (int p = 0; p < n; ++p) d[p] = kInf;
    return;
  }
  int j = 0;
  for (int p = 0; p < n; ++p) {
    while (z[j + 1] < p) ++j;
    const double diff = p - v[j];
    d[p] = w * diff * diff + f[v[j]];
  }
}

}  // namespace

ImageD squared_distance_transform(const MaskImage& features, double row_spacing, double col_spacing) {
  const int rows = features.rows(), cols = features.cols();
  ImageD out(rows, cols, kInf);
  for (std::size_t i = 0; i < features.size(); ++i)
    if (features[i]) out[i] = 0.0;

  const int n = std::max(rows, cols);
  std::vector<double> f, d;
  std::vector<int> v(static_cast<std::size_t>(n) + 1);
  std::vector<double> z(static_cast<std::size_t>(n) + 2);

  f.resize(static_cast<std::size_t>(cols));
  d.resize(static_cast<std::size_t>(cols));
  const double wc = col_spacing * col_spacing;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) f[c] = out(r, c);
    envelope_1d(f, d, wc, v, z);
    for (int c = 0; c < cols; ++c) out(r, c) = d[c];
  }

  f.resize(static_cast<std::size_t>(rows));
  d.resize(static_cast<std::size_t>(rows));
  const double wr = row_spacing * row_spacing;
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) f[r] = out(r, c);
    envelope_1d(f, d, wr, v, z);
    for (int r = 0; r < rows; ++r) out(r, c) = d[r];
  }
  return out;
}

ImageD distance_transform(const MaskImage& features, double row_spacing, double col_spacing) {
  auto out = squared_distance_transform(features, row_spacing, col_spacing);
  for (auto& x : out.values()) x = std::sqrt(x);
  return out;
}

ImageD signed_distance(const MaskImage& mask) {
  MaskImage outside(mask.rows(), mask.cols());
  bool any_in = false, any_out = false;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    outside[i] = mask[i] ? 0 : 1;
    any_in = any_in || mask[i];
    any_out = any_out || !mask[i];
  }
  const double far = static_cast<double>(mask.rows() + mask.cols());
  ImageD phi(mask.rows(), mask.cols());
  if (!any_in || !any_out) {
    for (auto& x : phi.values()) x = any_in ? far : -far;
    return phi;
  }
  const auto to_outside = distance_transform(outside);
  const auto to_inside = distance_transform(mask);
  for (std::size_t i = 0; i < mask.size(); ++i) phi[i] = mask[i] ? to_outside[i] - 0.5 : -(to_inside[i] - 0.5);
  return phi;
}

}  // namespace ugir
