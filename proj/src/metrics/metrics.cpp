#include "ugir/metrics/metrics.hpp"

#include <cmath>
#include <numeric>

#include "ugir/core/distance_transform.hpp"

namespace ugir::metrics {
namespace {

void require_same(const auto& a, const auto& b) {
  if (!a.same_shape(b)) throw InvalidInput("metric inputs differ in dims");
}

std::size_t count(const MaskImage& m) {
  std::size_t n = 0;
  for (auto v : m.values()) n += v ? 1 : 0;
  return n;
}

}  // namespace

double dice(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw InvalidInput("metric inputs differ in dims");
  std::size_t inter = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool x = a[i] != 0, y = b[i] != 0;
    inter += x && y;
    na += x;
    nb += y;
  }
  if (na + nb == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(na + nb);
}

double dice(const MaskImage& a, const MaskImage& b) {
  require_same(a, b);
  return dice(a.values(), b.values());
}

MaskImage boundary(const MaskImage& mask) {
  MaskImage out(mask.rows(), mask.cols(), 0);
  auto bg = [&](int r, int c) { return !mask.contains(r, c) || !mask(r, c); };
  for (int r = 0; r < mask.rows(); ++r)
    for (int c = 0; c < mask.cols(); ++c)
      if (mask(r, c) && (bg(r - 1, c) || bg(r + 1, c) || bg(r, c - 1) || bg(r, c + 1))) out(r, c) = 1;
  return out;
}

double assd(const MaskImage& a, const MaskImage& b, double row_mm, double col_mm) {
  require_same(a, b);
  if (count(a) == 0 || count(b) == 0) throw InvalidInput("undefined surface distance: empty mask");
  const auto ba = boundary(a), bb = boundary(b);
  const auto to_b = distance_transform(bb, row_mm, col_mm);
  const auto to_a = distance_transform(ba, row_mm, col_mm);
  double sum_ab = 0.0, sum_ba = 0.0;
  std::size_t na = 0, nb = 0;
  for (std::size_t i = 0; i < ba.size(); ++i) {
    if (ba[i]) {
      sum_ab += to_b[i];
      ++na;
    }
    if (bb[i]) {
      sum_ba += to_a[i];
      ++nb;
    }
  }
  return 0.5 * (sum_ab / static_cast<double>(na) + sum_ba / static_cast<double>(nb));
}

MaskImage error_region(const MaskImage& pred, const MaskImage& gt) {
  require_same(pred, gt);
  MaskImage out(pred.rows(), pred.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (pred[i] != 0) != (gt[i] != 0);
  return out;
}

MaskImage uncertain_region(const ImageD& uncertainty, double threshold) {
  MaskImage out(uncertainty.rows(), uncertainty.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = uncertainty[i] >= threshold;
  return out;
}

double ueo(const ImageD& uncertainty, const MaskImage& pred, const MaskImage& gt, double threshold) {
  require_same(uncertainty, pred);
  return dice(uncertain_region(uncertainty, threshold), error_region(pred, gt));
}

double rve(const ImageD& uncertainty, const MaskImage& pred, const MaskImage& gt, double threshold) {
  require_same(uncertainty, pred);
  const auto err = static_cast<double>(count(error_region(pred, gt)));
  if (err == 0.0) throw InvalidInput("relative volume error undefined: empty error region");
  const auto unc = static_cast<double>(count(uncertain_region(uncertainty, threshold)));
  return std::abs(unc - err) / err;
}

SweepResult sweep_ueo_threshold(std::span<const UncertaintyCase> cases, std::span<const double> grid) {
  if (cases.empty()) throw InvalidInput("threshold sweep needs at least one case");
  if (grid.empty()) throw InvalidInput("threshold sweep needs a non-empty grid");
  std::optional<SweepResult> best;
  for (double t : grid) {
    double total = 0.0;
    for (const auto& c : cases) total += ueo(c.uncertainty, c.pred, c.gt, t);
    const double mean = total / static_cast<double>(cases.size());
    if (!best || mean > best->mean_ueo || (mean == best->mean_ueo && t < best->threshold)) best = SweepResult{t, mean};
  }
  return *best;
}

void to_json(nlohmann::json& j, const MetricReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  j = nlohmann::json{{"dice", r.dice},
                     {"assd", opt(r.assd)},
                     {"ueo", opt(r.ueo)},
                     {"rve", opt(r.rve)},
                     {"ueo_threshold", opt(r.ueo_threshold)}};
  if (r.rve) j["rve_definition"] = "ours: | |[U>=t]| - |pred xor gt| | / |pred xor gt|";
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  out.count = static_cast<int>(values.size());
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(sq / static_cast<double>(values.size()));
  return out;
}

}  // namespace ugir::metrics
