#pragma once

#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "ugir/core/volume.hpp"

namespace ugir::metrics {

/// 2|a & b| / (|a| + |b|); 1 when both are empty.
double dice(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
double dice(const MaskImage& a, const MaskImage& b);

/// Foreground pixels with at least one background 4-neighbour. Pixels
/// outside the image count as background.
MaskImage boundary(const MaskImage& mask);

/// Average symmetric surface distance in mm: the mean distance from the
/// boundary pixels of a to the boundary of b, averaged with the reverse
/// direction.
/// Throws when either mask is empty.
double assd(const MaskImage& a, const MaskImage& b, double row_mm = 1.0, double col_mm = 1.0);

/// pred XOR gt.
MaskImage error_region(const MaskImage& pred, const MaskImage& gt);

/// [U >= threshold].
MaskImage uncertain_region(const ImageD& uncertainty, double threshold);

/// Dice between the thresholded uncertainty and the error region.
double ueo(const ImageD& uncertainty, const MaskImage& pred, const MaskImage& gt, double threshold);

/// | |[U >= t]| - |error| | / |error|. Our own definition; throws when the
/// error region is empty.
double rve(const ImageD& uncertainty, const MaskImage& pred, const MaskImage& gt, double threshold);

struct UncertaintyCase {
  ImageD uncertainty;
  MaskImage pred;
  MaskImage gt;
};

struct SweepResult {
  double threshold = 0.0;
  double mean_ueo = 0.0;
};

/// Grid threshold maximizing the mean UEO over all cases; ties go to the
/// smaller threshold.
SweepResult sweep_ueo_threshold(std::span<const UncertaintyCase> cases, std::span<const double> grid);

struct MetricReport {
  double dice = 0.0;
  std::optional<double> assd;
  std::optional<double> ueo;
  std::optional<double> rve;
  std::optional<double> ueo_threshold;
};

void to_json(nlohmann::json& j, const MetricReport& r);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
  int count = 0;
};

/// Population mean and standard deviation.
MeanStd mean_std(std::span<const double> values);

}  // namespace ugir::metrics
