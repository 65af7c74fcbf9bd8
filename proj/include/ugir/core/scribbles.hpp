#pragma once

#include <compare>
#include <vector>

#include <json.hpp>

#include "ugir/core/volume.hpp"

namespace ugir {

enum class ScribbleLabel { foreground, background };

struct Pixel {
  int row = 0;
  int col = 0;
  auto operator<=>(const Pixel&) const = default;
};

struct Stroke {
  ScribbleLabel label = ScribbleLabel::foreground;
  std::vector<Pixel> polyline;
  int radius = 0;
  bool operator==(const Stroke&) const = default;
};

/// User strokes on one slice.
struct ScribbleSet {
  int slice_index = 0;
  std::vector<Stroke> strokes;

  bool empty() const { return strokes.empty(); }
  bool operator==(const ScribbleSet&) const = default;
};

void to_json(nlohmann::json& j, const ScribbleSet& s);
void from_json(const nlohmann::json& j, ScribbleSet& s);

/// Rasterized foreground (F) and background (B) pixel sets; disjoint.
struct SeedMasks {
  MaskImage foreground;
  MaskImage background;

  bool has_foreground() const;
  bool has_background() const;
  std::vector<Pixel> foreground_pixels() const;
  std::vector<Pixel> background_pixels() const;
};

/// 8-connected line stepping from a to b inclusive.
std::vector<Pixel> line_pixels(Pixel a, Pixel b);

/// Draws each polyline, dilates by its radius disk and applies strokes in
/// order so a later stroke overrides earlier labels on shared pixels.
/// Any out-of-bounds point rejects the whole set.
SeedMasks rasterize_scribbles(const ScribbleSet& scribbles, int rows, int cols);

}  // namespace ugir
