#include "ugir/core/scribbles.hpp"

#include <cstdlib>
#include <string>

namespace ugir {
namespace {

std::vector<Pixel> collect(const MaskImage& m) {
  std::vector<Pixel> out;
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (m(r, c)) out.push_back({r, c});
  return out;
}

bool any_set(const MaskImage& m) {
  for (auto v : m.values())
    if (v) return true;
  return false;
}

}  // namespace

void to_json(nlohmann::json& j, const ScribbleSet& s) {
  auto strokes = nlohmann::json::array();
  for (const auto& st : s.strokes) {
    auto poly = nlohmann::json::array();
    for (const auto& p : st.polyline) poly.push_back({p.row, p.col});
    strokes.push_back({{"label", st.label == ScribbleLabel::foreground ? "fg" : "bg"},
                       {"polyline", std::move(poly)},
                       {"radius", st.radius}});
  }
  j = nlohmann::json{{"slice", s.slice_index}, {"strokes", std::move(strokes)}};
}

void from_json(const nlohmann::json& j, ScribbleSet& s) {
  try {
    s.slice_index = j.at("slice").get<int>();
    s.strokes.clear();
    for (const auto& js : j.at("strokes")) {
      Stroke st;
      const auto label = js.at("label").get<std::string>();
      if (label == "fg") st.label = ScribbleLabel::foreground;
      else if (label == "bg") st.label = ScribbleLabel::background;
      else throw InvalidInput("stroke label must be 'fg' or 'bg'");
      for (const auto& p : js.at("polyline")) {
        if (!p.is_array() || p.size() != 2) throw InvalidInput("polyline points must be [row, col]");
        st.polyline.push_back({p[0].get<int>(), p[1].get<int>()});
      }
      st.radius = js.value("radius", 0);
      if (st.radius < 0) throw InvalidInput("stroke radius must be nonnegative");
      s.strokes.push_back(std::move(st));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed scribble JSON: ") + e.what());
  }
}

bool SeedMasks::has_foreground() const { return any_set(foreground); }
bool SeedMasks::has_background() const { return any_set(background); }
std::vector<Pixel> SeedMasks::foreground_pixels() const { return collect(foreground); }
std::vector<Pixel> SeedMasks::background_pixels() const { return collect(background); }

std::vector<Pixel> line_pixels(Pixel a, Pixel b) {
  std::vector<Pixel> out;
  int r = a.row, c = a.col;
  const int dr = std::abs(b.row - a.row), dc = std::abs(b.col - a.col);
  const int sr = a.row < b.row ? 1 : -1, sc = a.col < b.col ? 1 : -1;
  int err = dc - dr;
  for (;;) {
    out.push_back({r, c});
    if (r == b.row && c == b.col) break;
    const int e2 = 2 * err;
    if (e2 > -dr) {
      err -= dr;
      c += sc;
    }
    if (e2 < dc) {
      err += dc;
      r += sr;
    }
  }
  return out;
}

SeedMasks rasterize_scribbles(const ScribbleSet& scribbles, int rows, int cols) {
  // label: 0 none, 1 fg, 2 bg
  Image<std::uint8_t> label(rows, cols, 0);
  for (const auto& st : scribbles.strokes) {
    if (st.radius < 0) throw InvalidInput("stroke radius must be nonnegative");
    for (const auto& p : st.polyline) {
      if (!label.contains(p.row, p.col)) {
        throw InvalidInput("scribble point (" + std::to_string(p.row) + ", " + std::to_string(p.col) +
                           ") outside image bounds");
      }
    }
  }
  for (const auto& st : scribbles.strokes) {
    if (st.polyline.empty()) continue;
    const std::uint8_t value = st.label == ScribbleLabel::foreground ? 1 : 2;
    const int r2 = st.radius * st.radius;
    auto stamp = [&](Pixel p) {
      for (int dr = -st.radius; dr <= st.radius; ++dr)
        for (int dc = -st.radius; dc <= st.radius; ++dc)
          if (dr * dr + dc * dc <= r2 && label.contains(p.row + dr, p.col + dc)) label(p.row + dr, p.col + dc) = value;
    };
    if (st.polyline.size() == 1) stamp(st.polyline.front());
    for (std::size_t i = 1; i < st.polyline.size(); ++i)
      for (const auto& p : line_pixels(st.polyline[i - 1], st.polyline[i])) stamp(p);
  }
  SeedMasks out{MaskImage(rows, cols, 0), MaskImage(rows, cols, 0)};
  for (std::size_t i = 0; i < label.size(); ++i) {
    out.foreground[i] = label[i] == 1;
    out.background[i] = label[i] == 2;
  }
  return out;
}

}  // namespace ugir
