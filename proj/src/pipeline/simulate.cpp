#include "ugir/pipeline/simulate.hpp"

#include <algorithm>

#include "ugir/core/distance_transform.hpp"

namespace ugir {
namespace {

constexpr int kSteps[8][2] = {{0, 1}, {1, 0}, {0, -1}, {-1, 0}, {1, 1}, {1, -1}, {-1, -1}, {-1, 1}};

// Walks the core pixels into strokes whose consecutive points are 8-adjacent.
std::vector<Stroke> trace_core(const MaskImage& core, ScribbleLabel label) {
  std::vector<Stroke> out;
  MaskImage seen(core.rows(), core.cols(), 0);
  for (int r = 0; r < core.rows(); ++r) {
    for (int c = 0; c < core.cols(); ++c) {
      if (!core(r, c) || seen(r, c)) continue;
      Stroke st{label, {}, 0};
      Pixel cur{r, c};
      for (;;) {
        st.polyline.push_back(cur);
        seen(cur.row, cur.col) = 1;
        bool moved = false;
        for (const auto& d : kSteps) {
          const int nr = cur.row + d[0], nc = cur.col + d[1];
          if (core.contains(nr, nc) && core(nr, nc) && !seen(nr, nc)) {
            cur = {nr, nc};
            moved = true;
            break;
          }
        }
        if (!moved) break;
      }
      out.push_back(std::move(st));
    }
  }
  return out;
}

void add_component_strokes(const MaskImage& region, int min_component, ScribbleLabel label, ScribbleSet& out) {
  for (const auto& comp : connected_components(region)) {
    if (static_cast<int>(comp.size()) < min_component) continue;
    MaskImage outside(region.rows(), region.cols(), 1);
    for (const auto& p : comp) outside(p.row, p.col) = 0;
    const auto depth = distance_transform(outside);
    double deepest = 0.0;
    for (const auto& p : comp) deepest = std::max(deepest, depth(p.row, p.col));
    MaskImage core(region.rows(), region.cols(), 0);
    for (const auto& p : comp)
      if (depth(p.row, p.col) >= 0.5 * deepest) core(p.row, p.col) = 1;
    for (auto& st : trace_core(core, label)) out.strokes.push_back(std::move(st));
  }
}

}  // namespace

std::vector<std::vector<Pixel>> connected_components(const MaskImage& mask) {
  std::vector<std::vector<Pixel>> out;
  MaskImage seen(mask.rows(), mask.cols(), 0);
  std::vector<Pixel> stack;
  for (int r = 0; r < mask.rows(); ++r) {
    for (int c = 0; c < mask.cols(); ++c) {
      if (!mask(r, c) || seen(r, c)) continue;
      std::vector<Pixel> comp;
      stack.push_back({r, c});
      seen(r, c) = 1;
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        comp.push_back(p);
        for (const auto& d : kSteps) {
          const int nr = p.row + d[0], nc = p.col + d[1];
          if (mask.contains(nr, nc) && mask(nr, nc) && !seen(nr, nc)) {
            seen(nr, nc) = 1;
            stack.push_back({nr, nc});
          }
        }
      }
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
  }
  return out;
}

int largest_error_component(const MaskImage& pred, const MaskImage& gt) {
  if (!pred.same_shape(gt)) throw InvalidInput("prediction and ground truth differ in dims");
  MaskImage err(pred.rows(), pred.cols());
  for (std::size_t i = 0; i < err.size(); ++i) err[i] = (pred[i] != 0) != (gt[i] != 0);
  std::size_t best = 0;
  for (const auto& c : connected_components(err)) best = std::max(best, c.size());
  return static_cast<int>(best);
}

ScribbleSet simulate_scribbles(const MaskImage& pred, const MaskImage& gt, int min_component) {
  if (!pred.same_shape(gt)) throw InvalidInput("prediction and ground truth differ in dims");
  MaskImage missed(pred.rows(), pred.cols()), spurious(pred.rows(), pred.cols());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    missed[i] = gt[i] && !pred[i];
    spurious[i] = pred[i] && !gt[i];
  }
  ScribbleSet out;
  add_component_strokes(missed, min_component, ScribbleLabel::foreground, out);
  add_component_strokes(spurious, min_component, ScribbleLabel::background, out);
  return out;
}

SimulatedUser::SimulatedUser(const BinaryMask& gt, int min_component) : gt_(gt), min_component_(min_component) {}

ScribbleSet SimulatedUser::scribbles(int slice, int round, const MaskImage& current) {
  if (round == 1 || slice != last_slice_) previous_ = ScribbleSet{slice, {}};
  last_slice_ = slice;
  auto fresh = simulate_scribbles(current, gt_.slice(slice), min_component_);
  if (fresh.empty()) return ScribbleSet{slice, {}};
  ScribbleSet out = previous_;
  out.slice_index = slice;
  for (auto& st : fresh.strokes) out.strokes.push_back(std::move(st));
  previous_ = out;
  return out;
}

}  // namespace ugir
