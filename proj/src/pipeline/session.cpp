#include <chrono>

#include "ugir/metrics/metrics.hpp"
#include "ugir/pipeline/refine.hpp"
#include "ugir/pipeline/session.hpp"

namespace ugir {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void check_dims(const Stack& stack, const ProbabilityGroup& probs, const BinaryMask* gt) {
  stack.validate();
  probs.validate();
  if (probs.shape() != stack.shape()) {
    throw InvalidInput("probability group dims " + to_string(probs.shape()) + " do not match stack " +
                       to_string(stack.shape()));
  }
  if (gt && gt->shape() != stack.shape()) throw InvalidInput("ground truth dims do not match stack");
}

}  // namespace

SliceQueue build_queue(const FusedResult& fused, const RefineConfig& cfg, Schedule schedule) {
  switch (schedule) {
    case Schedule::normalized: return rank_slices(fused, cfg, RankMode::normalized);
    case Schedule::naive: return rank_slices(fused, cfg, RankMode::naive);
    case Schedule::sequential: {
      SliceQueue q;
      for (int k = 0; k < fused.num_slices(); ++k) {
        q.entries.push_back(
            {k, slice_uncertainty(fused.variance.slice_values(k), fused.mask.slice_values(k), cfg.zeta)});
      }
      q.cutoff = fused.num_slices();
      return q;
    }
  }
  throw InvalidInput("unknown schedule");
}

SessionResult run_session(const Stack& stack, const ProbabilityGroup& probs, const BinaryMask* gt,
                          ScribbleSource& source, const RefineConfig& cfg, const SessionOptions& options) {
  cfg.validate();
  check_dims(stack, probs, gt);

  SessionResult result;
  auto& log = result.log;
  log.schedule = options.schedule;
  log.early_stop = options.early_stop;
  log.config = cfg;

  auto t0 = Clock::now();
  const auto fused = fuse_predictions(probs, cfg.threshold);
  log.timings_ms["fuse"] = ms_since(t0);
  t0 = Clock::now();
  log.queue = build_queue(fused, cfg, options.schedule);
  log.timings_ms["rank"] = ms_since(t0);

  result.initial = fused.mask;
  result.final_mask = fused.mask;
  const int early_stop = options.early_stop ? cfg.early_stop_count : 0;

  std::vector<FetchRecord> history;
  for (;;) {
    const auto next = next_slice(log.queue, history, early_stop);
    if (!next) {
      auto done = SessionEvent::of(EventKind::done);
      done.reason = static_cast<int>(history.size()) >= log.queue.cutoff ? "cutoff" : "early_stop";
      log.events.push_back(std::move(done));
      break;
    }
    const int k = *next;
    auto fetch = SessionEvent::of(EventKind::fetch, k);
    fetch.score = log.queue.entries[history.size()].score;
    log.events.push_back(std::move(fetch));
    history.push_back({k, false});

    const ImageD intensity = normalized_slice(stack, k);
    const ImageD prob = fused.mean.slice(k);
    for (int round = 1; round <= options.max_rounds; ++round) {
      MaskImage current = result.final_mask.slice(k);
      ScribbleSet s = source.scribbles(k, round, current);
      if (s.empty()) break;
      s.slice_index = k;
      auto ev = SessionEvent::of(EventKind::refine, k);
      try {
        const auto refined = refine_slice(intensity, prob, current, s, cfg);
        ev.timings_ms = {{"geodesic", refined.geodesic_ms}, {"evolve", refined.evolve_ms}};
        if (gt) {
          const MaskImage truth = gt->slice(k);
          ev.dice_before = metrics::dice(current, truth);
          ev.dice_after = metrics::dice(refined.mask, truth);
        }
        result.final_mask.set_slice(k, refined.mask);
      } catch (const Error& e) {
        throw Error("slice " + std::to_string(k) + ": " + e.what());
      }
      ev.scribbles = std::move(s);
      log.events.push_back(std::move(ev));
      history.back().edited = true;
    }
  }
  return result;
}

BinaryMask replay_session(const Stack& stack, const ProbabilityGroup& probs, const SessionLog& log) {
  check_dims(stack, probs, nullptr);
  const auto fused = fuse_predictions(probs, log.config.threshold);
  BinaryMask mask = fused.mask;
  for (const auto& e : log.events) {
    if (e.kind != EventKind::refine || e.scribbles.empty()) continue;
    const auto refined = refine_slice(normalized_slice(stack, e.slice), fused.mean.slice(e.slice),
                                      mask.slice(e.slice), e.scribbles, log.config);
    mask.set_slice(e.slice, refined.mask);
  }
  return mask;
}

}  // namespace ugir
