#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ugir/core/config.hpp"
#include "ugir/core/scribbles.hpp"
#include "ugir/core/volume.hpp"
#include "ugir/uncertainty/uncertainty.hpp"

namespace ugir {

/// Order in which slices are offered for review.
enum class Schedule {
  normalized,  // descending nu
  naive,       // descending nu*
  sequential,  // slice index order, every slice (manual slice-by-slice search)
};

std::string to_string(Schedule s);
Schedule schedule_from_string(const std::string& s);

enum class EventKind { fetch, refine, done };

struct SessionEvent {
  EventKind kind = EventKind::fetch;
  int slice = -1;
  double score = 0.0;                   // fetch
  ScribbleSet scribbles;                // refine
  std::optional<double> dice_before;    // refine, when ground truth is known
  std::optional<double> dice_after;
  std::map<std::string, double> timings_ms;
  std::string reason;                   // done

  static SessionEvent of(EventKind kind, int slice = -1) {
    SessionEvent e;
    e.kind = kind;
    e.slice = slice;
    return e;
  }
};

struct SessionLog {
  Schedule schedule = Schedule::normalized;
  bool early_stop = true;
  RefineConfig config;
  SliceQueue queue;
  std::map<std::string, double> timings_ms;  // fuse, rank
  std::vector<SessionEvent> events;

  /// Fetch history with edit flags, in fetch order.
  std::vector<FetchRecord> history() const;
  std::vector<int> fetched_slices() const;
  std::vector<int> edited_slices() const;
  bool finished() const;
};

void to_json(nlohmann::json& j, const SessionLog& log);
void from_json(const nlohmann::json& j, SessionLog& log);

/// Equal up to wall-clock timings.
bool same_decisions(const SessionLog& a, const SessionLog& b);

/// Where scribbles come from during a session.
class ScribbleSource {
 public:
  virtual ~ScribbleSource() = default;
  /// Scribbles for `round` (1-based) on slice k given its current mask; an
  /// empty set ends the rounds for this slice.
  virtual ScribbleSet scribbles(int slice, int round, const MaskImage& current) = 0;
};

struct SessionOptions {
  Schedule schedule = Schedule::normalized;
  bool early_stop = true;
  int max_rounds = 2;
};

struct SessionResult {
  BinaryMask initial;
  BinaryMask final_mask;
  SessionLog log;
};

/// fuse -> rank -> {next slice -> scribbles -> refine -> write back} until
/// the scheduler says done. `gt`, when given, is only used to log Dice.
SessionResult run_session(const Stack& stack, const ProbabilityGroup& probs, const BinaryMask* gt,
                          ScribbleSource& source, const RefineConfig& cfg, const SessionOptions& options = {});

/// Builds the review queue for a schedule.
SliceQueue build_queue(const FusedResult& fused, const RefineConfig& cfg, Schedule schedule);

/// Re-applies every logged refinement to the fused initial mask.
BinaryMask replay_session(const Stack& stack, const ProbabilityGroup& probs, const SessionLog& log);

}  // namespace ugir
