#include <algorithm>

#include "ugir/pipeline/session.hpp"

namespace ugir {
namespace {

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::fetch: return "fetch";
    case EventKind::refine: return "refine";
    case EventKind::done: return "done";
  }
  return "?";
}

EventKind event_kind_from_string(const std::string& s) {
  if (s == "fetch") return EventKind::fetch;
  if (s == "refine") return EventKind::refine;
  if (s == "done") return EventKind::done;
  throw InvalidInput("unknown session event '" + s + "'");
}

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::optional<double> opt_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

std::string to_string(Schedule s) {
  switch (s) {
    case Schedule::normalized: return "normalized";
    case Schedule::naive: return "naive";
    case Schedule::sequential: return "sequential";
  }
  return "?";
}

Schedule schedule_from_string(const std::string& s) {
  if (s == "normalized") return Schedule::normalized;
  if (s == "naive") return Schedule::naive;
  if (s == "sequential") return Schedule::sequential;
  throw InvalidInput("unknown schedule '" + s + "' (expected normalized, naive or sequential)");
}

std::vector<FetchRecord> SessionLog::history() const {
  std::vector<FetchRecord> out;
  for (const auto& e : events) {
    if (e.kind == EventKind::fetch) {
      out.push_back({e.slice, false});
    } else if (e.kind == EventKind::refine && !e.scribbles.empty()) {
      auto it = std::find_if(out.begin(), out.end(), [&](const FetchRecord& r) { return r.slice == e.slice; });
      if (it != out.end()) it->edited = true;
    }
  }
  return out;
}

std::vector<int> SessionLog::fetched_slices() const {
  std::vector<int> out;
  for (const auto& r : history()) out.push_back(r.slice);
  return out;
}

std::vector<int> SessionLog::edited_slices() const {
  std::vector<int> out;
  for (const auto& r : history())
    if (r.edited) out.push_back(r.slice);
  return out;
}

bool SessionLog::finished() const { return !events.empty() && events.back().kind == EventKind::done; }

void to_json(nlohmann::json& j, const SessionLog& log) {
  auto queue = nlohmann::json::array();
  for (const auto& e : log.queue.entries) queue.push_back({{"slice", e.slice}, {"score", e.score}});
  auto events = nlohmann::json::array();
  for (const auto& e : log.events) {
    nlohmann::json je{{"kind", to_string(e.kind)}, {"slice", e.slice}};
    switch (e.kind) {
      case EventKind::fetch:
        je["score"] = e.score;
        break;
      case EventKind::refine:
        je["scribbles"] = e.scribbles;
        je["dice_before"] = opt(e.dice_before);
        je["dice_after"] = opt(e.dice_after);
        break;
      case EventKind::done:
        je["reason"] = e.reason;
        break;
    }
    if (!e.timings_ms.empty()) je["timings_ms"] = e.timings_ms;
    events.push_back(std::move(je));
  }
  j = nlohmann::json{{"schedule", to_string(log.schedule)},
                     {"early_stop", log.early_stop},
                     {"config", log.config},
                     {"queue", std::move(queue)},
                     {"cutoff", log.queue.cutoff},
                     {"timings_ms", log.timings_ms},
                     {"events", std::move(events)}};
}

void from_json(const nlohmann::json& j, SessionLog& log) {
  try {
    log = SessionLog{};
    log.schedule = schedule_from_string(j.at("schedule").get<std::string>());
    log.early_stop = j.value("early_stop", true);
    j.at("config").get_to(log.config);
    for (const auto& e : j.at("queue")) log.queue.entries.push_back({e.at("slice").get<int>(), e.at("score").get<double>()});
    log.queue.cutoff = j.at("cutoff").get<int>();
    if (j.contains("timings_ms")) j.at("timings_ms").get_to(log.timings_ms);
    for (const auto& je : j.at("events")) {
      SessionEvent e;
      e.kind = event_kind_from_string(je.at("kind").get<std::string>());
      e.slice = je.value("slice", -1);
      e.score = je.value("score", 0.0);
      if (je.contains("scribbles")) je.at("scribbles").get_to(e.scribbles);
      e.dice_before = opt_from(je, "dice_before");
      e.dice_after = opt_from(je, "dice_after");
      if (je.contains("timings_ms")) je.at("timings_ms").get_to(e.timings_ms);
      e.reason = je.value("reason", "");
      log.events.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed session log: ") + e.what());
  }
}

bool same_decisions(const SessionLog& a, const SessionLog& b) {
  if (a.schedule != b.schedule || a.early_stop != b.early_stop || !(a.config == b.config) || !(a.queue == b.queue))
    return false;
  if (a.events.size() != b.events.size()) return false;
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    const auto& x = a.events[i];
    const auto& y = b.events[i];
    if (x.kind != y.kind || x.slice != y.slice || x.score != y.score || !(x.scribbles == y.scribbles) ||
        x.dice_before != y.dice_before || x.dice_after != y.dice_after || x.reason != y.reason)
      return false;
  }
  return true;
}

}  // namespace ugir
