#include "ugir/service/session_store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "ugir/core/ugstack.hpp"
#include "ugir/levelset/levelset.hpp"
#include "ugir/metrics/metrics.hpp"
#include "ugir/pipeline/refine.hpp"

namespace ugir::service {

struct SessionStore::Session {
  std::mutex mutex;
  std::string id;
  Stack stack;
  ProbabilityGroup probs;
  FusedResult fused;
  BinaryMask mask;
  SessionLog log;
  std::chrono::steady_clock::time_point last_access = std::chrono::steady_clock::now();

  bool finished() const { return log.finished(); }
  bool fetched(int k) const {
    const auto f = log.fetched_slices();
    return std::find(f.begin(), f.end(), k) != f.end();
  }
  void touch() { last_access = std::chrono::steady_clock::now(); }
};

namespace {

void write_text_atomic(const std::filesystem::path& p, const std::string& text) {
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << text;
  }
  std::filesystem::rename(tmp, p);
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot open '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void require_slice(const Shape3& shape, int k) {
  if (k < 0 || k >= shape.slices)
    throw ServiceError(400, "slice " + std::to_string(k) + " out of range [0, " + std::to_string(shape.slices) + ")");
}

void require_active(const std::string& id, bool finished) {
  if (finished) throw ServiceError(409, "session finished: '" + id + "'");
}

}  // namespace

void to_json(nlohmann::json& j, const SessionSummary& s) {
  auto preview = nlohmann::json::array();
  for (const auto& e : s.queue_preview) preview.push_back({{"slice", e.slice}, {"score", e.score}});
  j = nlohmann::json{{"id", s.id},
                     {"M", s.num_slices},
                     {"M_prime", s.cutoff},
                     {"queue", std::move(preview)},
                     {"state", s.finished ? "finished" : "active"},
                     {"current_slice", s.current_slice ? nlohmann::json(*s.current_slice) : nlohmann::json(nullptr)}};
}

SessionStore::SessionStore(StoreOptions options) : options_(std::move(options)) {
  if (options_.data_dir) std::filesystem::create_directories(*options_.data_dir);
}

SessionStore::~SessionStore() = default;

std::size_t SessionStore::size() const {
  std::shared_lock lock(mutex_);
  return sessions_.size();
}

std::string SessionStore::new_id() {
  static thread_local std::mt19937_64 gen{std::random_device{}()};
  std::ostringstream ss;
  ss << std::hex;
  for (int i = 0; i < 2; ++i) {
    ss.width(16);
    ss.fill('0');
    ss << gen();
  }
  return ss.str();
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "unknown session '" + id + "'");
  return it->second;
}

SessionSummary SessionStore::summary(const Session& s) {
  SessionSummary out;
  out.id = s.id;
  out.num_slices = s.stack.num_slices();
  out.cutoff = s.log.queue.cutoff;
  const auto n = static_cast<std::size_t>(std::min(s.log.queue.cutoff, s.log.queue.size()));
  out.queue_preview.assign(s.log.queue.entries.begin(), s.log.queue.entries.begin() + static_cast<std::ptrdiff_t>(n));
  out.finished = s.finished();
  const auto fetched = s.log.fetched_slices();
  if (!fetched.empty() && !out.finished) out.current_slice = fetched.back();
  return out;
}

void SessionStore::persist(const Session& s, bool inputs) const {
  if (!options_.data_dir) return;
  const auto dir = *options_.data_dir / s.id;
  std::filesystem::create_directories(dir);
  if (inputs) {
    write_stack(s.stack, dir / "stack");
    write_probability_group(s.probs, s.stack.spacing, dir / "probs");
  }
  write_mask(s.mask, s.stack.spacing, dir / "mask");
  write_text_atomic(dir / "log.json", nlohmann::json(s.log).dump(2) + "\n");
}

SessionSummary SessionStore::create(Stack stack, ProbabilityGroup probs, const RefineConfig& config) {
  auto s = std::make_shared<Session>();
  try {
    config.validate();
    stack.validate();
    probs.validate();
    if (probs.shape() != stack.shape()) {
      throw InvalidInput("probability group dims " + to_string(probs.shape()) + " do not match stack " +
                         to_string(stack.shape()));
    }
    s->fused = fuse_predictions(probs, config.threshold);
  } catch (const InvalidInput& e) {
    throw ServiceError(400, e.what());
  }
  s->stack = std::move(stack);
  s->probs = std::move(probs);
  s->mask = s->fused.mask;
  s->log.schedule = Schedule::normalized;
  s->log.early_stop = true;
  s->log.config = config;
  s->log.queue = build_queue(s->fused, config, Schedule::normalized);
  {
    std::unique_lock lock(mutex_);
    do s->id = new_id();
    while (sessions_.count(s->id));
    sessions_[s->id] = s;
  }
  std::lock_guard guard(s->mutex);
  persist(*s, true);
  return summary(*s);
}

SessionSummary SessionStore::describe(const std::string& id) {
  auto s = find(id);
  std::lock_guard guard(s->mutex);
  s->touch();
  return summary(*s);
}

SliceBundle SessionStore::slice_bundle(const std::string& id, int k) {
  auto s = find(id);
  std::lock_guard guard(s->mutex);
  s->touch();
  require_active(id, s->finished());
  require_slice(s->stack.shape(), k);

  SliceBundle b;
  b.slice = k;
  for (const auto& e : s->log.queue.entries)
    if (e.slice == k) b.score = e.score;
  const auto raw = s->stack.data.slice_values(k);
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  b.intensity_min = *lo;
  b.intensity_max = *hi;
  const ImageD norm = normalized_slice(s->stack, k);
  b.image = MaskImage(norm.rows(), norm.cols());
  for (std::size_t i = 0; i < norm.size(); ++i) b.image[i] = static_cast<std::uint8_t>(std::lround(norm[i] * 255.0));
  b.probability = s->fused.mean.slice(k);
  b.uncertainty = s->fused.variance.slice(k);
  b.mask = s->mask.slice(k);
  b.contour = metrics::boundary(b.mask);
  return b;
}

SubmitResult SessionStore::submit(const std::string& id, int k, ScribbleSet scribbles) {
  auto s = find(id);
  std::lock_guard guard(s->mutex);
  s->touch();
  require_active(id, s->finished());
  require_slice(s->stack.shape(), k);
  if (!s->fetched(k)) throw ServiceError(409, "slice " + std::to_string(k) + " has not been fetched yet");
  scribbles.slice_index = k;

  SubmitResult out;
  out.slice = k;
  const MaskImage current = s->mask.slice(k);
  const auto variance = s->fused.variance.slice_values(k);
  out.score_before = slice_uncertainty(variance, current.values(), s->log.config.zeta);

  auto ev = SessionEvent::of(EventKind::refine, k);
  out.mask = current;
  if (!scribbles.empty()) {
    try {
      const auto refined = refine_slice(normalized_slice(s->stack, k), s->fused.mean.slice(k), current, scribbles,
                                        s->log.config);
      ev.timings_ms = {{"geodesic", refined.geodesic_ms}, {"evolve", refined.evolve_ms}};
      out.mask = refined.mask;
    } catch (const NumericalError& e) {
      throw ServiceError(500, e.what());
    } catch (const InvalidInput& e) {
      throw ServiceError(400, e.what());
    }
    s->mask.set_slice(k, out.mask);
  }
  ev.scribbles = std::move(scribbles);
  s->log.events.push_back(std::move(ev));

  for (const auto& r : s->log.history())
    if (r.slice == k) out.edited = r.edited;
  out.score_after = slice_uncertainty(variance, out.mask.values(), s->log.config.zeta);
  for (std::size_t i = 0; i < out.mask.size(); ++i) {
    out.changed_pixels += out.mask[i] != current[i];
    out.foreground_pixels += out.mask[i] != 0;
  }
  persist(*s, false);
  return out;
}

std::optional<int> SessionStore::advance(const std::string& id) {
  auto s = find(id);
  std::lock_guard guard(s->mutex);
  s->touch();
  if (s->finished()) return std::nullopt;
  const auto history = s->log.history();
  const auto next = next_slice(s->log.queue, history, s->log.config.early_stop_count);
  if (!next) {
    auto done = SessionEvent::of(EventKind::done);
    done.reason = static_cast<int>(history.size()) >= s->log.queue.cutoff ? "cutoff" : "early_stop";
    s->log.events.push_back(std::move(done));
  } else {
    auto fetch = SessionEvent::of(EventKind::fetch, *next);
    fetch.score = s->log.queue.entries[history.size()].score;
    s->log.events.push_back(std::move(fetch));
  }
  persist(*s, false);
  return next;
}

ExportResult SessionStore::export_result(const std::string& id) {
  auto s = find(id);
  std::lock_guard guard(s->mutex);
  s->touch();
  return {s->mask, s->stack.spacing, s->log};
}

int SessionStore::evict_idle(std::chrono::steady_clock::time_point now) {
  std::unique_lock lock(mutex_);
  int evicted = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    std::unique_lock session_lock(it->second->mutex, std::try_to_lock);
    if (session_lock.owns_lock() && now - it->second->last_access > options_.idle_timeout) {
      session_lock.unlock();
      it = sessions_.erase(it);
      ++evicted;
    } else {
      ++it;
    }
  }
  return evicted;
}

int SessionStore::resume_from_disk() {
  if (!options_.data_dir) return 0;
  int loaded = 0;
  for (const auto& entry : std::filesystem::directory_iterator(*options_.data_dir)) {
    if (!entry.is_directory()) continue;
    const auto dir = entry.path();
    if (!std::filesystem::exists(dir / "log.json")) continue;
    auto s = std::make_shared<Session>();
    s->id = dir.filename().string();
    s->stack = read_stack(dir / "stack");
    s->probs = read_probability_group(dir / "probs");
    s->log = nlohmann::json::parse(read_text(dir / "log.json")).get<SessionLog>();
    s->fused = fuse_predictions(s->probs, s->log.config.threshold);
    s->mask = replay_session(s->stack, s->probs, s->log);
    std::unique_lock lock(mutex_);
    if (!sessions_.count(s->id)) {
      sessions_[s->id] = std::move(s);
      ++loaded;
    }
  }
  return loaded;
}

}  // namespace ugir::service
