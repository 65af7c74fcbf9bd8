#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "ugir/core/config.hpp"
#include "ugir/core/scribbles.hpp"
#include "ugir/pipeline/session.hpp"
#include "ugir/uncertainty/uncertainty.hpp"

namespace ugir::service {

/// Error carrying the HTTP status it maps to.
class ServiceError : public Error {
 public:
  ServiceError(int status, const std::string& what) : Error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

struct StoreOptions {
  std::optional<std::filesystem::path> data_dir;  // write-through persistence when set
  std::chrono::seconds idle_timeout{3600};
};

struct SessionSummary {
  std::string id;
  int num_slices = 0;
  int cutoff = 0;
  std::vector<QueueEntry> queue_preview;
  bool finished = false;
  std::optional<int> current_slice;
};

void to_json(nlohmann::json& j, const SessionSummary& s);

struct SliceBundle {
  int slice = 0;
  double score = 0.0;
  float intensity_min = 0.0f;
  float intensity_max = 0.0f;
  MaskImage image;        // 8-bit quantized over [intensity_min, intensity_max]
  ImageD probability;
  ImageD uncertainty;
  MaskImage mask;
  MaskImage contour;
};

struct SubmitResult {
  int slice = 0;
  bool edited = false;
  MaskImage mask;
  double score_before = 0.0;  // slice nu with the previous mask
  double score_after = 0.0;   // slice nu with the refined mask
  int changed_pixels = 0;
  int foreground_pixels = 0;
};

struct ExportResult {
  BinaryMask mask;
  Spacing spacing;
  SessionLog log;
};

/// In-memory sessions with optional directory-backed persistence. Requests
/// on one session are serialized; distinct sessions run concurrently.
class SessionStore {
 public:
  explicit SessionStore(StoreOptions options = {});
  ~SessionStore();
  SessionStore(const SessionStore&) = delete;
  SessionStore& operator=(const SessionStore&) = delete;

  /// Fuses and ranks synchronously. Throws ServiceError(400) on bad input.
  SessionSummary create(Stack stack, ProbabilityGroup probs, const RefineConfig& config);
  SessionSummary describe(const std::string& id);
  SliceBundle slice_bundle(const std::string& id, int k);
  /// k must already have been fetched. Empty scribbles leave the mask alone.
  SubmitResult submit(const std::string& id, int k, ScribbleSet scribbles);
  /// Next slice to review, or nullopt once the session is finished.
  std::optional<int> advance(const std::string& id);
  ExportResult export_result(const std::string& id);

  /// Drops sessions idle for longer than the timeout; returns how many.
  int evict_idle(std::chrono::steady_clock::time_point now = std::chrono::steady_clock::now());
  /// Loads every session persisted under data_dir; returns how many.
  int resume_from_disk();
  std::size_t size() const;

 private:
  struct Session;
  static SessionSummary summary(const Session& s);
  std::shared_ptr<Session> find(const std::string& id);
  void persist(const Session& s, bool inputs) const;
  std::string new_id();

  StoreOptions options_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace ugir::service
