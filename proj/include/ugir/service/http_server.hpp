#pragma once

#include <memory>
#include <string>

#include "ugir/service/session_store.hpp"

namespace ugir::service {

/// REST front end over a SessionStore.
///
///   POST /sessions                             packed {stack, probs}, meta.config
///   GET  /sessions/{id}                        JSON summary
///   GET  /sessions/{id}/slices/{k}             packed slice bundle
///   POST /sessions/{id}/slices/{k}/scribbles   scribble JSON -> packed refined mask
///   POST /sessions/{id}/advance                JSON {done, slice, score}
///   GET  /sessions/{id}/export                 packed {mask}, meta.log
class HttpServer {
 public:
  explicit HttpServer(SessionStore& store);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Blocks until stop().
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it (or -1); pair with listen_after_bind().
  int bind_to_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ugir::service
