#include "ugir/service/http_server.hpp"

#include <httplib.h>

#include "ugir/core/ugstack.hpp"
#include "ugir/service/packed.hpp"

namespace ugir::service {
namespace {

RawArray u8_slice(const MaskImage& img, ArrayKind kind) {
  RawArray a;
  a.header = {kind, {1, img.rows(), img.cols()}, DType::u8, {}, {}};
  a.bytes.assign(img.values().begin(), img.values().end());
  return a;
}

RawArray f32_slice(const ImageD& img, ArrayKind kind) {
  RawArray a;
  a.header = {kind, {1, img.rows(), img.cols()}, DType::f32, {}, {}};
  if (kind == ArrayKind::probgroup) a.header.dims.insert(a.header.dims.begin(), 1);
  std::vector<float> f(img.values().begin(), img.values().end());
  append_f32_le(a.bytes, f);
  return a;
}

void send_json(httplib::Response& res, const nlohmann::json& j, int status = 200) {
  res.status = status;
  res.set_content(j.dump(), "application/json");
}

void send_packed(httplib::Response& res, const PackedMessage& m) {
  res.status = 200;
  res.set_content(encode_packed(m), kPackedContentType);
}

// Runs a handler and maps library errors onto HTTP status codes.
template <class F>
httplib::Server::Handler guarded(F&& f) {
  return [f = std::forward<F>(f)](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ServiceError& e) {
      send_json(res, {{"error", e.what()}}, e.status());
    } catch (const IoError& e) {
      send_json(res, {{"error", e.what()}}, 400);
    } catch (const InvalidInput& e) {
      send_json(res, {{"error", e.what()}}, 400);
    } catch (const nlohmann::json::exception& e) {
      send_json(res, {{"error", std::string("bad JSON: ") + e.what()}}, 400);
    } catch (const std::exception& e) {
      send_json(res, {{"error", e.what()}}, 500);
    }
  };
}

int slice_param(const httplib::Request& req) {
  try {
    return std::stoi(req.matches[2].str());
  } catch (const std::exception&) {
    throw ServiceError(400, "bad slice index");
  }
}

}  // namespace

struct HttpServer::Impl {
  SessionStore& store;
  httplib::Server server;

  explicit Impl(SessionStore& s) : store(s) { routes(); }

  void routes() {
    server.set_pre_routing_handler([this](const httplib::Request&, httplib::Response&) {
      store.evict_idle();
      return httplib::Server::HandlerResponse::Unhandled;
    });

    server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto msg = decode_packed(req.body);
      RefineConfig cfg;
      if (msg.meta.contains("config")) msg.meta.at("config").get_to(cfg);
      auto stack = decode_stack(msg.at("stack"));
      auto probs = decode_probability_group(msg.at("probs"));
      send_json(res, store.create(std::move(stack), std::move(probs), cfg), 201);
    }));

    server.Get(R"(/sessions/([0-9a-f]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, store.describe(req.matches[1].str()));
    }));

    server.Get(R"(/sessions/([0-9a-f]+)/slices/(-?\d+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto b = store.slice_bundle(req.matches[1].str(), slice_param(req));
                 PackedMessage m;
                 m.meta = {{"slice", b.slice},
                           {"score", b.score},
                           {"rows", b.image.rows()},
                           {"cols", b.image.cols()},
                           {"intensity_min", b.intensity_min},
                           {"intensity_max", b.intensity_max}};
                 m.arrays = {{"image", u8_slice(b.image, ArrayKind::stack)},
                             {"probability", f32_slice(b.probability, ArrayKind::probgroup)},
                             {"uncertainty", f32_slice(b.uncertainty, ArrayKind::uncertainty)},
                             {"mask", u8_slice(b.mask, ArrayKind::mask)},
                             {"contour", u8_slice(b.contour, ArrayKind::mask)}};
                 send_packed(res, m);
               }));

    server.Post(R"(/sessions/([0-9a-f]+)/slices/(-?\d+)/scribbles)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  ScribbleSet s = nlohmann::json::parse(req.body).get<ScribbleSet>();
                  const auto r = store.submit(req.matches[1].str(), slice_param(req), std::move(s));
                  PackedMessage m;
                  m.meta = {{"slice", r.slice},
                            {"edited", r.edited},
                            {"score_before", r.score_before},
                            {"score_after", r.score_after},
                            {"changed_pixels", r.changed_pixels},
                            {"foreground_pixels", r.foreground_pixels}};
                  m.arrays = {{"mask", u8_slice(r.mask, ArrayKind::mask)}};
                  send_packed(res, m);
                }));

    server.Post(R"(/sessions/([0-9a-f]+)/advance)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto id = req.matches[1].str();
      const auto next = store.advance(id);
      nlohmann::json j{{"done", !next.has_value()}, {"slice", next ? nlohmann::json(*next) : nlohmann::json(nullptr)}};
      if (next) {
        for (const auto& e : store.describe(id).queue_preview)
          if (e.slice == *next) j["score"] = e.score;
      }
      send_json(res, j);
    }));

    server.Get(R"(/sessions/([0-9a-f]+)/export)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto r = store.export_result(req.matches[1].str());
      PackedMessage m;
      m.meta = {{"log", r.log}};
      m.arrays = {{"mask", encode(r.mask, r.spacing)}};
      send_packed(res, m);
    }));
  }
};

HttpServer::HttpServer(SessionStore& store) : impl_(std::make_unique<Impl>(store)) {}
HttpServer::~HttpServer() { stop(); }

bool HttpServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }
int HttpServer::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }
void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}
void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace ugir::service
