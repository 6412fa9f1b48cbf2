#include "triage/workspace/http_api.hpp"

#include <httplib.h>

#include <algorithm>
#include <functional>

namespace triage::workspace {
namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(canonical(body), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  send_json(res, status, Json{{"code", code}, {"message", message}});
}

using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

Handler guarded(Handler h) {
  return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
    try {
      h(req, res);
    } catch (const Error& e) {
      send_error(res, http_status(e.code()), to_string(e.code()), e.what());
    } catch (const Json::exception& e) {
      send_error(res, 400, to_string(ErrorCode::kParseError), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

Json body_of(const httplib::Request& req) {
  Json j = Json::parse(req.body);
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "request body must be a JSON object");
  return j;
}

std::size_t size_param(const httplib::Request& req, const char* name, std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string text = req.get_param_value(name);
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used != text.size() || v < 0) throw std::invalid_argument(text);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad ") + name + " '" + text + "'");
  }
}

std::vector<double> thresholds_param(const httplib::Request& req, const Workspace& ws) {
  if (!req.has_param("thresholds")) return ws.config().thresholds;
  return evaluation::parse_thresholds(req.get_param_value("thresholds"));
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownOffer:
    case ErrorCode::kUnknownCluster:
    case ErrorCode::kWorkspaceMissing:
      return 404;
    case ErrorCode::kRetiredCluster:
    case ErrorCode::kMissingPrerequisite:
    case ErrorCode::kNoScores:
    case ErrorCode::kWorkspaceLocked:
      return 409;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParseError:
      return 400;
    case ErrorCode::kIoError:
      return 500;
    default:
      return 422;
  }
}

struct ApiServer::Impl {
  Workspace& ws;
  httplib::Server server;
  explicit Impl(Workspace& w) : ws(w) {}
};

ApiServer::ApiServer(Workspace& ws) : impl_(std::make_unique<Impl>(ws)) {
  auto& srv = impl_->server;
  Workspace& w = ws;

  srv.Get("/api/clusters", guarded([&w](const httplib::Request& req, httplib::Response& res) {
    auto all = w.clusters();
    std::size_t limit = size_param(req, "limit", 50);
    std::size_t offset = std::min(size_param(req, "offset", 0), all.size());
    std::size_t end = std::min(all.size(), offset + limit);
    Json items = Json::array();
    for (std::size_t i = offset; i < end; ++i) items.push_back(all[i]);
    send_json(res, 200, Json{{"total", all.size()}, {"items", std::move(items)}});
  }));

  srv.Get(R"(/api/clusters/([^/]+))", guarded([&w](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, Json(w.cluster_detail(req.matches[1].str())));
  }));

  srv.Get("/api/offers/suspicious", guarded([&w](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("threshold")) throw Error(ErrorCode::kInvalidArgument, "threshold is required");
    double threshold = 0.0;
    try {
      threshold = std::stod(req.get_param_value("threshold"));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "bad threshold");
    }
    auto page = w.list_suspicious(threshold, size_param(req, "limit", 50), size_param(req, "offset", 0));
    send_json(res, 200, Json(page));
  }));

  srv.Post("/api/verdicts", guarded([&w](const httplib::Request& req, httplib::Response& res) {
    auto v = body_of(req).get<Verdict>();
    send_json(res, 201, Json(w.submit_verdict(std::move(v))));
  }));

  srv.Post("/api/clusters/merge", guarded([&w](const httplib::Request& req, httplib::Response& res) {
    Json body = body_of(req);
    auto ids = body.at("cluster_ids").get<std::vector<std::string>>();
    auto reviewer = body.value("reviewer", "");
    send_json(res, 200, Json(w.merge_clusters(ids, reviewer)));
  }));

  srv.Post("/api/pipeline/run", guarded([&w](const httplib::Request& req, httplib::Response& res) {
    Json body = body_of(req);
    std::set<Stage> stages;
    for (const auto& name : body.at("stages").get<std::vector<std::string>>()) {
      auto s = parse_stage(name);
      if (!s) throw Error(ErrorCode::kInvalidArgument, "unknown stage '" + name + "'");
      stages.insert(*s);
    }
    if (stages.empty()) throw Error(ErrorCode::kInvalidArgument, "no stages requested");
    send_json(res, 200, Json(w.run_pipeline(stages)));
  }));

  srv.Get("/api/reports/sweep", guarded([&w](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, Json(w.sweep(thresholds_param(req, w))));
  }));

  srv.Get("/api/reports/sellers", guarded([&w](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, Json{{"items", w.seller_report(thresholds_param(req, w))}});
  }));
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ApiServer::listen() { return impl_->server.listen_after_bind(); }

void ApiServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void ApiServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace triage::workspace
