#include <httplib.h>

#include <json.hpp>

#include <thread>

#include "varattack/core/errors.hpp"
#include "varattack/gateway/http.hpp"
#include "varattack/gateway/wire.hpp"

namespace varattack::gateway {
namespace {

constexpr const char* kJson = "application/json";

std::string error_body(const std::string& message) {
  return nlohmann::json{{"error", message}}.dump(-1, ' ', false,
                                                 nlohmann::json::error_handler_t::replace);
}

}  // namespace

HttpBackend::HttpBackend(const std::string& url, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  std::string rest = url;
  if (rest.starts_with("http://")) {
    rest = rest.substr(7);
  } else if (rest.find("://") != std::string::npos) {
    throw TransportError("only http:// endpoints are supported: " + url);
  }
  if (auto slash = rest.find('/'); slash != std::string::npos) rest = rest.substr(0, slash);
  if (auto colon = rest.rfind(':'); colon != std::string::npos) {
    host_ = rest.substr(0, colon);
    try {
      port_ = std::stoi(rest.substr(colon + 1));
    } catch (const std::exception&) {
      throw TransportError("invalid port in endpoint: " + url);
    }
  } else {
    host_ = rest;
  }
  if (host_.empty()) throw TransportError("invalid endpoint: " + url);
}

std::string HttpBackend::post(const std::string& path, const std::string& body) {
  httplib::Client client(host_, port_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  auto res = client.Post(path, body, kJson);
  if (!res) {
    throw TransportError("POST " + path + " to " + host_ + ":" + std::to_string(port_) +
                         " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ProtocolError("POST " + path + " returned HTTP " + std::to_string(res->status));
  }
  return res->body;
}

Prediction HttpBackend::classify(const std::string& code, const std::optional<std::string>& code_pair) {
  return wire::decode_prediction(post("/v1/classify", wire::encode_classify_request({code, code_pair})));
}

RawSubstitutes HttpBackend::substitutes(const SubstitutesRequest& request) {
  return wire::decode_substitutes_response(
      post("/v1/substitutes", wire::encode_substitutes_request(request)));
}

HealthInfo HttpBackend::health() {
  httplib::Client client(host_, port_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  auto res = client.Get("/v1/health");
  if (!res) {
    throw TransportError("GET /v1/health on " + host_ + ":" + std::to_string(port_) +
                         " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ProtocolError("GET /v1/health returned HTTP " + std::to_string(res->status));
  }
  return wire::decode_health(res->body);
}

struct WireServer::Impl {
  explicit Impl(Backend& b) : backend(b) {}
  Backend& backend;
  httplib::Server server;
  std::thread thread;
};

WireServer::WireServer(Backend& backend) : impl_(std::make_unique<Impl>(backend)) {
  auto& server = impl_->server;
  Backend& b = impl_->backend;
  auto guarded = [](auto&& handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      try {
        res.set_content(handler(req.body), kJson);
      } catch (const ProtocolError& e) {
        res.status = 400;
        res.set_content(error_body(e.what()), kJson);
      } catch (const std::exception& e) {
        res.status = 503;
        res.set_content(error_body(e.what()), kJson);
      }
    };
  };
  server.Post("/v1/classify", guarded([&b](const std::string& body) {
                auto req = wire::decode_classify_request(body);
                return wire::encode_prediction(b.classify(req.code, req.code_pair));
              }));
  server.Post("/v1/substitutes", guarded([&b](const std::string& body) {
                auto req = wire::decode_substitutes_request(body);
                std::vector<std::string> order;
                for (const auto& v : req.variables) order.push_back(v.name);
                return wire::encode_substitutes_response(b.substitutes(req), order);
              }));
  server.Get("/v1/health", [&b](const httplib::Request&, httplib::Response& res) {
    try {
      res.set_content(wire::encode_health(b.health()), kJson);
    } catch (const std::exception& e) {
      res.status = 503;
      res.set_content(error_body(e.what()), kJson);
    }
  });
}

WireServer::~WireServer() { stop(); }

int WireServer::bind(const std::string& host, int port) {
  if (port == 0) {
    int chosen = impl_->server.bind_to_any_port(host);
    if (chosen < 0) throw TransportError("could not bind " + host);
    return chosen;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw TransportError("could not bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void WireServer::serve() { impl_->server.listen_after_bind(); }

int WireServer::start(const std::string& host, int port) {
  int bound = bind(host, port);
  impl_->thread = std::thread([this] { serve(); });
  impl_->server.wait_until_ready();
  return bound;
}

void WireServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace varattack::gateway
