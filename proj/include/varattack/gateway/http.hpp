#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "varattack/gateway/backend.hpp"

namespace varattack::gateway {

/// Client for a remote model server speaking the /v1 JSON protocol.
/// Connection failures and timeouts raise TransportError; non-200 statuses
/// and malformed bodies raise ProtocolError.
class HttpBackend : public Backend {
 public:
  /// `url` is "http://host:port" (a trailing slash or path is ignored).
  explicit HttpBackend(const std::string& url,
                       std::chrono::milliseconds timeout = std::chrono::seconds(60));

  Prediction classify(const std::string& code, const std::optional<std::string>& code_pair) override;
  RawSubstitutes substitutes(const SubstitutesRequest& request) override;
  HealthInfo health() override;

  const std::string& host() const { return host_; }
  int port() const { return port_; }

 private:
  std::string post(const std::string& path, const std::string& body);

  std::string host_;
  int port_ = 80;
  std::chrono::milliseconds timeout_;
};

/// Serves any Backend over the same protocol. Used to expose the surrogate
/// remotely and as the far end in protocol tests.
class WireServer {
 public:
  explicit WireServer(Backend& backend);
  ~WireServer();
  WireServer(const WireServer&) = delete;
  WireServer& operator=(const WireServer&) = delete;

  /// Binds to host:port (port 0 picks a free port) and returns the port.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  void serve();
  /// bind() + serve() on a background thread.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace varattack::gateway
