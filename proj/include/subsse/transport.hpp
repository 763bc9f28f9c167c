#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "subsse/server.hpp"

namespace subsse {

struct TransportResponse {
  int status = 0;
  std::string body;
};

/// Client-to-server channel. `target` is path plus optional query string.
class Transport {
 public:
  virtual ~Transport() = default;
  /// Throws ServerUnreachable when no response arrives.
  virtual TransportResponse post(const std::string& target, const std::string& body) = 0;
  virtual TransportResponse get(const std::string& target) = 0;
};

/// Calls a ServerApi in the same process; request and response bodies are
/// the same bytes the HTTP transport would carry.
class InProcessTransport final : public Transport {
 public:
  explicit InProcessTransport(ServerApi& api) : api_(api) {}

  TransportResponse post(const std::string& target, const std::string& body) override;
  TransportResponse get(const std::string& target) override;

 private:
  ServerApi& api_;
};

class HttpTransport final : public Transport {
 public:
  /// `base_url` like "http://127.0.0.1:8080".
  explicit HttpTransport(std::string base_url);
  ~HttpTransport() override;

  TransportResponse post(const std::string& target, const std::string& body) override;
  TransportResponse get(const std::string& target) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Decorator keeping a copy of every outbound message.
class RecordingTransport final : public Transport {
 public:
  struct Message {
    std::string method;
    std::string target;
    std::string body;
  };

  explicit RecordingTransport(std::shared_ptr<Transport> inner) : inner_(std::move(inner)) {}

  TransportResponse post(const std::string& target, const std::string& body) override;
  TransportResponse get(const std::string& target) override;

  std::vector<Message> messages() const;
  void clear();

 private:
  std::shared_ptr<Transport> inner_;
  mutable std::mutex mutex_;
  std::vector<Message> messages_;
};

}  // namespace subsse
