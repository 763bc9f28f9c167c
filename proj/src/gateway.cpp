#include "http_socket.hpp"

#include "subsse/client.hpp"

namespace subsse {

namespace {

ApiResponse gateway_error(int status, const Error& e) {
  return ApiResponse{status, nlohmann::json{{"error", to_string(e.code())}, {"message", e.what()}}.dump(),
                     "application/json"};
}

int gateway_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::SeparatorInQuery:
    case ErrorCode::SeparatorInKeyword:
    case ErrorCode::EmptyQuery:
    case ErrorCode::EmptyKeyword:
    case ErrorCode::ValidationError: return 400;
    case ErrorCode::UnknownFileId: return 404;
    case ErrorCode::ServerUnreachable: return 502;
    default: return 500;
  }
}

std::string param(const std::map<std::string, std::string>& params, const std::string& name) {
  const auto it = params.find(name);
  return it == params.end() ? std::string() : it->second;
}

}  // namespace

ApiResponse Gateway::handle(std::string_view method, std::string_view path,
                            const std::map<std::string, std::string>& params) {
  if (method != "GET") return ApiResponse{405, R"({"error":"MethodNotAllowed"})", "application/json"};
  std::lock_guard lock(mutex_);
  try {
    if (path == "/suggest") {
      return ApiResponse{200, nlohmann::json{{"suggestions", client_.suggest_keywords(param(params, "s"))}}.dump(),
                         "application/json"};
    }
    if (path == "/files") {
      return ApiResponse{200, nlohmann::json{{"ids", client_.files_for(param(params, "w"))}}.dump(), "application/json"};
    }
    if (path.starts_with("/file/")) {
      const Bytes data = client_.fetch_and_decrypt(std::string(path.substr(6)));
      return ApiResponse{200, std::string(data.begin(), data.end()), "application/octet-stream"};
    }
    return ApiResponse{404, R"({"error":"NotFound"})", "application/json"};
  } catch (const Error& e) {
    return gateway_error(gateway_status(e.code()), e);
  }
}

struct GatewayServer::Impl {
  Impl(Gateway& g, int p) : gateway(g), port(p) {}

  Gateway& gateway;
  int port;
  httplib::Server server;
};

GatewayServer::GatewayServer(Gateway& gateway, int port) : impl_(std::make_unique<Impl>(gateway, port)) {
  impl_->server.Get(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> params;
    for (const auto& [k, v] : req.params) params.emplace(k, v);
    const ApiResponse r = impl_->gateway.handle("GET", req.path, params);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  });
  use_exclusive_port(impl_->server);
}

GatewayServer::~GatewayServer() { stop(); }

int GatewayServer::bind() {
  const std::string host = "127.0.0.1";
  int bound = -1;
  if (impl_->port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, impl_->port)) {
    bound = impl_->port;
  }
  if (bound <= 0) throw Error(ErrorCode::PortInUse, "cannot bind 127.0.0.1:" + std::to_string(impl_->port));
  return bound;
}

void GatewayServer::listen() { impl_->server.listen_after_bind(); }

void GatewayServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

void GatewayServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace subsse
