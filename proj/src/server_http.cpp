#include "http_socket.hpp"

#include "subsse/server.hpp"

namespace subsse {

struct HttpServer::Impl {
  Impl(ServerApi& a, std::string h, int p) : api(a), host(std::move(h)), port(p) {}

  ServerApi& api;
  std::string host;
  int port;
  httplib::Server server;
  int bound_port = -1;
};

HttpServer::HttpServer(ServerApi& api, std::string host, int port)
    : impl_(std::make_unique<Impl>(api, std::move(host), port)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> params;
    for (const auto& [k, v] : req.params) params.emplace(k, v);
    const ApiResponse r = impl_->api.handle(req.method, req.path, params, req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  impl_->server.Get(R"(/v1/.*)", handler);
  impl_->server.Post(R"(/v1/.*)", handler);
  impl_->server.set_payload_max_length(std::size_t{1} << 31);
  use_exclusive_port(impl_->server);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  if (impl_->port == 0) {
    impl_->bound_port = impl_->server.bind_to_any_port(impl_->host);
  } else if (impl_->server.bind_to_port(impl_->host, impl_->port)) {
    impl_->bound_port = impl_->port;
  }
  if (impl_->bound_port <= 0) {
    throw Error(ErrorCode::PortInUse, "cannot bind " + impl_->host + ":" + std::to_string(impl_->port));
  }
  return impl_->bound_port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace subsse
