#include "subsse/transport.hpp"

#include <httplib.h>

namespace subsse {

namespace {

std::pair<std::string, std::map<std::string, std::string>> split_target(const std::string& target) {
  const auto q = target.find('?');
  if (q == std::string::npos) return {target, {}};
  httplib::Params parsed;
  httplib::detail::parse_query_text(target.substr(q + 1), parsed);
  std::map<std::string, std::string> params(parsed.begin(), parsed.end());
  return {target.substr(0, q), std::move(params)};
}

}  // namespace

TransportResponse InProcessTransport::post(const std::string& target, const std::string& body) {
  auto [path, params] = split_target(target);
  const ApiResponse r = api_.handle("POST", path, params, body);
  return {r.status, r.body};
}

TransportResponse InProcessTransport::get(const std::string& target) {
  auto [path, params] = split_target(target);
  const ApiResponse r = api_.handle("GET", path, params, {});
  return {r.status, r.body};
}

struct HttpTransport::Impl {
  std::string base_url;
  std::mutex mutex;
  httplib::Client client;

  explicit Impl(std::string url) : base_url(url), client(url) {
    client.set_connection_timeout(5);
    client.set_read_timeout(300);
    client.set_write_timeout(300);
  }
};

HttpTransport::HttpTransport(std::string base_url) : impl_(std::make_unique<Impl>(std::move(base_url))) {}

HttpTransport::~HttpTransport() = default;

TransportResponse HttpTransport::post(const std::string& target, const std::string& body) {
  std::lock_guard lock(impl_->mutex);
  auto res = impl_->client.Post(target, body, "application/json");
  if (!res) {
    throw Error(ErrorCode::ServerUnreachable, impl_->base_url + ": " + httplib::to_string(res.error()));
  }
  return {res->status, res->body};
}

TransportResponse HttpTransport::get(const std::string& target) {
  std::lock_guard lock(impl_->mutex);
  auto res = impl_->client.Get(target);
  if (!res) {
    throw Error(ErrorCode::ServerUnreachable, impl_->base_url + ": " + httplib::to_string(res.error()));
  }
  return {res->status, res->body};
}

TransportResponse RecordingTransport::post(const std::string& target, const std::string& body) {
  {
    std::lock_guard lock(mutex_);
    messages_.push_back({"POST", target, body});
  }
  return inner_->post(target, body);
}

TransportResponse RecordingTransport::get(const std::string& target) {
  {
    std::lock_guard lock(mutex_);
    messages_.push_back({"GET", target, {}});
  }
  return inner_->get(target);
}

std::vector<RecordingTransport::Message> RecordingTransport::messages() const {
  std::lock_guard lock(mutex_);
  return messages_;
}

void RecordingTransport::clear() {
  std::lock_guard lock(mutex_);
  messages_.clear();
}

}  // namespace subsse
