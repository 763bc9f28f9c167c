#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "subsse/server.hpp"

namespace {

subsse::HttpServer* g_http = nullptr;

void on_signal(int) {
  if (g_http != nullptr) g_http->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cloud server for encrypted substring-of-keyword search"};
  std::string listen = "127.0.0.1:8080";
  std::string data_dir;
  bool trace = false;
  app.add_option("--listen", listen, "host:port to listen on")->envname("SUBSSE_LISTEN");
  app.add_option("--data-dir", data_dir, "directory for persisted indexes (empty: memory only)")
      ->envname("SUBSSE_DATA_DIR");
  app.add_flag("--trace", trace, "record leakage traces and expose /v1/debug/leakage")->envname("SUBSSE_TRACE");
  CLI11_PARSE(app, argc, argv);

  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "--listen must be host:port\n";
    return 1;
  }
  const std::string host = listen.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(listen.substr(colon + 1));
  } catch (const std::exception&) {
    std::cerr << "bad port in --listen\n";
    return 1;
  }

  try {
    subsse::CloudServer server(subsse::ServerOptions{data_dir, trace});
    subsse::ServerApi api(server);
    subsse::HttpServer http(api, host, port);
    const int bound = http.bind();
    g_http = &http;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "listening on " << host << ':' << bound << (trace ? " (tracing on)" : "") << std::endl;
    http.listen();
    g_http = nullptr;
  } catch (const subsse::Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  return 0;
}
