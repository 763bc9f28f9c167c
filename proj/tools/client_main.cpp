#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "subsse/client.hpp"
#include "subsse/corpus.hpp"

namespace {

// 0 ok, 1 usage, 2 validation, 3 network.
int exit_code(const subsse::Error& e) {
  switch (e.code()) {
    case subsse::ErrorCode::ServerUnreachable: return 3;
    case subsse::ErrorCode::Usage: return 1;
    default: return 2;
  }
}

subsse::GatewayServer* g_gateway = nullptr;

void on_signal(int) {
  if (g_gateway != nullptr) g_gateway->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-user client for encrypted substring-of-keyword search"};
  app.require_subcommand(1);
  std::string home = ".subsse";
  if (const char* env = std::getenv("SUBSSE_HOME")) home = env;
  app.add_option("--home", home, "client state directory (keys.bin, state.json)");

  auto* init = app.add_subcommand("init", "generate keys and bind to a server");
  std::string server_url;
  unsigned lambda = 128;
  init->add_option("--server", server_url, "server base URL, e.g. http://127.0.0.1:8080")->required();
  init->add_option("--lambda", lambda, "security parameter in bits (128 or 256)");

  auto* outsource = app.add_subcommand("outsource", "encrypt and upload a dictionary and files");
  std::string dict_path;
  std::string files_dir;
  outsource->add_option("--dict", dict_path, "dictionary file, one keyword per line")->required();
  outsource->add_option("--files", files_dir, "directory of files to index and upload");

  std::string substring;
  auto* suggest = app.add_subcommand("suggest", "keywords containing a substring");
  suggest->add_option("SUBSTR", substring)->required();

  std::string keyword;
  auto* files = app.add_subcommand("files", "file ids for a keyword");
  files->add_option("KEYWORD", keyword)->required();

  std::string file_id;
  std::string out_path;
  auto* get = app.add_subcommand("get", "download and decrypt a file");
  get->add_option("FILEID", file_id)->required();
  get->add_option("--out", out_path, "output path")->required();

  auto* insert = app.add_subcommand("insert", "add a keyword to the index");
  insert->add_option("KEYWORD", keyword)->required();
  auto* del = app.add_subcommand("delete", "revoke a keyword");
  del->add_option("KEYWORD", keyword)->required();

  auto* link = app.add_subcommand("link", "add a keyword -> file posting");
  link->add_option("KEYWORD", keyword)->required();
  link->add_option("FILEID", file_id)->required();
  auto* unlink = app.add_subcommand("unlink", "remove a keyword -> file posting");
  unlink->add_option("KEYWORD", keyword)->required();
  unlink->add_option("FILEID", file_id)->required();

  auto* stats = app.add_subcommand("stats", "server index sizes");

  int port = 8081;
  auto* gateway = app.add_subcommand("gateway", "serve the plaintext UI bridge on 127.0.0.1");
  gateway->add_option("--port", port, "listen port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*init) {
      subsse::UserClient::init(home, server_url, lambda);
      std::cout << "initialized " << home << '\n';
      return 0;
    }
    auto client = subsse::UserClient::open(home);
    if (*outsource) {
      const auto dict = subsse::read_dictionary(dict_path);
      subsse::Corpus corpus;
      if (!files_dir.empty()) corpus = subsse::scan_files(files_dir, dict, client.state().keys);
      const auto s = client.outsource(dict, corpus.postings, corpus.files);
      client.remember_file_names(corpus.names);
      std::cout << "iw_nodes=" << s.iw_nodes << " iwr_nodes=" << s.iwr_nodes << " if_entries=" << s.if_entries
                << " n=" << s.n << '\n';
    } else if (*suggest) {
      for (const auto& w : client.suggest_keywords(substring)) std::cout << w << '\n';
    } else if (*files) {
      const auto& names = client.state().file_names;
      for (const auto& id : client.files_for(keyword)) {
        const auto it = names.find(id);
        std::cout << id;
        if (it != names.end()) std::cout << '\t' << it->second;
        std::cout << '\n';
      }
    } else if (*get) {
      const subsse::Bytes data = client.fetch_and_decrypt(file_id);
      std::ofstream out(out_path, std::ios::binary);
      out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
      if (!out) throw subsse::Error(subsse::ErrorCode::StorageError, "cannot write " + out_path);
    } else if (*insert) {
      const std::size_t added = client.insert_keyword(keyword);
      std::cout << "nodes_added=" << added << '\n';
    } else if (*del) {
      const std::size_t added = client.delete_keyword(keyword);
      std::cout << "nodes_added=" << added << '\n';
    } else if (*link) {
      client.add_posting(keyword, file_id);
    } else if (*unlink) {
      client.remove_posting(keyword, file_id);
    } else if (*stats) {
      const auto s = client.stats();
      std::cout << "iw_nodes=" << s.iw_nodes << " iwr_nodes=" << s.iwr_nodes << " if_entries=" << s.if_entries
                << " n=" << s.n << '\n';
    } else if (*gateway) {
      subsse::Gateway gw(client);
      subsse::GatewayServer http(gw, port);
      const int bound = http.bind();
      g_gateway = &http;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "gateway on http://127.0.0.1:" << bound << std::endl;
      http.listen();
      g_gateway = nullptr;
    }
  } catch (const subsse::Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code(e);
  }
  return 0;
}
