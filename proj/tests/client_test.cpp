#include "subsse/client.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "subsse/corpus.hpp"
#include "subsse/server.hpp"
#include "test_util.hpp"

namespace subsse {
namespace {

namespace fs = std::filesystem;
using ::subsse::testing::containing;
using ::subsse::testing::leaks;
using ::subsse::testing::random_string;

const std::vector<std::string> kWorked = {"bbab", "bba", "aba"};

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Usage;
}

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("subsse_client_" + hex_encode(random_bytes(6)));
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
};

Bytes bytes_of(const std::string& s) { return Bytes(s.begin(), s.end()); }

class ClientTest : public ::testing::Test {
 protected:
  CloudServer server{ServerOptions{{}, true}};
  ServerApi api{server};
  std::shared_ptr<RecordingTransport> wire = std::make_shared<RecordingTransport>(std::make_shared<InProcessTransport>(api));

  UserClient make_client(const fs::path& home = {}) {
    ClientState s;
    s.keys = keygen(128, 1ULL << 20);
    s.server_url = "http://unused";
    return UserClient(std::move(s), wire, home);
  }

  static std::vector<PlainFile> files() {
    return {{"f1", bytes_of("bbab and aba")}, {"f2", bytes_of("only bba here")}};
  }
  static std::map<std::string, std::vector<std::string>> postings() {
    return {{"bbab", {"f1"}}, {"aba", {"f1"}}, {"bba", {"f2"}}};
  }
};

TEST_F(ClientTest, WorkedExampleEndToEnd) {
  auto client = make_client();
  const auto s = client.outsource(kWorked, postings(), files());
  EXPECT_EQ(s.iw_nodes, 11u);
  EXPECT_EQ(client.suggest_keywords("ab"), (std::vector<std::string>{"aba", "bbab"}));
  EXPECT_EQ(client.suggest_keywords("bb"), (std::vector<std::string>{"bba", "bbab"}));
  EXPECT_TRUE(client.suggest_keywords("c").empty());
  EXPECT_EQ(client.files_for("bbab"), (std::vector<std::string>{"f1"}));
  EXPECT_EQ(client.fetch_and_decrypt("f2"), bytes_of("only bba here"));
  EXPECT_EQ(code_of([&] { client.fetch_and_decrypt("f3"); }), ErrorCode::UnknownFileId);
}

TEST_F(ClientTest, SuggestionCountsEveryCiphertext) {
  auto client = make_client();
  client.outsource(kWorked, {}, {});
  // "aba" comes back from an intermediate node and from the final subtree.
  const auto s = client.suggest("ab");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].keyword, "aba");
  EXPECT_GE(s[0].source_count, 1u);
  EXPECT_EQ(s[1].keyword, "bbab");
}

TEST_F(ClientTest, QueryValidation) {
  auto client = make_client();
  client.outsource(kWorked, {}, {});
  EXPECT_EQ(code_of([&] { client.suggest(std::string(1, kSeparator)); }), ErrorCode::SeparatorInQuery);
  EXPECT_EQ(code_of([&] { client.suggest(""); }), ErrorCode::EmptyQuery);
  EXPECT_EQ(code_of([&] { client.insert_keyword(std::string("a") + kSeparator); }), ErrorCode::SeparatorInKeyword);
}

TEST_F(ClientTest, OutsourceValidatesInput) {
  auto client = make_client();
  EXPECT_EQ(code_of([&] { client.outsource({"a", "a"}, {}, {}); }), ErrorCode::DuplicateKeyword);
  EXPECT_EQ(code_of([&] { client.outsource({"a"}, {{"b", {}}}, {}); }), ErrorCode::ValidationError);
  EXPECT_EQ(code_of([&] { client.outsource({"a"}, {{"a", {"nofile"}}}, {}); }), ErrorCode::ValidationError);
  EXPECT_FALSE(server.initialized());
}

TEST_F(ClientTest, QueryTokensArePrefixClosed) {
  auto client = make_client();
  const auto a = client.make_query_token("abc");
  const auto b = client.make_query_token("abcd");
  ASSERT_EQ(a.labels.size(), 3u);
  ASSERT_EQ(b.labels.size(), 4u);
  EXPECT_TRUE(std::equal(a.labels.begin(), a.labels.end(), b.labels.begin()));
  EXPECT_EQ(client.make_insert_request("ba").label_count(), 7u);
}

TEST_F(ClientTest, InsertThenSuggest) {
  auto client = make_client();
  client.outsource(kWorked, {}, {});
  EXPECT_EQ(client.insert_keyword("ba"), 2u);
  EXPECT_EQ(client.suggest_keywords("ba"), (std::vector<std::string>{"aba", "ba", "bba", "bbab"}));
  EXPECT_EQ(client.stats().iw_nodes, 13u);
}

TEST_F(ClientTest, DeleteSuppressesKeyword) {
  auto client = make_client();
  client.outsource(kWorked, {}, {});
  EXPECT_EQ(client.delete_keyword("bba"), 3u);
  EXPECT_EQ(client.suggest_keywords("bb"), (std::vector<std::string>{"bbab"}));
  EXPECT_EQ(client.suggest_keywords("ab"), (std::vector<std::string>{"aba", "bbab"}));
  EXPECT_EQ(code_of([&] { client.insert_keyword("bba"); }), ErrorCode::RevokedKeyword);
  EXPECT_EQ(client.state().revoked_keywords, (std::set<std::string>{"bba"}));
  // Outsourcing afresh clears revocations.
  client.outsource(kWorked, {}, {});
  EXPECT_TRUE(client.state().revoked_keywords.empty());
  EXPECT_EQ(client.suggest_keywords("bb"), (std::vector<std::string>{"bba", "bbab"}));
}

TEST_F(ClientTest, PostingsAddAndRemove) {
  auto client = make_client();
  client.outsource(kWorked, postings(), files());
  client.add_posting("bbab", "f2");
  EXPECT_EQ(client.files_for("bbab"), (std::vector<std::string>{"f1", "f2"}));
  EXPECT_EQ(client.state().posting_counters.at("bbab"), 2u);
  client.remove_posting("bbab", "f1");
  EXPECT_EQ(client.files_for("bbab"), (std::vector<std::string>{"f2"}));
  client.add_posting("bbab", "f1");
  EXPECT_EQ(client.files_for("bbab"), (std::vector<std::string>{"f2", "f1"}));
  EXPECT_EQ(code_of([&] { client.remove_posting("aba", "f2"); }), ErrorCode::ValidationError);
  client.add_posting("ba", "f1");
  EXPECT_EQ(client.files_for("ba"), (std::vector<std::string>{"f1"}));
}

TEST_F(ClientTest, StateSurvivesReopen) {
  TempDir home;
  {
    auto client = make_client(home.path);
    client.outsource(kWorked, postings(), files());
    client.delete_keyword("aba");
    client.add_posting("bba", "f1");
  }
  EXPECT_TRUE(fs::exists(home.path / "keys.bin"));
  EXPECT_TRUE(fs::exists(home.path / "state.json"));
  auto reopened = UserClient::open(home.path, wire);
  EXPECT_EQ(reopened.state().revoked_keywords, (std::set<std::string>{"aba"}));
  EXPECT_EQ(reopened.state().posting_counters.at("bba"), 2u);
  EXPECT_EQ(reopened.suggest_keywords("ab"), (std::vector<std::string>{"bbab"}));
  EXPECT_EQ(reopened.files_for("bba"), (std::vector<std::string>{"f2", "f1"}));
}

TEST_F(ClientTest, StateJsonRoundTrip) {
  ClientState s;
  s.keys = keygen(128, 10);
  s.server_url = "http://x:1";
  s.posting_counters = {{"a", 3}};
  s.revoked_keywords = {"b"};
  s.file_names = {{"id1", "notes.txt"}};
  const auto back = state_from_json(state_to_json(s), s.keys);
  EXPECT_EQ(back.server_url, s.server_url);
  EXPECT_EQ(back.posting_counters, s.posting_counters);
  EXPECT_EQ(back.revoked_keywords, s.revoked_keywords);
  EXPECT_EQ(back.file_names, s.file_names);
  EXPECT_EQ(code_of([&] { state_from_json(nlohmann::json{{"version", 2}}, s.keys); }), ErrorCode::ValidationError);
}

TEST_F(ClientTest, NothingPlaintextOnTheWire) {
  std::mt19937_64 rng(77);
  std::vector<std::string> secrets;
  for (int i = 0; i < 6; ++i) secrets.push_back(random_string(rng, 24, "abc"));
  auto client = make_client();
  std::vector<std::string> dict = {secrets[0], secrets[1], "abc"};
  client.outsource(dict, {{secrets[0], {"f1"}}}, {{"f1", bytes_of("body " + secrets[2])}});
  client.suggest(secrets[0].substr(0, 6));
  client.suggest(secrets[3]);
  client.insert_keyword(secrets[4]);
  client.delete_keyword(secrets[1]);
  client.add_posting(secrets[5], "f1");
  client.files_for(secrets[0]);
  for (const auto& m : wire->messages()) {
    for (const auto& s : secrets) {
      ASSERT_FALSE(leaks(m.target + m.body, s)) << m.method << " " << m.target << " carries a plaintext keyword";
    }
  }
}

TEST_F(ClientTest, RandomCampaignMatchesBruteForce) {
  std::mt19937_64 rng(88);
  std::uniform_int_distribution<std::size_t> len(1, 8);
  std::uniform_int_distribution<std::size_t> qlen(1, 5);
  for (int trial = 0; trial < 20; ++trial) {
    auto client = make_client();
    auto dict = testing::random_dictionary(rng, 80, 1, 8, "abc");
    client.outsource(dict, {}, {});
    std::set<std::string> live(dict.begin(), dict.end());
    for (int k = 0; k < 8; ++k) {
      const std::string w = random_string(rng, len(rng), "abc");
      if (live.count(w) || client.state().revoked_keywords.count(w)) continue;
      client.insert_keyword(w);
      live.insert(w);
    }
    for (int k = 0; k < 4 && !live.empty(); ++k) {
      auto it = live.begin();
      std::advance(it, static_cast<std::ptrdiff_t>(rng() % live.size()));
      client.delete_keyword(*it);
      live.erase(it);
    }
    const std::vector<std::string> live_vec(live.begin(), live.end());
    for (int q = 0; q < 20; ++q) {
      const std::string s = random_string(rng, qlen(rng), "abc");
      const auto expected = containing(live_vec, s);
      ASSERT_EQ(client.suggest_keywords(s), std::vector<std::string>(expected.begin(), expected.end())) << s;
    }
  }
}

TEST(CorpusTest, DictionaryParsing) {
  EXPECT_EQ(parse_dictionary("a\r\nbb\n\nccc"), (std::vector<std::string>{"a", "bb", "ccc"}));
  EXPECT_EQ(code_of([] { parse_dictionary("a\na\n"); }), ErrorCode::DuplicateKeyword);
  EXPECT_EQ(code_of([] { parse_dictionary(std::string("a") + kSeparator + "\n"); }), ErrorCode::SeparatorInKeyword);
}

TEST(CorpusTest, KeywordsInContent) {
  const std::vector<std::string> dict = {"apple", "pie", "tart"};
  EXPECT_EQ(keywords_in("Apple pie, (pie) tart.applepie", dict), (std::vector<std::string>{"pie", "tart"}));
}

TEST(CorpusTest, ScanFilesUsesOpaqueIds) {
  TempDir dir;
  std::ofstream(dir.path / "notes.txt") << "bbab then aba";
  std::ofstream(dir.path / "other.txt") << "nothing";
  const auto keys = keygen(128, 10);
  const auto c = scan_files(dir.path, kWorked, keys);
  ASSERT_EQ(c.files.size(), 2u);
  for (const auto& f : c.files) {
    EXPECT_EQ(f.id.size(), 32u);
    EXPECT_EQ(f.id.find("notes"), std::string::npos);
  }
  ASSERT_EQ(c.postings.at("bbab").size(), 1u);
  EXPECT_EQ(c.names.at(c.postings.at("bbab")[0]), "notes.txt");
  EXPECT_EQ(c.postings.count("bba"), 0u);
}

class GatewayTest : public ClientTest {};

TEST_F(GatewayTest, Routes) {
  auto client = make_client();
  client.outsource(kWorked, postings(), files());
  Gateway gw(client);
  auto r = gw.handle("GET", "/suggest", {{"s", "ab"}});
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(nlohmann::json::parse(r.body).at("suggestions"), (nlohmann::json{"aba", "bbab"}));
  r = gw.handle("GET", "/files", {{"w", "bba"}});
  EXPECT_EQ(nlohmann::json::parse(r.body).at("ids"), (nlohmann::json{"f2"}));
  r = gw.handle("GET", "/file/f1", {});
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body, "bbab and aba");
  EXPECT_EQ(gw.handle("GET", "/file/zzz", {}).status, 404);
  EXPECT_EQ(gw.handle("GET", "/suggest", {{"s", std::string(1, kSeparator)}}).status, 400);
  EXPECT_EQ(gw.handle("GET", "/suggest", {}).status, 400);
  EXPECT_EQ(gw.handle("GET", "/nowhere", {}).status, 404);
  EXPECT_EQ(gw.handle("POST", "/suggest", {}).status, 405);
}

TEST_F(GatewayTest, OverHttp) {
  CloudServer backend;
  ServerApi backend_api(backend);
  HttpServer backend_http(backend_api, "127.0.0.1", 0);
  const int backend_port = backend_http.bind();
  std::thread backend_thread([&] { backend_http.listen(); });
  backend_http.wait_until_ready();

  ClientState s;
  s.keys = keygen(128, 1000);
  s.server_url = "http://127.0.0.1:" + std::to_string(backend_port);
  UserClient client(s, std::make_shared<HttpTransport>(s.server_url));
  client.outsource(kWorked, postings(), files());

  Gateway gw(client);
  GatewayServer gw_http(gw, 0);
  const int port = gw_http.bind();
  std::thread gw_thread([&] { gw_http.listen(); });
  gw_http.wait_until_ready();

  HttpTransport browser("http://127.0.0.1:" + std::to_string(port));
  auto r = browser.get("/suggest?s=ab");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(nlohmann::json::parse(r.body).at("suggestions"), (nlohmann::json{"aba", "bbab"}));
  EXPECT_EQ(browser.get("/suggest?s=%23").status, kSeparator == '#' ? 400 : 200);
  EXPECT_EQ(browser.get("/file/f2").body, "only bba here");

  backend_http.stop();
  backend_thread.join();
  EXPECT_EQ(browser.get("/suggest?s=ab").status, 502);

  gw_http.stop();
  gw_thread.join();
}

}  // namespace
}  // namespace subsse
