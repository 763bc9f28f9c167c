#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "subsse/crypto.hpp"
#include "subsse/secure_index.hpp"
#include "subsse/transport.hpp"
#include "subsse/wire.hpp"

namespace subsse {

/// Everything the data user keeps locally. Losing it loses the ability
/// to query.
struct ClientState {
  KeyBundle keys;
  std::string server_url;
  /// Postings issued per keyword; the next posting gets counter + 1.
  std::map<std::string, std::uint64_t> posting_counters;
  /// Keywords sent to the revocation index; they stay suppressed for good.
  std::set<std::string> revoked_keywords;
  /// Display names of outsourced files, by opaque id.
  std::map<std::string, std::string> file_names;
};

struct Suggestion {
  std::string keyword;
  /// How many returned ciphertexts decrypted to this keyword.
  std::size_t source_count = 0;

  friend bool operator==(const Suggestion&, const Suggestion&) = default;
};

struct PlainFile {
  std::string id;
  Bytes content;
};

class UserClient {
 public:
  /// `home` empty means the state is never written to disk.
  UserClient(ClientState state, std::shared_ptr<Transport> transport, std::filesystem::path home = {});

  /// Fresh keys and empty state written under `home` (keys.bin, state.json).
  static UserClient init(const std::filesystem::path& home, std::string server_url, unsigned lambda = 128,
                         std::uint64_t expected_index_size = std::uint64_t{1} << 24);
  /// Loads state from `home`. With no transport given, talks HTTP to the
  /// stored server URL.
  static UserClient open(const std::filesystem::path& home, std::shared_ptr<Transport> transport = nullptr);

  SubstringQueryToken make_query_token(std::string_view substring) const;
  InsertRequest make_insert_request(std::string_view keyword) const;

  /// Builds and encrypts I_W, an empty revocation index and I_F, encrypts
  /// the files, and replaces the server state. Resets local counters and
  /// the revoked set.
  wire::Stats outsource(const std::vector<std::string>& dictionary,
                        const std::map<std::string, std::vector<std::string>>& postings,
                        const std::vector<PlainFile>& files);

  /// Keywords containing `substring`, minus revoked ones, sorted.
  std::vector<Suggestion> suggest(std::string_view substring);
  std::vector<std::string> suggest_keywords(std::string_view substring);

  std::vector<std::string> files_for(std::string_view keyword);
  Bytes fetch_and_decrypt(const std::string& file_id);

  /// Throws RevokedKeyword for a keyword deleted earlier.
  std::size_t insert_keyword(std::string_view keyword);
  std::size_t delete_keyword(std::string_view keyword);

  /// Appends a posting for an already outsourced file id.
  void add_posting(std::string_view keyword, const std::string& file_id);
  /// Throws ValidationError when the posting does not exist.
  void remove_posting(std::string_view keyword, const std::string& file_id);

  wire::Stats stats();

  /// Replaces the local id -> file name table.
  void remember_file_names(std::map<std::string, std::string> names);

  const ClientState& state() const noexcept { return state_; }
  void save() const;

 private:
  nlohmann::json call(const std::string& method, const std::string& target, const std::string& body = {});

  ClientState state_;
  std::shared_ptr<Transport> transport_;
  std::filesystem::path home_;
};

nlohmann::json state_to_json(const ClientState& state);
/// Keys are not part of the JSON; they live in the key file.
ClientState state_from_json(const nlohmann::json& j, KeyBundle keys);

/// Loopback-only plaintext JSON bridge for the UI:
///   GET /suggest?s=...  -> {"suggestions": [...]}
///   GET /files?w=...    -> {"ids": [...]}
///   GET /file/{id}      -> decrypted bytes
class Gateway {
 public:
  explicit Gateway(UserClient& client) : client_(client) {}

  ApiResponse handle(std::string_view method, std::string_view path, const std::map<std::string, std::string>& params);

 private:
  UserClient& client_;
  std::mutex mutex_;
};

/// HTTP binding for Gateway on 127.0.0.1.
class GatewayServer {
 public:
  GatewayServer(Gateway& gateway, int port);
  ~GatewayServer();

  /// Returns the bound port. Throws PortInUse.
  int bind();
  void listen();
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace subsse
