#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "subsse/file_index.hpp"
#include "subsse/secure_index.hpp"
#include "subsse/wire.hpp"

// The honest-but-curious cloud server. It stores only labels, ciphertexts
// and opaque file ids, and never sees a key.
namespace subsse {

enum class TraceKind { QueryPath, InsertionPath, DeletionPath, Access };

std::string to_string(TraceKind kind);

/// Node identifiers an operation revealed to the server. `index` is "iw"
/// or "iwr".
struct LeakageTrace {
  std::uint64_t seq = 0;
  TraceKind kind = TraceKind::QueryPath;
  std::string index;
  std::vector<NodeId> node_ids;

  friend bool operator==(const LeakageTrace&, const LeakageTrace&) = default;
};

nlohmann::json to_json(const LeakageTrace& trace);
LeakageTrace trace_from_json(const nlohmann::json& j);

/// Everything the client ships at outsourcing time. `file_refs` lists the
/// file ids the encrypted postings point at, so the server can check them
/// against the uploaded blobs without reading the postings.
struct OutsourcePayload {
  SecureIndex iw;
  SecureIndex iwr;
  KeywordFileIndex file_index;
  std::map<std::string, Bytes> blobs;
  std::set<std::string> file_refs;

  nlohmann::json to_json() const;
  /// Throws ValidationError.
  static OutsourcePayload from_json(const nlohmann::json& j);
};

/// Throws ValidationError unless `id` is 1-128 chars of [A-Za-z0-9._-]
/// and does not start with '.'.
void validate_file_id(std::string_view id);

struct ServerOptions {
  /// Empty means memory only.
  std::filesystem::path data_dir;
  bool tracing = false;
};

struct SubstringResult {
  EncryptedSearchOutcome main;
  EncryptedSearchOutcome revoked;
};

class CloudServer {
 public:
  /// Loads persisted state from `options.data_dir` when present.
  explicit CloudServer(ServerOptions options = {});
  ~CloudServer();

  CloudServer(const CloudServer&) = delete;
  CloudServer& operator=(const CloudServer&) = delete;

  /// Replaces all state; persisted before returning. Throws
  /// ValidationError or StorageError, leaving prior state in place.
  wire::Stats outsource(OutsourcePayload payload);

  /// Throws NotInitialized before the first outsource.
  SubstringResult handle_substring_query(const SubstringQueryToken& token);
  std::vector<Ciphertext> handle_keyword_query(ByteView kw_key) const;
  /// Throws UnknownFileId.
  Bytes fetch_blob(const std::string& id) const;

  /// Returns nodes added. Throws MalformedRequest with state unchanged.
  std::size_t handle_update(const wire::KeywordUpdate& update);
  /// Returns postings applied (always 1).
  std::size_t handle_update(const wire::PostingUpdate& update);

  /// Traces with seq >= since. Throws TracingDisabled.
  std::vector<LeakageTrace> leakage_traces(std::uint64_t since = 0) const;

  wire::Stats stats() const;
  bool initialized() const;
  bool tracing() const noexcept { return options_.tracing; }

 private:
  struct State;
  class Storage;

  void record(TraceKind kind, std::string index, std::vector<NodeId> node_ids);
  const State& require_state() const;

  ServerOptions options_;
  std::unique_ptr<Storage> storage_;

  mutable std::shared_mutex state_mutex_;
  std::unique_ptr<State> state_;

  mutable std::mutex trace_mutex_;
  std::vector<LeakageTrace> traces_;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Transport-independent request router for the /v1 API. The HTTP binding
/// and in-process transports both go through it.
class ServerApi {
 public:
  explicit ServerApi(CloudServer& server) : server_(server) {}

  ApiResponse handle(std::string_view method, std::string_view path,
                     const std::map<std::string, std::string>& params, std::string_view body);

 private:
  CloudServer& server_;
};

/// HTTP binding for ServerApi.
class HttpServer {
 public:
  HttpServer(ServerApi& api, std::string host, int port);
  ~HttpServer();

  /// Binds; returns the bound port. Throws PortInUse.
  int bind();
  /// Serves until stop(). Call bind() first.
  void listen();
  /// Blocks until a concurrent listen() accepts connections.
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace subsse
