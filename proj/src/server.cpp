#include "subsse/server.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "subsse/encoding.hpp"

namespace subsse {

namespace fs = std::filesystem;

struct CloudServer::State {
  SecureIndex iw;
  SecureIndex iwr;
  KeywordFileIndex file_index;
  std::map<std::string, Bytes> blobs;
};

namespace {

void write_atomically(const fs::path& path, std::string_view data) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::StorageError, "cannot open " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::StorageError, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::StorageError, "rename failed for " + path.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::StorageError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json parse_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRequest, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

// Layout: <data_dir>/CURRENT names a generation directory holding iw.json,
// iwr.json, if.json and blobs/<id>. Outsourcing writes a fresh generation
// and swaps CURRENT by rename; updates rewrite single files by rename.
class CloudServer::Storage {
 public:
  explicit Storage(fs::path root) : root_(std::move(root)) {}

  std::unique_ptr<State> load() {
    const fs::path current = root_ / "CURRENT";
    if (!fs::exists(current)) return nullptr;
    std::string name = read_file(current);
    while (!name.empty() && (name.back() == '\n' || name.back() == '\r')) name.pop_back();
    generation_ = root_ / name;
    try {
      auto state = std::make_unique<State>(State{
          SecureIndex::from_json(nlohmann::json::parse(read_file(generation_ / "iw.json"))),
          SecureIndex::from_json(nlohmann::json::parse(read_file(generation_ / "iwr.json"))),
          KeywordFileIndex::from_json(nlohmann::json::parse(read_file(generation_ / "if.json"))),
          {}});
      for (const auto& entry : fs::directory_iterator(generation_ / "blobs")) {
        const std::string data = read_file(entry.path());
        state->blobs.emplace(entry.path().filename().string(), Bytes(data.begin(), data.end()));
      }
      return state;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::StorageError, std::string("corrupt persisted state: ") + e.what());
    }
  }

  void write_all(const State& state) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw Error(ErrorCode::StorageError, "cannot create " + root_.string());
    const fs::path next = root_ / next_generation_name();
    fs::remove_all(next, ec);
    fs::create_directories(next / "blobs", ec);
    if (ec) throw Error(ErrorCode::StorageError, "cannot create " + next.string());
    write_atomically(next / "iw.json", state.iw.to_json().dump());
    write_atomically(next / "iwr.json", state.iwr.to_json().dump());
    write_atomically(next / "if.json", state.file_index.to_json().dump());
    for (const auto& [id, data] : state.blobs) {
      write_atomically(next / "blobs" / id, std::string_view(reinterpret_cast<const char*>(data.data()), data.size()));
    }
    write_atomically(root_ / "CURRENT", next.filename().string() + "\n");
    const fs::path old = generation_;
    generation_ = next;
    if (!old.empty() && old != next) fs::remove_all(old, ec);
  }

  void write_index(std::string_view file, const nlohmann::json& j) {
    write_atomically(generation_ / file, j.dump());
  }

 private:
  std::string next_generation_name() const {
    unsigned long n = 0;
    if (!generation_.empty()) {
      const std::string name = generation_.filename().string();
      std::from_chars(name.data() + 4, name.data() + name.size(), n);
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "gen-%06lu", n + 1);
    return buf;
  }

  fs::path root_;
  fs::path generation_;
};

std::string to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::QueryPath: return "query_path";
    case TraceKind::InsertionPath: return "insertion_path";
    case TraceKind::DeletionPath: return "deletion_path";
    case TraceKind::Access: return "access";
  }
  return "unknown";
}

nlohmann::json to_json(const LeakageTrace& trace) {
  return {{"seq", trace.seq}, {"kind", to_string(trace.kind)}, {"index", trace.index}, {"node_ids", trace.node_ids}};
}

LeakageTrace trace_from_json(const nlohmann::json& j) {
  LeakageTrace t;
  t.seq = j.at("seq").get<std::uint64_t>();
  const auto kind = j.at("kind").get<std::string>();
  for (TraceKind k : {TraceKind::QueryPath, TraceKind::InsertionPath, TraceKind::DeletionPath, TraceKind::Access}) {
    if (to_string(k) == kind) t.kind = k;
  }
  t.index = j.at("index").get<std::string>();
  t.node_ids = j.at("node_ids").get<std::vector<NodeId>>();
  return t;
}

void validate_file_id(std::string_view id) {
  if (id.empty() || id.size() > 128 || id.front() == '.') {
    throw Error(ErrorCode::ValidationError, "invalid file id");
  }
  for (const char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                    c == '_' || c == '-';
    if (!ok) throw Error(ErrorCode::ValidationError, "invalid file id");
  }
}

nlohmann::json OutsourcePayload::to_json() const {
  nlohmann::json blob_rows = nlohmann::json::array();
  for (const auto& [id, data] : blobs) blob_rows.push_back({{"id", id}, {"data", base64_encode(data)}});
  return {{"iw", iw.to_json()},
          {"iwr", iwr.to_json()},
          {"if", file_index.to_json()},
          {"blobs", std::move(blob_rows)},
          {"file_refs", file_refs}};
}

OutsourcePayload OutsourcePayload::from_json(const nlohmann::json& j) {
  try {
    OutsourcePayload p{SecureIndex::from_json(j.at("iw")), SecureIndex::from_json(j.at("iwr")),
                       KeywordFileIndex::from_json(j.at("if")), {}, {}};
    for (const auto& row : j.at("blobs")) {
      auto id = row.at("id").get<std::string>();
      validate_file_id(id);
      if (!p.blobs.emplace(id, base64_decode(row.at("data").get<std::string>())).second) {
        throw Error(ErrorCode::ValidationError, "duplicate blob id");
      }
    }
    if (j.contains("file_refs")) p.file_refs = j.at("file_refs").get<std::set<std::string>>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("malformed outsource payload: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ValidationError) throw;
    throw Error(ErrorCode::ValidationError, e.what());
  }
}

CloudServer::CloudServer(ServerOptions options) : options_(std::move(options)) {
  if (!options_.data_dir.empty()) {
    storage_ = std::make_unique<Storage>(options_.data_dir);
    state_ = storage_->load();
  }
}

CloudServer::~CloudServer() = default;

const CloudServer::State& CloudServer::require_state() const {
  if (!state_) throw Error(ErrorCode::NotInitialized, "no outsourced state");
  return *state_;
}

wire::Stats CloudServer::outsource(OutsourcePayload payload) {
  for (const auto& ref : payload.file_refs) {
    if (payload.blobs.count(ref) == 0) throw Error(ErrorCode::ValidationError, "posting references missing blob " + ref);
  }
  if (payload.iw.gamma_bits() != payload.iwr.gamma_bits() ||
      payload.iw.gamma_bits() != payload.file_index.gamma_bits()) {
    throw Error(ErrorCode::ValidationError, "index label widths differ");
  }
  auto next = std::make_unique<State>(State{std::move(payload.iw), std::move(payload.iwr),
                                            std::move(payload.file_index), std::move(payload.blobs)});
  std::unique_lock lock(state_mutex_);
  if (storage_) storage_->write_all(*next);
  state_ = std::move(next);
  return wire::Stats{state_->iw.node_count(), state_->iwr.node_count(), state_->file_index.entry_count(),
                     state_->blobs.size()};
}

SubstringResult CloudServer::handle_substring_query(const SubstringQueryToken& token) {
  SubstringResult out;
  {
    std::shared_lock lock(state_mutex_);
    const State& s = require_state();
    for (const auto& label : token.labels) {
      if (label.bits() != s.iw.gamma_bits()) throw Error(ErrorCode::MalformedRequest, "label width mismatch");
    }
    out.main = s.iw.search(token);
    out.revoked = s.iwr.search(token);
  }
  if (options_.tracing) {
    for (const auto& [name, outcome] : {std::pair{"iw", &out.main}, std::pair{"iwr", &out.revoked}}) {
      record(TraceKind::QueryPath, name, outcome->path);
      std::vector<NodeId> access;
      for (const auto& h : outcome->l1) access.push_back(h.node);
      for (const auto& h : outcome->l2) access.push_back(h.node);
      record(TraceKind::Access, name, std::move(access));
    }
  }
  return out;
}

std::vector<Ciphertext> CloudServer::handle_keyword_query(ByteView kw_key) const {
  std::shared_lock lock(state_mutex_);
  return require_state().file_index.lookup(kw_key);
}

Bytes CloudServer::fetch_blob(const std::string& id) const {
  std::shared_lock lock(state_mutex_);
  const auto& blobs = require_state().blobs;
  const auto it = blobs.find(id);
  if (it == blobs.end()) throw Error(ErrorCode::UnknownFileId, "no blob with id " + id);
  return it->second;
}

std::size_t CloudServer::handle_update(const wire::KeywordUpdate& update) {
  InsertOutcome outcome;
  const bool main = update.target == wire::UpdateTarget::Main;
  {
    std::unique_lock lock(state_mutex_);
    if (!state_) throw Error(ErrorCode::NotInitialized, "no outsourced state");
    SecureIndex& idx = main ? state_->iw : state_->iwr;
    outcome = idx.apply_insert(update.request);
    if (storage_) storage_->write_index(main ? "iw.json" : "iwr.json", idx.to_json());
  }
  if (options_.tracing) {
    std::vector<NodeId> ids = outcome.path;
    ids.insert(ids.end(), outcome.added.begin(), outcome.added.end());
    record(main ? TraceKind::InsertionPath : TraceKind::DeletionPath, main ? "iw" : "iwr", std::move(ids));
  }
  return outcome.nodes_added;
}

std::size_t CloudServer::handle_update(const wire::PostingUpdate& update) {
  std::unique_lock lock(state_mutex_);
  if (!state_) throw Error(ErrorCode::NotInitialized, "no outsourced state");
  if (update.op == wire::PostingUpdate::Op::Insert) {
    state_->file_index.insert_posting(update.kw_key, update.counter, update.enc_id);
  } else {
    state_->file_index.delete_posting(update.key);
  }
  if (storage_) storage_->write_index("if.json", state_->file_index.to_json());
  return 1;
}

void CloudServer::record(TraceKind kind, std::string index, std::vector<NodeId> node_ids) {
  std::lock_guard lock(trace_mutex_);
  traces_.push_back(LeakageTrace{traces_.size(), kind, std::move(index), std::move(node_ids)});
}

std::vector<LeakageTrace> CloudServer::leakage_traces(std::uint64_t since) const {
  if (!options_.tracing) throw Error(ErrorCode::TracingDisabled, "server started without tracing");
  std::lock_guard lock(trace_mutex_);
  if (since >= traces_.size()) return {};
  return {traces_.begin() + static_cast<std::ptrdiff_t>(since), traces_.end()};
}

wire::Stats CloudServer::stats() const {
  std::shared_lock lock(state_mutex_);
  if (!state_) return {};
  return wire::Stats{state_->iw.node_count(), state_->iwr.node_count(), state_->file_index.entry_count(),
                     state_->blobs.size()};
}

bool CloudServer::initialized() const {
  std::shared_lock lock(state_mutex_);
  return state_ != nullptr;
}

// ---------------------------------------------------------------------------

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ValidationError:
    case ErrorCode::MalformedRequest: return 400;
    case ErrorCode::TracingDisabled: return 403;
    case ErrorCode::UnknownFileId: return 404;
    case ErrorCode::NotInitialized:
    case ErrorCode::CounterConflict: return 409;
    default: return 500;
  }
}

ApiResponse json_response(const nlohmann::json& j) { return ApiResponse{200, j.dump(), "application/json"}; }

ApiResponse error_response(int status, std::string_view code, std::string_view message) {
  return ApiResponse{status, nlohmann::json{{"error", code}, {"message", message}}.dump(), "application/json"};
}

}  // namespace

ApiResponse ServerApi::handle(std::string_view method, std::string_view path,
                              const std::map<std::string, std::string>& params, std::string_view body) {
  try {
    if (method == "POST" && path == "/v1/outsource") {
      nlohmann::json j = parse_json(body);
      return json_response(wire::to_json(server_.outsource(OutsourcePayload::from_json(j))));
    }
    if (method == "POST" && path == "/v1/query/substring") {
      const auto result = server_.handle_substring_query(wire::query_token_from_json(parse_json(body)));
      return json_response({{"main", wire::to_json(result.main)}, {"revoked", wire::to_json(result.revoked)}});
    }
    if (method == "POST" && path == "/v1/query/keyword") {
      const auto j = parse_json(body);
      Bytes kw_key;
      try {
        kw_key = hex_decode(j.at("kw_key").get<std::string>());
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedRequest, e.what());
      }
      nlohmann::json ids = nlohmann::json::array();
      for (const auto& c : server_.handle_keyword_query(kw_key)) ids.push_back(base64_encode(c));
      return json_response({{"enc_ids", std::move(ids)}});
    }
    if (method == "GET" && path.starts_with("/v1/file/")) {
      const std::string id(path.substr(std::string_view("/v1/file/").size()));
      const Bytes data = server_.fetch_blob(id);
      return ApiResponse{200, std::string(data.begin(), data.end()), "application/octet-stream"};
    }
    if (method == "POST" && path == "/v1/update/keyword") {
      const auto n = server_.handle_update(wire::keyword_update_from_json(parse_json(body)));
      return json_response({{"nodes_added", n}});
    }
    if (method == "POST" && path == "/v1/update/posting") {
      const auto n = server_.handle_update(wire::posting_update_from_json(parse_json(body)));
      return json_response({{"applied", n}});
    }
    if (method == "GET" && path == "/v1/debug/leakage") {
      std::uint64_t since = 0;
      if (const auto it = params.find("since"); it != params.end()) {
        const auto& s = it->second;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), since);
        if (ec != std::errc() || ptr != s.data() + s.size()) throw Error(ErrorCode::MalformedRequest, "bad since");
      }
      nlohmann::json traces = nlohmann::json::array();
      for (const auto& t : server_.leakage_traces(since)) traces.push_back(to_json(t));
      return json_response({{"traces", std::move(traces)}});
    }
    if (method == "GET" && path == "/v1/stats") return json_response(wire::to_json(server_.stats()));
    return error_response(404, "NotFound", "no route for " + std::string(method) + " " + std::string(path));
  } catch (const Error& e) {
    return error_response(status_for(e.code()), to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return error_response(500, "Internal", e.what());
  }
}

}  // namespace subsse
