#include "subsse/client.hpp"

#include <fstream>
#include <sstream>

#include "subsse/dictionary_index.hpp"
#include "subsse/encoding.hpp"
#include "subsse/index_builder.hpp"

namespace subsse {

namespace fs = std::filesystem;

namespace {

constexpr int kStateVersion = 1;

ErrorCode code_from_name(const std::string& name) {
  for (int c = 0; c <= static_cast<int>(ErrorCode::Usage); ++c) {
    if (to_string(static_cast<ErrorCode>(c)) == name) return static_cast<ErrorCode>(c);
  }
  return ErrorCode::ValidationError;
}

}  // namespace

nlohmann::json state_to_json(const ClientState& state) {
  return {{"version", kStateVersion},
          {"server_url", state.server_url},
          {"posting_counters", state.posting_counters},
          {"revoked_keywords", state.revoked_keywords},
          {"file_names", state.file_names}};
}

ClientState state_from_json(const nlohmann::json& j, KeyBundle keys) {
  try {
    if (j.at("version").get<int>() != kStateVersion) throw Error(ErrorCode::ValidationError, "unsupported state version");
    ClientState s;
    s.keys = std::move(keys);
    s.server_url = j.at("server_url").get<std::string>();
    s.posting_counters = j.at("posting_counters").get<std::map<std::string, std::uint64_t>>();
    s.revoked_keywords = j.at("revoked_keywords").get<std::set<std::string>>();
    s.file_names = j.value("file_names", std::map<std::string, std::string>{});
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("malformed client state: ") + e.what());
  }
}

UserClient::UserClient(ClientState state, std::shared_ptr<Transport> transport, fs::path home)
    : state_(std::move(state)), transport_(std::move(transport)), home_(std::move(home)) {}

UserClient UserClient::init(const fs::path& home, std::string server_url, unsigned lambda,
                            std::uint64_t expected_index_size) {
  ClientState state;
  state.keys = keygen(lambda, expected_index_size);
  state.server_url = std::move(server_url);
  std::error_code ec;
  fs::create_directories(home, ec);
  if (ec) throw Error(ErrorCode::StorageError, "cannot create " + home.string());
  auto transport = std::make_shared<HttpTransport>(state.server_url);
  UserClient client(std::move(state), std::move(transport), home);
  client.save();
  return client;
}

UserClient UserClient::open(const fs::path& home, std::shared_ptr<Transport> transport) {
  KeyBundle keys = read_key_file(home / "keys.bin");
  std::ifstream in(home / "state.json");
  if (!in) throw Error(ErrorCode::StorageError, "cannot read " + (home / "state.json").string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("malformed client state: ") + e.what());
  }
  ClientState state = state_from_json(j, std::move(keys));
  if (!transport) transport = std::make_shared<HttpTransport>(state.server_url);
  return UserClient(std::move(state), std::move(transport), home);
}

void UserClient::save() const {
  if (home_.empty()) return;
  write_key_file(home_ / "keys.bin", state_.keys);
  const fs::path path = home_ / "state.json";
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::StorageError, "cannot write " + tmp.string());
    out << state_to_json(state_).dump(2) << '\n';
  }
  fs::rename(tmp, path);
}

nlohmann::json UserClient::call(const std::string& method, const std::string& target, const std::string& body) {
  const TransportResponse res = method == "POST" ? transport_->post(target, body) : transport_->get(target);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(res.body);
  } catch (const nlohmann::json::exception&) {
    if (res.status != 200) throw Error(ErrorCode::ServerUnreachable, "HTTP " + std::to_string(res.status));
    throw Error(ErrorCode::ValidationError, "server sent non-JSON response");
  }
  if (res.status != 200) {
    throw Error(code_from_name(j.value("error", "")), j.value("message", "HTTP " + std::to_string(res.status)));
  }
  return j;
}

SubstringQueryToken UserClient::make_query_token(std::string_view substring) const {
  return subsse::make_query_token(substring, state_.keys);
}

InsertRequest UserClient::make_insert_request(std::string_view keyword) const {
  return subsse::make_insert_request(keyword, state_.keys);
}

wire::Stats UserClient::outsource(const std::vector<std::string>& dictionary,
                                  const std::map<std::string, std::vector<std::string>>& postings,
                                  const std::vector<PlainFile>& files) {
  const std::set<std::string> dict_set(dictionary.begin(), dictionary.end());
  std::set<std::string> file_ids;
  for (const auto& f : files) {
    validate_file_id(f.id);
    if (!file_ids.insert(f.id).second) throw Error(ErrorCode::ValidationError, "duplicate file id " + f.id);
  }
  std::set<std::string> refs;
  for (const auto& [keyword, ids] : postings) {
    if (dict_set.count(keyword) == 0) throw Error(ErrorCode::ValidationError, "posting keyword not in dictionary");
    for (const auto& id : ids) {
      if (file_ids.count(id) == 0) throw Error(ErrorCode::ValidationError, "posting references unknown file " + id);
      refs.insert(id);
    }
  }

  const auto heap = ModifiedPositionHeap::build(dictionary);
  OutsourcePayload payload{encrypt_index(heap, state_.keys), encrypt_index(ModifiedPositionHeap::build({}), state_.keys),
                           build_file_index(postings, state_.keys), {}, std::move(refs)};
  for (const auto& f : files) payload.blobs.emplace(f.id, ske_encrypt(state_.keys.k2, ByteView(f.content)));

  const auto stats = wire::stats_from_json(call("POST", "/v1/outsource", payload.to_json().dump()));
  state_.posting_counters.clear();
  for (const auto& [keyword, ids] : postings) {
    if (!ids.empty()) state_.posting_counters[keyword] = ids.size();
  }
  state_.revoked_keywords.clear();
  save();
  return stats;
}

std::vector<Suggestion> UserClient::suggest(std::string_view substring) {
  const SubstringQueryToken token = make_query_token(substring);
  const auto response = wire::substring_response_from_json(call("POST", "/v1/query/substring", wire::to_json(token).dump()));

  auto decrypt_all = [&](const wire::Outcome& o) {
    std::vector<std::string> out;
    out.reserve(o.l1.size() + o.l2.size());
    for (const auto* list : {&o.l1, &o.l2}) {
      for (const auto& c : *list) out.push_back(to_string(ByteView(ske_decrypt(state_.keys.k2, c))));
    }
    return out;
  };
  const std::vector<std::string> main = decrypt_all(response.main);
  const std::vector<std::string> revoked = decrypt_all(response.revoked);
  const std::set<std::string> live = filter_candidates(substring, main);
  const std::set<std::string> dead = filter_candidates(substring, revoked);

  std::map<std::string, std::size_t> counts;
  for (const auto& w : main) {
    if (live.count(w) != 0 && dead.count(w) == 0) ++counts[w];
  }
  std::vector<Suggestion> out;
  out.reserve(counts.size());
  for (auto& [w, n] : counts) out.push_back({w, n});
  return out;
}

std::vector<std::string> UserClient::suggest_keywords(std::string_view substring) {
  std::vector<std::string> out;
  for (auto& s : suggest(substring)) out.push_back(std::move(s.keyword));
  return out;
}

std::vector<std::string> UserClient::files_for(std::string_view keyword) {
  validate_keyword(keyword);
  const Bytes kw_key = keyword_key(keyword, state_.keys);
  const auto j = call("POST", "/v1/query/keyword", nlohmann::json{{"kw_key", hex_encode(kw_key)}}.dump());
  std::vector<std::string> out;
  for (const auto& enc : j.at("enc_ids")) {
    out.push_back(decrypt_posting(base64_decode(enc.get<std::string>()), state_.keys).second);
  }
  return out;
}

Bytes UserClient::fetch_and_decrypt(const std::string& file_id) {
  validate_file_id(file_id);
  const TransportResponse res = transport_->get("/v1/file/" + file_id);
  if (res.status != 200) {
    std::string code = "UnknownFileId";
    std::string message = "HTTP " + std::to_string(res.status);
    try {
      const auto j = nlohmann::json::parse(res.body);
      code = j.value("error", code);
      message = j.value("message", message);
    } catch (const nlohmann::json::exception&) {
    }
    throw Error(code_from_name(code), message);
  }
  return ske_decrypt(state_.keys.k2, ByteView(reinterpret_cast<const std::uint8_t*>(res.body.data()), res.body.size()));
}

std::size_t UserClient::insert_keyword(std::string_view keyword) {
  validate_keyword(keyword);
  if (state_.revoked_keywords.count(std::string(keyword)) != 0) {
    throw Error(ErrorCode::RevokedKeyword, "keyword was deleted and stays suppressed");
  }
  const wire::KeywordUpdate update{wire::UpdateTarget::Main, make_insert_request(keyword)};
  const auto j = call("POST", "/v1/update/keyword", wire::to_json(update).dump());
  return j.at("nodes_added").get<std::size_t>();
}

std::size_t UserClient::delete_keyword(std::string_view keyword) {
  validate_keyword(keyword);
  const wire::KeywordUpdate update{wire::UpdateTarget::Revocation, make_insert_request(keyword)};
  const auto j = call("POST", "/v1/update/keyword", wire::to_json(update).dump());
  state_.revoked_keywords.emplace(keyword);
  save();
  return j.at("nodes_added").get<std::size_t>();
}

void UserClient::add_posting(std::string_view keyword, const std::string& file_id) {
  validate_keyword(keyword);
  validate_file_id(file_id);
  const std::string w(keyword);
  const std::uint64_t counter = state_.posting_counters[w] + 1;
  wire::PostingUpdate update;
  update.op = wire::PostingUpdate::Op::Insert;
  update.kw_key = keyword_key(keyword, state_.keys);
  update.counter = counter;
  update.enc_id = encrypt_posting(counter, file_id, state_.keys);
  call("POST", "/v1/update/posting", wire::to_json(update).dump());
  state_.posting_counters[w] = counter;
  save();
}

void UserClient::remove_posting(std::string_view keyword, const std::string& file_id) {
  validate_keyword(keyword);
  const Bytes kw_key = keyword_key(keyword, state_.keys);
  const auto j = call("POST", "/v1/query/keyword", nlohmann::json{{"kw_key", hex_encode(kw_key)}}.dump());
  for (const auto& enc : j.at("enc_ids")) {
    const auto [counter, id] = decrypt_posting(base64_decode(enc.get<std::string>()), state_.keys);
    if (id != file_id) continue;
    wire::PostingUpdate update;
    update.op = wire::PostingUpdate::Op::Delete;
    update.key = posting_key(kw_key, counter, state_.keys.gamma);
    call("POST", "/v1/update/posting", wire::to_json(update).dump());
    return;
  }
  throw Error(ErrorCode::ValidationError, "no such posting");
}

void UserClient::remember_file_names(std::map<std::string, std::string> names) {
  state_.file_names = std::move(names);
  save();
}

wire::Stats UserClient::stats() { return wire::stats_from_json(call("GET", "/v1/stats")); }

}  // namespace subsse
