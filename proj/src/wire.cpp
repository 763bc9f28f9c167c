#include "subsse/wire.hpp"

#include "subsse/encoding.hpp"

namespace subsse::wire {

namespace {

template <typename F>
auto parse(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRequest, std::string(what) + ": " + e.what());
  }
}

nlohmann::json labels_to_json(const std::vector<PathLabel>& labels) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& l : labels) out.push_back(l.hex());
  return out;
}

std::vector<PathLabel> labels_from_json(const nlohmann::json& j) {
  std::vector<PathLabel> out;
  out.reserve(j.size());
  for (const auto& s : j) out.push_back(PathLabel::from_hex(s.get<std::string>()));
  return out;
}

nlohmann::json blobs_to_json(const std::vector<Ciphertext>& blobs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& b : blobs) out.push_back(base64_encode(b));
  return out;
}

std::vector<Ciphertext> blobs_from_json(const nlohmann::json& j) {
  std::vector<Ciphertext> out;
  out.reserve(j.size());
  for (const auto& s : j) out.push_back(base64_decode(s.get<std::string>()));
  return out;
}

nlohmann::json hits_to_json(const std::vector<EncryptedHit>& hits) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& h : hits) out.push_back(base64_encode(h.enc_keyword));
  return out;
}

}  // namespace

std::string to_string(UpdateTarget target) { return target == UpdateTarget::Main ? "main" : "revocation"; }

nlohmann::json to_json(const SubstringQueryToken& token) { return {{"tokens", labels_to_json(token.labels)}}; }

SubstringQueryToken query_token_from_json(const nlohmann::json& j) {
  return parse("substring query", [&] { return SubstringQueryToken{labels_from_json(j.at("tokens"))}; });
}

nlohmann::json to_json(const EncryptedSearchOutcome& outcome) {
  return {{"l1", hits_to_json(outcome.l1)}, {"l2", hits_to_json(outcome.l2)}, {"matched_depth", outcome.matched_depth}};
}

nlohmann::json to_json(const Outcome& outcome) {
  return {{"l1", blobs_to_json(outcome.l1)}, {"l2", blobs_to_json(outcome.l2)}, {"matched_depth", outcome.matched_depth}};
}

Outcome outcome_from_json(const nlohmann::json& j) {
  return parse("search outcome", [&] {
    return Outcome{blobs_from_json(j.at("l1")), blobs_from_json(j.at("l2")), j.at("matched_depth").get<std::size_t>()};
  });
}

SubstringResponse substring_response_from_json(const nlohmann::json& j) {
  return parse("substring response", [&] {
    return SubstringResponse{outcome_from_json(j.at("main")), outcome_from_json(j.at("revoked"))};
  });
}

nlohmann::json to_json(const KeywordUpdate& update) {
  nlohmann::json tokens = nlohmann::json::array();
  for (const auto& t : update.request.suffix_tokens) tokens.push_back(labels_to_json(t.labels));
  return {{"target", to_string(update.target)},
          {"enc_keyword", base64_encode(update.request.enc_keyword)},
          {"suffix_tokens", std::move(tokens)}};
}

KeywordUpdate keyword_update_from_json(const nlohmann::json& j) {
  return parse("keyword update", [&] {
    KeywordUpdate out;
    const auto target = j.at("target").get<std::string>();
    if (target == "main") {
      out.target = UpdateTarget::Main;
    } else if (target == "revocation") {
      out.target = UpdateTarget::Revocation;
    } else {
      throw Error(ErrorCode::MalformedRequest, "unknown update target '" + target + "'");
    }
    out.request.enc_keyword = base64_decode(j.at("enc_keyword").get<std::string>());
    for (const auto& t : j.at("suffix_tokens")) out.request.suffix_tokens.push_back({labels_from_json(t)});
    return out;
  });
}

nlohmann::json to_json(const PostingUpdate& update) {
  if (update.op == PostingUpdate::Op::Insert) {
    return {{"op", "insert"},
            {"kw_key", hex_encode(update.kw_key)},
            {"counter", update.counter},
            {"enc_id", base64_encode(update.enc_id)}};
  }
  return {{"op", "delete"}, {"key", update.key.hex()}};
}

PostingUpdate posting_update_from_json(const nlohmann::json& j) {
  return parse("posting update", [&] {
    PostingUpdate out;
    const auto op = j.at("op").get<std::string>();
    if (op == "insert") {
      out.op = PostingUpdate::Op::Insert;
      out.kw_key = hex_decode(j.at("kw_key").get<std::string>());
      out.counter = j.at("counter").get<std::uint64_t>();
      out.enc_id = base64_decode(j.at("enc_id").get<std::string>());
    } else if (op == "delete") {
      out.op = PostingUpdate::Op::Delete;
      out.key = PathLabel::from_hex(j.at("key").get<std::string>());
    } else {
      throw Error(ErrorCode::MalformedRequest, "unknown posting op '" + op + "'");
    }
    return out;
  });
}

nlohmann::json to_json(const Stats& stats) {
  return {{"iw_nodes", stats.iw_nodes}, {"iwr_nodes", stats.iwr_nodes}, {"if_entries", stats.if_entries}, {"n", stats.n}};
}

Stats stats_from_json(const nlohmann::json& j) {
  return parse("stats", [&] {
    return Stats{j.at("iw_nodes").get<std::size_t>(), j.at("iwr_nodes").get<std::size_t>(),
                 j.at("if_entries").get<std::size_t>(), j.at("n").get<std::size_t>()};
  });
}

}  // namespace subsse::wire
