#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "subsse/secure_index.hpp"
#include "subsse/types.hpp"

// JSON bodies of the cloud-server API. Binary fields are base64, labels
// and PRF keys fixed-width lowercase hex.
namespace subsse::wire {

enum class UpdateTarget { Main, Revocation };

/// Search outcome as the client sees it: ciphertexts only.
struct Outcome {
  std::vector<Ciphertext> l1;
  std::vector<Ciphertext> l2;
  std::size_t matched_depth = 0;
};

struct SubstringResponse {
  Outcome main;
  Outcome revoked;
};

struct KeywordUpdate {
  UpdateTarget target = UpdateTarget::Main;
  InsertRequest request;
};

struct PostingUpdate {
  enum class Op { Insert, Delete } op = Op::Insert;
  Bytes kw_key;            // insert
  std::uint64_t counter = 0;  // insert
  Ciphertext enc_id;       // insert
  PathLabel key;           // delete
};

struct Stats {
  std::size_t iw_nodes = 0;
  std::size_t iwr_nodes = 0;
  std::size_t if_entries = 0;
  std::size_t n = 0;

  friend bool operator==(const Stats&, const Stats&) = default;
};

nlohmann::json to_json(const SubstringQueryToken& token);
SubstringQueryToken query_token_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EncryptedSearchOutcome& outcome);
nlohmann::json to_json(const Outcome& outcome);
Outcome outcome_from_json(const nlohmann::json& j);
SubstringResponse substring_response_from_json(const nlohmann::json& j);

nlohmann::json to_json(const KeywordUpdate& update);
KeywordUpdate keyword_update_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PostingUpdate& update);
PostingUpdate posting_update_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Stats& stats);
Stats stats_from_json(const nlohmann::json& j);

std::string to_string(UpdateTarget target);

}  // namespace subsse::wire
