#include "subsse/index_builder.hpp"

namespace subsse {

SecureIndex encrypt_index(const ModifiedPositionHeap& heap, const KeyBundle& keys) {
  SecureIndex idx(keys.gamma);
  const auto& nodes = heap.nodes();
  const auto& dict = heap.dictionary();
  // Heap arena order has parents before children, so ids line up 1:1.
  std::vector<std::string> paths(nodes.size());
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    paths[i] = paths[n.parent];
    paths[i] += static_cast<char>(n.edge);
    idx.add_node(n.parent, prf(keys.k1, paths[i], keys.gamma), ske_encrypt(keys.k2, dict[n.keyword]));
  }
  return idx;
}

SubstringQueryToken make_query_token(std::string_view substring, const KeyBundle& keys) {
  validate_query(substring);
  SubstringQueryToken token;
  token.labels.reserve(substring.size());
  for (std::size_t i = 1; i <= substring.size(); ++i) {
    token.labels.push_back(prf(keys.k1, substring.substr(0, i), keys.gamma));
  }
  return token;
}

InsertRequest make_insert_request(std::string_view keyword, const KeyBundle& keys) {
  validate_keyword(keyword);
  InsertRequest req;
  req.enc_keyword = ske_encrypt(keys.k2, keyword);
  const std::size_t z = keyword.size();
  for (std::size_t i = 0; i < z; ++i) {
    const std::string_view suffix = keyword.substr(i);
    SuffixInsertToken token;
    token.labels.reserve(suffix.size() + 2);
    for (std::size_t j = 1; j <= suffix.size(); ++j) {
      token.labels.push_back(prf(keys.k1, suffix.substr(0, j), keys.gamma));
    }
    std::string terminated(suffix);
    terminated += kSeparator;
    token.labels.push_back(prf(keys.k1, terminated, keys.gamma));
    token.labels.push_back(prf(keys.k1, ByteView(random_bytes(keys.lambda / 8)), keys.gamma));
    req.suffix_tokens.push_back(std::move(token));
  }
  return req;
}

Bytes keyword_key(std::string_view keyword, const KeyBundle& keys) {
  const PathLabel key = prf(keys.k3, keyword, kNativePrfBits);
  return Bytes(key.bytes().begin(), key.bytes().end());
}

Ciphertext encrypt_posting(std::uint64_t counter, std::string_view file_id, const KeyBundle& keys) {
  Bytes plain = encode_counter(counter);
  plain.insert(plain.end(), file_id.begin(), file_id.end());
  return ske_encrypt(keys.k2, ByteView(plain));
}

std::pair<std::uint64_t, std::string> decrypt_posting(ByteView ciphertext, const KeyBundle& keys) {
  const Bytes plain = ske_decrypt(keys.k2, ciphertext);
  if (plain.size() < 8) throw Error(ErrorCode::DecryptionFailure, "posting plaintext too short");
  std::uint64_t counter = 0;
  for (std::size_t i = 0; i < 8; ++i) counter = (counter << 8) | plain[i];
  return {counter, std::string(plain.begin() + 8, plain.end())};
}

KeywordFileIndex build_file_index(const std::map<std::string, std::vector<std::string>>& postings,
                                  const KeyBundle& keys) {
  KeywordFileIndex idx(keys.gamma);
  for (const auto& [keyword, files] : postings) {
    validate_keyword(keyword);
    const Bytes kw_key = keyword_key(keyword, keys);
    for (std::size_t c = 1; c <= files.size(); ++c) {
      idx.put(posting_key(kw_key, c, keys.gamma), encrypt_posting(c, files[c - 1], keys));
    }
  }
  return idx;
}

}  // namespace subsse
