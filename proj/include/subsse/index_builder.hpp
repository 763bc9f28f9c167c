#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "subsse/crypto.hpp"
#include "subsse/dictionary_index.hpp"
#include "subsse/file_index.hpp"
#include "subsse/secure_index.hpp"

// Key-holding side of the scheme: turns plaintext structures and queries
// into labels and ciphertexts.
namespace subsse {

/// Structure-preserving encryption of a modified position heap: node i of
/// the heap becomes node i of the index, labelled PRF_k1(root-to-node
/// edges) and carrying Enc_k2(keyword).
SecureIndex encrypt_index(const ModifiedPositionHeap& heap, const KeyBundle& keys);

/// Q_i = PRF_k1(s_1..s_i) for i = 1..|s|. Throws SeparatorInQuery/EmptyQuery.
SubstringQueryToken make_query_token(std::string_view substring, const KeyBundle& keys);

/// Enc_k2(w) plus, for each suffix c_i..c_z, the labels of c_i..c_j for
/// j = i..z, of c_i..c_z followed by the separator, and of fresh random
/// bytes r_i. Throws SeparatorInKeyword/EmptyKeyword.
InsertRequest make_insert_request(std::string_view keyword, const KeyBundle& keys);

/// Per-keyword key for the file index: PRF_k3(w).
Bytes keyword_key(std::string_view keyword, const KeyBundle& keys);

/// Posting plaintext is the 8-byte big-endian counter followed by the file
/// id, so the client can recover a posting's slot from a lookup.
Ciphertext encrypt_posting(std::uint64_t counter, std::string_view file_id, const KeyBundle& keys);
std::pair<std::uint64_t, std::string> decrypt_posting(ByteView ciphertext, const KeyBundle& keys);

/// Entries at PRF(kw_key, c) for c = 1..k per keyword, merged into one map.
KeywordFileIndex build_file_index(const std::map<std::string, std::vector<std::string>>& postings,
                                  const KeyBundle& keys);

}  // namespace subsse
