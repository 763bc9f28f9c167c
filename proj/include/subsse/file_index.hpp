#pragma once

#include <cstdint>
#include <set>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "subsse/types.hpp"

namespace subsse {

/// Server-side key for the counter-th posting of a keyword.
PathLabel posting_key(ByteView kw_key, std::uint64_t counter, std::size_t gamma_bits);

/// Encrypted inverted index for keyword-to-file queries. Entry keys are
/// PRF(kw_key, counter) for counters 1..k per keyword; values are
/// encrypted file identifiers. Deletion is logical via a revoked-key set.
class KeywordFileIndex {
 public:
  static constexpr int kFormatVersion = 1;

  explicit KeywordFileIndex(std::size_t gamma_bits = 256);

  /// Throws CounterConflict when the key is taken.
  void put(const PathLabel& key, Ciphertext value);

  /// Probes counters 1, 2, ... until the first absent key, skipping
  /// revoked keys. Values come back in counter order.
  std::vector<Ciphertext> lookup(ByteView kw_key) const;

  /// Throws CounterConflict if the slot is taken or counter - 1 is empty.
  void insert_posting(ByteView kw_key, std::uint64_t counter, Ciphertext enc_id);
  void delete_posting(const PathLabel& key);

  std::size_t gamma_bits() const noexcept { return gamma_bits_; }
  std::size_t entry_count() const noexcept { return entries_.size(); }
  std::size_t revoked_count() const noexcept { return revoked_.size(); }
  bool contains(const PathLabel& key) const { return entries_.count(key) != 0; }

  /// {version, gamma, entries: [[key_hex, value_b64], ...] sorted by key,
  ///  revoked: [key_hex, ...] sorted}
  nlohmann::json to_json() const;
  static KeywordFileIndex from_json(const nlohmann::json& j);

 private:
  std::size_t gamma_bits_;
  std::unordered_map<PathLabel, Ciphertext, PathLabelHash> entries_;
  std::set<PathLabel> revoked_;
};

}  // namespace subsse
