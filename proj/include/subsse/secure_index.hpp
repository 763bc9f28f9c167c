#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "subsse/types.hpp"

namespace subsse {

using NodeId = std::uint64_t;

/// Ordered PRF labels, one per prefix of the queried substring.
struct SubstringQueryToken {
  std::vector<PathLabel> labels;
};

/// Labels for one suffix c_i..c_z of an inserted keyword: every prefix of
/// the suffix, then the suffix followed by the separator, then a label
/// derived from fresh randomness.
struct SuffixInsertToken {
  std::vector<PathLabel> labels;
};

/// One keyword insertion: its ciphertext and one token per suffix,
/// longest first.
struct InsertRequest {
  Ciphertext enc_keyword;
  std::vector<SuffixInsertToken> suffix_tokens;

  std::size_t label_count() const noexcept;
  /// Throws MalformedRequest unless the token lengths are z+2, z+1, ..., 3
  /// and every label is `gamma_bits` wide.
  void validate(std::size_t gamma_bits) const;
};

struct EncryptedHit {
  NodeId node = 0;
  Ciphertext enc_keyword;

  friend bool operator==(const EncryptedHit&, const EncryptedHit&) = default;
};

struct EncryptedSearchOutcome {
  std::vector<EncryptedHit> l1;
  std::vector<EncryptedHit> l2;
  std::size_t matched_depth = 0;
  /// Node ids reached by the walk, root excluded. Not sent on the wire.
  std::vector<NodeId> path;
};

/// Node ids reached by an insertion: existing path nodes per suffix token,
/// then the appended leaves.
struct InsertOutcome {
  std::size_t nodes_added = 0;
  std::vector<NodeId> path;
  std::vector<NodeId> added;
};

/// Encrypted modified position heap. Nodes carry a full-path PRF label and
/// a randomized keyword ciphertext; children are found by exact label
/// match. Holds no keys and reads no plaintext.
class SecureIndex {
 public:
  struct Node {
    NodeId parent = 0;
    PathLabel label;
    Ciphertext enc_keyword;
    std::vector<NodeId> children;
  };

  static constexpr NodeId kRoot = 0;
  static constexpr NodeId npos = static_cast<NodeId>(-1);
  static constexpr int kFormatVersion = 1;

  explicit SecureIndex(std::size_t gamma_bits = 256);

  /// Appends a node. Throws ValidationError on a duplicate child label,
  /// unknown parent or wrong label width.
  NodeId add_node(NodeId parent, const PathLabel& label, Ciphertext enc_keyword);

  NodeId child(NodeId parent, const PathLabel& label) const;

  /// Token walk: intermediate nodes feed l1; on consuming every label the
  /// final node and its subtree feed l2. Never filters.
  EncryptedSearchOutcome search(const SubstringQueryToken& token) const;

  /// Appends one leaf per suffix token below the longest already
  /// represented label prefix. Throws MalformedRequest, leaving the index
  /// unchanged, on a malformed request or a fully represented path.
  InsertOutcome apply_insert(const InsertRequest& request);

  std::size_t gamma_bits() const noexcept { return gamma_bits_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }

  /// {version, gamma, node_count, nodes: [[id, parent, label_hex, enc_b64], ...]}
  /// in node-id order; the root row has parent null and empty fields.
  nlohmann::json to_json() const;
  /// Throws ValidationError on any structural inconsistency.
  static SecureIndex from_json(const nlohmann::json& j);

 private:
  struct ChildKey {
    NodeId parent;
    PathLabel label;
    friend bool operator==(const ChildKey&, const ChildKey&) = default;
  };
  struct ChildKeyHash {
    std::size_t operator()(const ChildKey& k) const noexcept {
      return k.label.hash() ^ (k.parent * 0x9e3779b97f4a7c15ULL);
    }
  };

  void check_label(const PathLabel& label) const;
  void apply_tokens(const InsertRequest& request, InsertOutcome& out);

  std::size_t gamma_bits_;
  std::vector<Node> nodes_;
  std::unordered_map<ChildKey, NodeId, ChildKeyHash> child_index_;
};

}  // namespace subsse
