#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace subsse {

/// Keywords joined by the separator, with the owning keyword of every
/// (1-based) position.
struct DictionaryString {
  std::string text;
  /// owner[p - 1] is the index of the keyword covering position p, or
  /// kNoOwner for separator positions.
  std::vector<std::size_t> owner;

  static constexpr std::size_t kNoOwner = static_cast<std::size_t>(-1);
};

/// Throws DuplicateKeyword, SeparatorInKeyword or EmptyKeyword.
DictionaryString make_dictionary_string(std::span<const std::string> keywords);

/// Position heap of the dictionary string where each node names the
/// keyword owning its position, and the separator-edged root subtree is
/// pruned. Node count is 1 + total keyword length.
class ModifiedPositionHeap {
 public:
  struct Node {
    unsigned char edge = 0;
    std::size_t keyword = kNoKeyword;
    std::size_t parent = 0;
    std::size_t depth = 0;
    std::map<unsigned char, std::size_t> children;
  };

  struct SearchResult {
    std::vector<std::string> l1;
    std::vector<std::string> l2;
  };

  static constexpr std::size_t kRoot = 0;
  static constexpr std::size_t kNoKeyword = static_cast<std::size_t>(-1);
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  static ModifiedPositionHeap build(std::vector<std::string> keywords);

  /// Path walk without filtering: l1 holds intermediate-node keywords
  /// (candidates), l2 the final node's subtree (true matches).
  /// Throws SeparatorInQuery / EmptyQuery.
  SearchResult search(std::string_view pattern) const;

  const std::vector<std::string>& dictionary() const noexcept { return dictionary_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t child(std::size_t node, unsigned char edge) const;
  std::string path_of(std::size_t node) const;

  /// Same layout as PositionHeap::dump, printing keywords instead of positions.
  std::string dump() const;

 private:
  std::vector<std::string> dictionary_;
  std::vector<Node> nodes_;
};

/// Deduplicated keywords among `candidates` that contain `substring`.
std::set<std::string> filter_candidates(std::string_view substring, std::span<const std::string> candidates);

}  // namespace subsse
