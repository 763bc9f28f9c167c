#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace subsse {

/// Position heap over one string: a trie holding one node per suffix,
/// built by inserting suffixes right to left. Positions are 1-based; the
/// root carries position 0 and no edge.
class PositionHeap {
 public:
  struct Node {
    unsigned char edge = 0;
    std::size_t pos = 0;
    std::size_t parent = 0;
    std::size_t depth = 0;
    std::map<unsigned char, std::size_t> children;
  };

  /// Candidate positions gathered along the search path, before filtering.
  /// l1: positions of intermediate path nodes (may be false matches).
  /// l2: final node and its subtree (true matches), only on a full match.
  struct Candidates {
    std::vector<std::size_t> l1;
    std::vector<std::size_t> l2;
  };

  static constexpr std::size_t kRoot = 0;

  static PositionHeap build(std::string_view text);

  /// Every 1-based position where `pattern` occurs in the text.
  std::set<std::size_t> search(std::string_view pattern) const;
  Candidates search_candidates(std::string_view pattern) const;

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const std::string& text() const noexcept { return text_; }

  /// Child of `node` along `edge`, or npos.
  std::size_t child(std::size_t node, unsigned char edge) const;
  /// Root-to-node edge string.
  std::string path_of(std::size_t node) const;

  /// One line per node in preorder: indentation by depth, then
  /// "<depth> <edge> <pos>". The root prints "-" for edge and pos.
  std::string dump() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::string text_;
  std::vector<Node> nodes_;
};

/// Printable rendering of an edge byte for debug dumps.
std::string render_edge(unsigned char edge);

}  // namespace subsse
