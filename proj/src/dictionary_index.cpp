#include "subsse/dictionary_index.hpp"

#include <unordered_set>

#include "subsse/position_heap.hpp"
#include "subsse/types.hpp"

namespace subsse {

DictionaryString make_dictionary_string(std::span<const std::string> keywords) {
  DictionaryString out;
  std::unordered_set<std::string_view> seen;
  for (std::size_t k = 0; k < keywords.size(); ++k) {
    const std::string& w = keywords[k];
    validate_keyword(w);
    if (!seen.insert(w).second) throw Error(ErrorCode::DuplicateKeyword, "duplicate keyword in dictionary");
    if (k > 0) {
      out.text += kSeparator;
      out.owner.push_back(DictionaryString::kNoOwner);
    }
    out.text += w;
    out.owner.insert(out.owner.end(), w.size(), k);
  }
  return out;
}

ModifiedPositionHeap ModifiedPositionHeap::build(std::vector<std::string> keywords) {
  const DictionaryString dict = make_dictionary_string(keywords);
  const PositionHeap heap = PositionHeap::build(dict.text);
  const auto& plain = heap.nodes();

  ModifiedPositionHeap out;
  out.dictionary_ = std::move(keywords);

  // Arena order is suffix-insertion order; pruned nodes are skipped and the
  // rest keep their relative order. Parents always precede children.
  const std::size_t pruned_root = heap.child(PositionHeap::kRoot, static_cast<unsigned char>(kSeparator));
  std::vector<std::size_t> remap(plain.size(), npos);
  out.nodes_.reserve(plain.size());
  remap[PositionHeap::kRoot] = kRoot;
  out.nodes_.emplace_back();
  for (std::size_t i = 1; i < plain.size(); ++i) {
    const auto& p = plain[i];
    if (i == pruned_root || remap[p.parent] == npos) continue;
    Node n;
    n.edge = p.edge;
    n.keyword = dict.owner[p.pos - 1];
    n.parent = remap[p.parent];
    n.depth = p.depth;
    remap[i] = out.nodes_.size();
    out.nodes_[n.parent].children.emplace(n.edge, remap[i]);
    out.nodes_.push_back(std::move(n));
  }
  return out;
}

std::size_t ModifiedPositionHeap::child(std::size_t node, unsigned char edge) const {
  const auto& children = nodes_[node].children;
  const auto it = children.find(edge);
  return it == children.end() ? npos : it->second;
}

std::string ModifiedPositionHeap::path_of(std::size_t node) const {
  std::string path(nodes_[node].depth, '\0');
  for (std::size_t n = node; n != kRoot; n = nodes_[n].parent) {
    path[nodes_[n].depth - 1] = static_cast<char>(nodes_[n].edge);
  }
  return path;
}

ModifiedPositionHeap::SearchResult ModifiedPositionHeap::search(std::string_view pattern) const {
  validate_query(pattern);
  SearchResult out;
  std::size_t node = kRoot;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const std::size_t next = child(node, static_cast<unsigned char>(pattern[i]));
    if (next == npos) break;
    if (i + 1 == pattern.size()) {
      std::vector<std::size_t> stack{next};
      while (!stack.empty()) {
        const std::size_t x = stack.back();
        stack.pop_back();
        out.l2.push_back(dictionary_[nodes_[x].keyword]);
        const auto& children = nodes_[x].children;
        for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(it->second);
      }
    } else {
      out.l1.push_back(dictionary_[nodes_[next].keyword]);
    }
    node = next;
  }
  return out;
}

std::string ModifiedPositionHeap::dump() const {
  std::string out;
  std::vector<std::size_t> stack{kRoot};
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    const Node& n = nodes_[x];
    out.append(2 * n.depth, ' ');
    out += std::to_string(n.depth);
    out += ' ';
    out += x == kRoot ? "-" : render_edge(n.edge);
    out += ' ';
    out += x == kRoot ? "-" : dictionary_[n.keyword];
    out += '\n';
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(it->second);
  }
  return out;
}

std::set<std::string> filter_candidates(std::string_view substring, std::span<const std::string> candidates) {
  std::set<std::string> out;
  for (const auto& w : candidates) {
    if (w.find(substring) != std::string::npos) out.insert(w);
  }
  return out;
}

}  // namespace subsse
