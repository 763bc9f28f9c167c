#include "subsse/position_heap.hpp"

#include <cassert>
#include <cstdio>

namespace subsse {

std::string render_edge(unsigned char edge) {
  if (edge > 0x20 && edge < 0x7f) return std::string(1, static_cast<char>(edge));
  char buf[8];
  std::snprintf(buf, sizeof(buf), "\\x%02x", edge);
  return buf;
}

PositionHeap PositionHeap::build(std::string_view text) {
  PositionHeap heap;
  heap.text_.assign(text);
  heap.nodes_.reserve(text.size() + 1);
  heap.nodes_.emplace_back();

  const std::size_t m = text.size();
  for (std::size_t i = m; i >= 1; --i) {
    std::size_t node = kRoot;
    std::size_t j = i;  // 1-based index of the next unmatched symbol
    while (j <= m) {
      const std::size_t next = heap.child(node, static_cast<unsigned char>(text[j - 1]));
      if (next == npos) break;
      node = next;
      ++j;
    }
    // A whole suffix is never already present: deeper nodes belong to
    // later positions, whose paths end before the text does.
    assert(j <= m);
    Node leaf;
    leaf.edge = static_cast<unsigned char>(text[j - 1]);
    leaf.pos = i;
    leaf.parent = node;
    leaf.depth = heap.nodes_[node].depth + 1;
    const std::size_t id = heap.nodes_.size();
    heap.nodes_.push_back(std::move(leaf));
    heap.nodes_[node].children.emplace(heap.nodes_[id].edge, id);
  }
  return heap;
}

std::size_t PositionHeap::child(std::size_t node, unsigned char edge) const {
  const auto& children = nodes_[node].children;
  const auto it = children.find(edge);
  return it == children.end() ? npos : it->second;
}

std::string PositionHeap::path_of(std::size_t node) const {
  std::string path(nodes_[node].depth, '\0');
  for (std::size_t n = node; n != kRoot; n = nodes_[n].parent) {
    path[nodes_[n].depth - 1] = static_cast<char>(nodes_[n].edge);
  }
  return path;
}

PositionHeap::Candidates PositionHeap::search_candidates(std::string_view pattern) const {
  Candidates out;
  std::size_t node = kRoot;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const std::size_t next = child(node, static_cast<unsigned char>(pattern[i]));
    if (next == npos) break;
    if (i + 1 == pattern.size()) {
      std::vector<std::size_t> stack{next};
      while (!stack.empty()) {
        const std::size_t x = stack.back();
        stack.pop_back();
        out.l2.push_back(nodes_[x].pos);
        const auto& children = nodes_[x].children;
        for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(it->second);
      }
    } else {
      out.l1.push_back(nodes_[next].pos);
    }
    node = next;
  }
  return out;
}

std::set<std::size_t> PositionHeap::search(std::string_view pattern) const {
  Candidates candidates = search_candidates(pattern);
  std::set<std::size_t> out(candidates.l2.begin(), candidates.l2.end());
  for (const std::size_t i : candidates.l1) {
    // Candidates running past the end of the text cannot be occurrences.
    if (i - 1 + pattern.size() > text_.size()) continue;
    if (std::string_view(text_).substr(i - 1, pattern.size()) == pattern) out.insert(i);
  }
  return out;
}

std::string PositionHeap::dump() const {
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
    out += x == kRoot ? "-" : std::to_string(n.pos);
    out += '\n';
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(it->second);
  }
  return out;
}

}  // namespace subsse
