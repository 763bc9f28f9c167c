#include "subsse/secure_index.hpp"

#include "subsse/encoding.hpp"

namespace subsse {

std::size_t InsertRequest::label_count() const noexcept {
  std::size_t n = 0;
  for (const auto& t : suffix_tokens) n += t.labels.size();
  return n;
}

void InsertRequest::validate(std::size_t gamma_bits) const {
  const std::size_t z = suffix_tokens.size();
  if (z == 0) throw Error(ErrorCode::MalformedRequest, "insert request without suffix tokens");
  if (enc_keyword.empty()) throw Error(ErrorCode::MalformedRequest, "insert request without keyword ciphertext");
  for (std::size_t k = 0; k < z; ++k) {
    // Suffix i = k + 1 carries z - i + 3 labels.
    if (suffix_tokens[k].labels.size() != z - k + 2) {
      throw Error(ErrorCode::MalformedRequest, "suffix token " + std::to_string(k) + " has wrong length");
    }
    for (const auto& label : suffix_tokens[k].labels) {
      if (label.bits() != gamma_bits) throw Error(ErrorCode::MalformedRequest, "label width mismatch");
    }
  }
}

SecureIndex::SecureIndex(std::size_t gamma_bits) : gamma_bits_(gamma_bits) {
  if (gamma_bits == 0 || gamma_bits % 8 != 0 || gamma_bits > PathLabel::kMaxBytes * 8) {
    throw Error(ErrorCode::ValidationError, "unsupported label width");
  }
  nodes_.emplace_back();
}

void SecureIndex::check_label(const PathLabel& label) const {
  if (label.bits() != gamma_bits_) throw Error(ErrorCode::ValidationError, "label width mismatch");
}

NodeId SecureIndex::add_node(NodeId parent, const PathLabel& label, Ciphertext enc_keyword) {
  if (parent >= nodes_.size()) throw Error(ErrorCode::ValidationError, "unknown parent node");
  check_label(label);
  const NodeId id = nodes_.size();
  if (!child_index_.emplace(ChildKey{parent, label}, id).second) {
    throw Error(ErrorCode::ValidationError, "duplicate child label");
  }
  nodes_.push_back(Node{parent, label, std::move(enc_keyword), {}});
  nodes_[parent].children.push_back(id);
  return id;
}

NodeId SecureIndex::child(NodeId parent, const PathLabel& label) const {
  const auto it = child_index_.find(ChildKey{parent, label});
  return it == child_index_.end() ? npos : it->second;
}

EncryptedSearchOutcome SecureIndex::search(const SubstringQueryToken& token) const {
  EncryptedSearchOutcome out;
  NodeId node = kRoot;
  const auto& labels = token.labels;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const NodeId next = child(node, labels[i]);
    if (next == npos) break;
    out.path.push_back(next);
    ++out.matched_depth;
    if (i + 1 == labels.size()) {
      std::vector<NodeId> stack{next};
      while (!stack.empty()) {
        const NodeId x = stack.back();
        stack.pop_back();
        out.l2.push_back({x, nodes_[x].enc_keyword});
        const auto& children = nodes_[x].children;
        stack.insert(stack.end(), children.rbegin(), children.rend());
      }
    } else {
      out.l1.push_back({next, nodes_[next].enc_keyword});
    }
    node = next;
  }
  return out;
}

InsertOutcome SecureIndex::apply_insert(const InsertRequest& request) {
  request.validate(gamma_bits_);
  InsertOutcome out;
  // Later suffixes may attach below leaves added for earlier ones, so the
  // walk is sequential; a rejected request is undone before rethrowing.
  try {
    apply_tokens(request, out);
  } catch (...) {
    for (auto it = out.added.rbegin(); it != out.added.rend(); ++it) {
      const Node& n = nodes_[*it];
      child_index_.erase(ChildKey{n.parent, n.label});
      nodes_[n.parent].children.pop_back();
      nodes_.pop_back();
    }
    throw;
  }
  return out;
}

void SecureIndex::apply_tokens(const InsertRequest& request, InsertOutcome& out) {
  for (const auto& token : request.suffix_tokens) {
    NodeId node = kRoot;
    std::size_t h = 0;
    while (h < token.labels.size()) {
      const NodeId next = child(node, token.labels[h]);
      if (next == npos) break;
      out.path.push_back(next);
      node = next;
      ++h;
    }
    // The last label comes from fresh randomness; matching it means a
    // label collision, which the width choice makes negligible.
    if (h == token.labels.size()) throw Error(ErrorCode::MalformedRequest, "insertion path fully represented");
    out.added.push_back(add_node(node, token.labels[h], request.enc_keyword));
    ++out.nodes_added;
  }
}

nlohmann::json SecureIndex::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  rows.get_ref<nlohmann::json::array_t&>().reserve(nodes_.size());
  rows.push_back({0, nullptr, "", ""});
  for (NodeId id = 1; id < nodes_.size(); ++id) {
    const Node& n = nodes_[id];
    rows.push_back({id, n.parent, n.label.hex(), base64_encode(n.enc_keyword)});
  }
  return {{"version", kFormatVersion}, {"gamma", gamma_bits_}, {"node_count", nodes_.size()}, {"nodes", std::move(rows)}};
}

SecureIndex SecureIndex::from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kFormatVersion) throw Error(ErrorCode::ValidationError, "unsupported index version");
    SecureIndex idx(j.at("gamma").get<std::size_t>());
    const auto& rows = j.at("nodes");
    const auto declared = j.at("node_count").get<std::size_t>();
    if (!rows.is_array() || rows.size() != declared || rows.empty()) {
      throw Error(ErrorCode::ValidationError, "node table does not match node_count");
    }
    if (rows[0].at(0).get<NodeId>() != kRoot || !rows[0].at(1).is_null()) {
      throw Error(ErrorCode::ValidationError, "first row must be the root");
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& row = rows[i];
      if (row.at(0).get<NodeId>() != i) throw Error(ErrorCode::ValidationError, "node ids must be dense and ordered");
      const auto parent = row.at(1).get<NodeId>();
      if (parent >= i) throw Error(ErrorCode::ValidationError, "parent must precede child");
      idx.add_node(parent, PathLabel::from_hex(row.at(2).get<std::string>()),
                   base64_decode(row.at(3).get<std::string>()));
    }
    return idx;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("malformed index: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ValidationError) throw;
    throw Error(ErrorCode::ValidationError, e.what());
  }
}

}  // namespace subsse
