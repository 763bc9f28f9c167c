#include "subsse/file_index.hpp"

#include <map>

#include "subsse/encoding.hpp"
#include "subsse/prf.hpp"

namespace subsse {

PathLabel posting_key(ByteView kw_key, std::uint64_t counter, std::size_t gamma_bits) {
  const Bytes c = encode_counter(counter);
  return prf(kw_key, ByteView(c), gamma_bits);
}

KeywordFileIndex::KeywordFileIndex(std::size_t gamma_bits) : gamma_bits_(gamma_bits) {
  if (gamma_bits == 0 || gamma_bits % 8 != 0 || gamma_bits > PathLabel::kMaxBytes * 8) {
    throw Error(ErrorCode::ValidationError, "unsupported key width");
  }
}

void KeywordFileIndex::put(const PathLabel& key, Ciphertext value) {
  if (key.bits() != gamma_bits_) throw Error(ErrorCode::ValidationError, "key width mismatch");
  if (!entries_.emplace(key, std::move(value)).second) {
    throw Error(ErrorCode::CounterConflict, "posting slot already occupied");
  }
}

std::vector<Ciphertext> KeywordFileIndex::lookup(ByteView kw_key) const {
  std::vector<Ciphertext> out;
  for (std::uint64_t c = 1;; ++c) {
    const PathLabel key = posting_key(kw_key, c, gamma_bits_);
    const auto it = entries_.find(key);
    if (it == entries_.end()) break;
    if (revoked_.count(key) == 0) out.push_back(it->second);
  }
  return out;
}

void KeywordFileIndex::insert_posting(ByteView kw_key, std::uint64_t counter, Ciphertext enc_id) {
  if (counter == 0) throw Error(ErrorCode::MalformedRequest, "posting counters start at 1");
  if (counter > 1 && !contains(posting_key(kw_key, counter - 1, gamma_bits_))) {
    throw Error(ErrorCode::CounterConflict, "posting counter would leave a gap");
  }
  put(posting_key(kw_key, counter, gamma_bits_), std::move(enc_id));
}

void KeywordFileIndex::delete_posting(const PathLabel& key) {
  if (key.bits() != gamma_bits_) throw Error(ErrorCode::MalformedRequest, "key width mismatch");
  revoked_.insert(key);
}

nlohmann::json KeywordFileIndex::to_json() const {
  std::map<std::string, const Ciphertext*> sorted;
  for (const auto& [key, value] : entries_) sorted.emplace(key.hex(), &value);
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [key, value] : sorted) entries.push_back({key, base64_encode(*value)});
  nlohmann::json revoked = nlohmann::json::array();
  for (const auto& key : revoked_) revoked.push_back(key.hex());
  return {{"version", kFormatVersion}, {"gamma", gamma_bits_}, {"entries", std::move(entries)}, {"revoked", std::move(revoked)}};
}

KeywordFileIndex KeywordFileIndex::from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kFormatVersion) {
      throw Error(ErrorCode::ValidationError, "unsupported file index version");
    }
    KeywordFileIndex idx(j.at("gamma").get<std::size_t>());
    for (const auto& row : j.at("entries")) {
      idx.put(PathLabel::from_hex(row.at(0).get<std::string>()), base64_decode(row.at(1).get<std::string>()));
    }
    for (const auto& key : j.at("revoked")) idx.delete_posting(PathLabel::from_hex(key.get<std::string>()));
    return idx;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("malformed file index: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ValidationError) throw;
    throw Error(ErrorCode::ValidationError, e.what());
  }
}

}  // namespace subsse
