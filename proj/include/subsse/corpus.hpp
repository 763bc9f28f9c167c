#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "subsse/client.hpp"

namespace subsse {

/// One keyword per line; blank lines skipped, trailing CR stripped.
/// Throws SeparatorInKeyword, DuplicateKeyword or StorageError.
std::vector<std::string> read_dictionary(const std::filesystem::path& path);
std::vector<std::string> parse_dictionary(std::string_view text);

/// Whitespace/punctuation-delimited tokens of `content` that are dictionary
/// keywords, deduplicated, in first-seen order.
std::vector<std::string> keywords_in(std::string_view content, const std::vector<std::string>& dictionary);

struct Corpus {
  std::vector<PlainFile> files;
  std::map<std::string, std::vector<std::string>> postings;
  /// Opaque id -> file name.
  std::map<std::string, std::string> names;
};

/// Regular files of `dir` in name order. Ids are opaque: hex of a keyed
/// PRF of the file name, so names never reach the server.
Corpus scan_files(const std::filesystem::path& dir, const std::vector<std::string>& dictionary, const KeyBundle& keys);

}  // namespace subsse
