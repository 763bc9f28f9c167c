#include "subsse/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "subsse/dictionary_index.hpp"
#include "subsse/encoding.hpp"

namespace subsse {

namespace fs = std::filesystem;

std::vector<std::string> parse_dictionary(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.emplace_back(line);
    start = end + 1;
  }
  make_dictionary_string(out);  // validates
  return out;
}

std::vector<std::string> read_dictionary(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::StorageError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dictionary(ss.str());
}

std::vector<std::string> keywords_in(std::string_view content, const std::vector<std::string>& dictionary) {
  static constexpr std::string_view kDelims = " \t\r\n\f\v.,;:!?\"'()[]{}<>";
  const std::unordered_set<std::string_view> dict(dictionary.begin(), dictionary.end());
  std::vector<std::string> out;
  std::set<std::string_view> seen;
  std::size_t i = 0;
  while (i < content.size()) {
    i = content.find_first_not_of(kDelims, i);
    if (i == std::string_view::npos) break;
    std::size_t j = content.find_first_of(kDelims, i);
    if (j == std::string_view::npos) j = content.size();
    const std::string_view token = content.substr(i, j - i);
    if (dict.count(token) != 0 && seen.insert(token).second) out.emplace_back(token);
    i = j;
  }
  return out;
}

Corpus scan_files(const fs::path& dir, const std::vector<std::string>& dictionary, const KeyBundle& keys) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::StorageError, dir.string() + " is not a directory");
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());

  Corpus corpus;
  for (const auto& p : paths) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::StorageError, "cannot read " + p.string());
    const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::string name = p.filename().string();
    const PathLabel tag = prf(keys.k3, "file:" + name);
    const std::string id = hex_encode(tag.bytes().first(16));
    corpus.names.emplace(id, name);
    for (const auto& w : keywords_in(content, dictionary)) corpus.postings[w].push_back(id);
    corpus.files.push_back({id, Bytes(content.begin(), content.end())});
  }
  return corpus;
}

}  // namespace subsse
