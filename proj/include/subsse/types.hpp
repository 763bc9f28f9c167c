#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#ifndef SUBSSE_SEPARATOR
#define SUBSSE_SEPARATOR 0x23
#endif

namespace subsse {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Byte joining dictionary keywords into the dictionary string. Keywords,
/// query substrings and inserted keywords must never contain it.
inline constexpr char kSeparator = static_cast<char>(SUBSSE_SEPARATOR);

enum class ErrorCode {
  DuplicateKeyword,
  SeparatorInKeyword,
  SeparatorInQuery,
  EmptyQuery,
  EmptyKeyword,
  WeakParameter,
  DecryptionFailure,
  MalformedRequest,
  CounterConflict,
  ValidationError,
  StorageError,
  NotInitialized,
  UnknownFileId,
  TracingDisabled,
  RevokedKeyword,
  ServerUnreachable,
  TargetUnachievable,
  PortInUse,
  Usage,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Fixed-width PRF output. Widths are whole bytes, at most 512 bits.
class PathLabel {
 public:
  static constexpr std::size_t kMaxBytes = 64;

  PathLabel() = default;
  explicit PathLabel(ByteView bytes) {
    if (bytes.empty() || bytes.size() > kMaxBytes) {
      throw Error(ErrorCode::MalformedRequest, "label width out of range");
    }
    size_ = static_cast<std::uint8_t>(bytes.size());
    std::copy(bytes.begin(), bytes.end(), bytes_.begin());
  }

  std::size_t size() const noexcept { return size_; }
  std::size_t bits() const noexcept { return std::size_t{size_} * 8; }
  bool empty() const noexcept { return size_ == 0; }
  ByteView bytes() const noexcept { return {bytes_.data(), size_}; }

  std::string hex() const;
  static PathLabel from_hex(std::string_view hex);

  /// PRF outputs are uniform, so the leading word is a good hash.
  std::size_t hash() const noexcept {
    std::size_t h = 0;
    std::memcpy(&h, bytes_.data(), sizeof(h));
    return h;
  }

  friend bool operator==(const PathLabel& a, const PathLabel& b) noexcept {
    return a.size_ == b.size_ && std::equal(a.bytes_.begin(), a.bytes_.begin() + a.size_, b.bytes_.begin());
  }
  friend bool operator<(const PathLabel& a, const PathLabel& b) noexcept {
    return std::lexicographical_compare(a.bytes_.begin(), a.bytes_.begin() + a.size_, b.bytes_.begin(),
                                        b.bytes_.begin() + b.size_);
  }

 private:
  std::array<std::uint8_t, kMaxBytes> bytes_{};
  std::uint8_t size_ = 0;
};

struct PathLabelHash {
  std::size_t operator()(const PathLabel& l) const noexcept { return l.hash(); }
};

/// Randomized authenticated encryption of a keyword (or of any other
/// client plaintext). Opaque to the server.
using Ciphertext = Bytes;

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }
inline std::string to_string(ByteView b) { return std::string(b.begin(), b.end()); }

/// Throws SeparatorInKeyword / EmptyKeyword.
void validate_keyword(std::string_view keyword);
/// Throws SeparatorInQuery / EmptyQuery.
void validate_query(std::string_view substring);

}  // namespace subsse
