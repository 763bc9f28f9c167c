#pragma once

#include <cstdint>
#include <filesystem>

#include "subsse/prf.hpp"
#include "subsse/types.hpp"

namespace subsse {

/// Client-held secrets. Never leaves the client process except through the
/// owner-only key file.
struct KeyBundle {
  Bytes k1;  // path-label PRF key, lambda bits
  Bytes k2;  // authenticated cipher key, 256 bits
  Bytes k3;  // keyword-to-file PRF key, lambda bits
  unsigned lambda = 128;
  unsigned gamma = 256;

  friend bool operator==(const KeyBundle&, const KeyBundle&) = default;
};

inline constexpr std::size_t kSkeKeyBytes = 32;
inline constexpr std::size_t kSkeNonceBytes = 12;
inline constexpr std::size_t kSkeTagBytes = 16;

/// Label width keeping expected collisions among `expected_index_size`
/// labels below 2^-lambda: lambda + 2*ceil(log2(m)), rounded up to the
/// PRF's native width (256, else 512).
unsigned gamma_for(unsigned lambda, std::uint64_t expected_index_size);

/// Throws WeakParameter for lambda < 128, ValidationError for lambda
/// outside {128, 256}.
KeyBundle keygen(unsigned lambda, std::uint64_t expected_index_size);

/// AES-256-GCM with a fresh 96-bit nonce; output is nonce || body || tag.
Ciphertext ske_encrypt(ByteView key, ByteView plaintext);
/// Throws DecryptionFailure when the tag does not verify.
Bytes ske_decrypt(ByteView key, ByteView ciphertext);

inline Ciphertext ske_encrypt(ByteView key, std::string_view plaintext) {
  return ske_encrypt(key, ByteView(reinterpret_cast<const std::uint8_t*>(plaintext.data()), plaintext.size()));
}

/// Versioned binary key blob: magic, version, lambda, gamma, then
/// length-prefixed k1, k2, k3.
Bytes serialize_keys(const KeyBundle& keys);
/// Throws ValidationError on a bad magic, version or layout.
KeyBundle parse_keys(ByteView blob);

/// Written with owner-only permissions.
void write_key_file(const std::filesystem::path& path, const KeyBundle& keys);
KeyBundle read_key_file(const std::filesystem::path& path);

}  // namespace subsse
