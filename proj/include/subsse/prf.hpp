#pragma once

#include <cstddef>
#include <cstdint>

#include "subsse/types.hpp"

namespace subsse {

/// Native output width of the PRF family.
inline constexpr std::size_t kNativePrfBits = 256;
inline constexpr std::size_t kMaxPrfBits = 512;

/// Keyed PRF: HMAC-SHA-256 for widths up to 256 bits, HMAC-SHA-512 up to
/// 512, truncated to `gamma_bits` (a multiple of 8).
PathLabel prf(ByteView key, ByteView message, std::size_t gamma_bits = kNativePrfBits);

inline PathLabel prf(ByteView key, std::string_view message, std::size_t gamma_bits = kNativePrfBits) {
  return prf(key, ByteView(reinterpret_cast<const std::uint8_t*>(message.data()), message.size()), gamma_bits);
}

/// Bytes from the OS-seeded CSPRNG.
Bytes random_bytes(std::size_t n);

/// 8-byte big-endian counter encoding used for posting lookup keys.
Bytes encode_counter(std::uint64_t counter);

}  // namespace subsse
