#include "subsse/prf.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>

namespace subsse {

PathLabel prf(ByteView key, ByteView message, std::size_t gamma_bits) {
  if (gamma_bits == 0 || gamma_bits % 8 != 0 || gamma_bits > kMaxPrfBits) {
    throw Error(ErrorCode::ValidationError, "unsupported PRF width");
  }
  const EVP_MD* md = gamma_bits <= 256 ? EVP_sha256() : EVP_sha512();
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (HMAC(md, key.data(), static_cast<int>(key.size()), message.data(), message.size(), out, &len) == nullptr) {
    throw std::runtime_error("HMAC failed");
  }
  return PathLabel(ByteView(out, gamma_bits / 8));
}

Bytes random_bytes(std::size_t n) {
  Bytes out(n);
  if (n > 0 && RAND_bytes(out.data(), static_cast<int>(n)) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
  return out;
}

Bytes encode_counter(std::uint64_t counter) {
  Bytes out(8);
  for (int i = 7; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(counter & 0xff);
    counter >>= 8;
  }
  return out;
}

}  // namespace subsse
