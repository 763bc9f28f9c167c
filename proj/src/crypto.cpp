#include "subsse/crypto.hpp"

#include <openssl/evp.h>

#include <bit>
#include <fstream>
#include <memory>

namespace subsse {

namespace {

constexpr std::uint8_t kKeyMagic[8] = {'S', 'U', 'B', 'S', 'S', 'E', 'K', 'Y'};
constexpr std::uint16_t kKeyVersion = 1;

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>((data_[pos_] << 8) | data_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  Bytes bytes(std::size_t n) {
    need(n);
    Bytes out(data_.begin() + static_cast<std::ptrdiff_t>(pos_), data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return out;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > data_.size()) throw Error(ErrorCode::ValidationError, "truncated key blob");
  }
  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace

unsigned gamma_for(unsigned lambda, std::uint64_t expected_index_size) {
  const std::uint64_t m = expected_index_size < 2 ? 1 : expected_index_size;
  // ceil(log2(m)) = bit width of (m - 1).
  const unsigned log_m = static_cast<unsigned>(std::bit_width(m - 1));
  const unsigned required = lambda + 2 * log_m;
  if (required <= kNativePrfBits) return static_cast<unsigned>(kNativePrfBits);
  if (required <= kMaxPrfBits) return static_cast<unsigned>(kMaxPrfBits);
  throw Error(ErrorCode::ValidationError, "collision bound exceeds the widest PRF output");
}

KeyBundle keygen(unsigned lambda, std::uint64_t expected_index_size) {
  if (lambda < 128) throw Error(ErrorCode::WeakParameter, "security parameter below 128 bits");
  if (lambda != 128 && lambda != 256) throw Error(ErrorCode::ValidationError, "security parameter must be 128 or 256");
  KeyBundle keys;
  keys.lambda = lambda;
  keys.gamma = gamma_for(lambda, expected_index_size);
  keys.k1 = random_bytes(lambda / 8);
  keys.k2 = random_bytes(kSkeKeyBytes);
  keys.k3 = random_bytes(lambda / 8);
  return keys;
}

Ciphertext ske_encrypt(ByteView key, ByteView plaintext) {
  if (key.size() != kSkeKeyBytes) throw Error(ErrorCode::ValidationError, "cipher key must be 256 bits");
  Ciphertext out(kSkeNonceBytes + plaintext.size() + kSkeTagBytes);
  const Bytes nonce = random_bytes(kSkeNonceBytes);
  std::copy(nonce.begin(), nonce.end(), out.begin());

  CipherCtx ctx(EVP_CIPHER_CTX_new());
  int len = 0;
  if (!ctx || EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()) != 1 ||
      EVP_EncryptUpdate(ctx.get(), out.data() + kSkeNonceBytes, &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1 ||
      EVP_EncryptFinal_ex(ctx.get(), out.data() + kSkeNonceBytes + len, &len) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, static_cast<int>(kSkeTagBytes),
                          out.data() + kSkeNonceBytes + plaintext.size()) != 1) {
    throw std::runtime_error("AES-GCM encryption failed");
  }
  return out;
}

Bytes ske_decrypt(ByteView key, ByteView ciphertext) {
  if (key.size() != kSkeKeyBytes) throw Error(ErrorCode::ValidationError, "cipher key must be 256 bits");
  if (ciphertext.size() < kSkeNonceBytes + kSkeTagBytes) {
    throw Error(ErrorCode::DecryptionFailure, "ciphertext too short");
  }
  const std::size_t body = ciphertext.size() - kSkeNonceBytes - kSkeTagBytes;
  Bytes out(body);
  Bytes tag(ciphertext.end() - kSkeTagBytes, ciphertext.end());

  CipherCtx ctx(EVP_CIPHER_CTX_new());
  int len = 0;
  if (!ctx || EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), ciphertext.data()) != 1 ||
      EVP_DecryptUpdate(ctx.get(), out.data(), &len, ciphertext.data() + kSkeNonceBytes, static_cast<int>(body)) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, static_cast<int>(kSkeTagBytes), tag.data()) != 1) {
    throw std::runtime_error("AES-GCM decryption setup failed");
  }
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &len) != 1) {
    throw Error(ErrorCode::DecryptionFailure, "authentication tag mismatch");
  }
  return out;
}

Bytes serialize_keys(const KeyBundle& keys) {
  Bytes out(std::begin(kKeyMagic), std::end(kKeyMagic));
  put_u16(out, kKeyVersion);
  put_u16(out, static_cast<std::uint16_t>(keys.lambda));
  put_u16(out, static_cast<std::uint16_t>(keys.gamma));
  for (const Bytes* k : {&keys.k1, &keys.k2, &keys.k3}) {
    put_u16(out, static_cast<std::uint16_t>(k->size()));
    out.insert(out.end(), k->begin(), k->end());
  }
  return out;
}

KeyBundle parse_keys(ByteView blob) {
  Reader in(blob);
  const Bytes magic = in.bytes(sizeof(kKeyMagic));
  if (!std::equal(magic.begin(), magic.end(), std::begin(kKeyMagic))) {
    throw Error(ErrorCode::ValidationError, "not a key file");
  }
  if (in.u16() != kKeyVersion) throw Error(ErrorCode::ValidationError, "unsupported key file version");
  KeyBundle keys;
  keys.lambda = in.u16();
  keys.gamma = in.u16();
  keys.k1 = in.bytes(in.u16());
  keys.k2 = in.bytes(in.u16());
  keys.k3 = in.bytes(in.u16());
  if (!in.done()) throw Error(ErrorCode::ValidationError, "trailing bytes in key file");
  if (keys.k2.size() != kSkeKeyBytes || keys.k1.size() * 8 != keys.lambda || keys.k3.size() * 8 != keys.lambda ||
      keys.gamma % 8 != 0 || keys.gamma == 0 || keys.gamma > kMaxPrfBits) {
    throw Error(ErrorCode::ValidationError, "inconsistent key file");
  }
  return keys;
}

void write_key_file(const std::filesystem::path& path, const KeyBundle& keys) {
  namespace fs = std::filesystem;
  const Bytes blob = serialize_keys(keys);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::StorageError, "cannot write " + tmp.string());
    fs::permissions(tmp, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace);
    out.write(reinterpret_cast<const char*>(blob.data()), static_cast<std::streamsize>(blob.size()));
    if (!out) throw Error(ErrorCode::StorageError, "short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

KeyBundle read_key_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::StorageError, "cannot read " + path.string());
  const Bytes blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_keys(blob);
}

}  // namespace subsse
