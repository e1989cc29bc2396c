#include "colo/core/hash.hpp"

namespace colo {

Scalar hash_to_scalar(ByteView transcript) {
  static constexpr std::string_view kTag = "colo/hash-to-scalar/v1";
  crypto_hash_sha512_state st;
  crypto_hash_sha512_init(&st);
  crypto_hash_sha512_update(&st, reinterpret_cast<const unsigned char*>(kTag.data()),
                            kTag.size());
  crypto_hash_sha512_update(&st, transcript.data(), transcript.size());
  std::array<std::uint8_t, 64> out{};
  crypto_hash_sha512_final(&st, out.data());
  return Scalar::reduce(out);
}

Digest hash_parts(std::initializer_list<ByteView> parts) {
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, 32);
  for (ByteView part : parts) {
    std::uint8_t len[8];
    store_u64_le(len, part.size());
    crypto_generichash_update(&st, len, sizeof(len));
    crypto_generichash_update(&st, part.data(), part.size());
  }
  Digest out{};
  crypto_generichash_final(&st, out.data(), out.size());
  return out;
}

Transcript::Transcript(std::string_view domain) {
  crypto_hash_sha512_init(&st_);
  append(domain);
}

Transcript& Transcript::append(ByteView data) {
  std::uint8_t len[8];
  store_u64_le(len, data.size());
  crypto_hash_sha512_update(&st_, len, sizeof(len));
  crypto_hash_sha512_update(&st_, data.data(), data.size());
  return *this;
}

Transcript& Transcript::append_u64(std::uint64_t v) {
  std::uint8_t b[8];
  store_u64_le(b, v);
  return append(ByteView(b, 8));
}

Transcript& Transcript::append_point(const GroupElement& p) {
  auto enc = p.encode();
  return append(enc);
}

std::array<std::uint8_t, 64> Transcript::digest() const {
  crypto_hash_sha512_state copy = st_;
  std::array<std::uint8_t, 64> out{};
  crypto_hash_sha512_final(&copy, out.data());
  return out;
}

Scalar Transcript::challenge_scalar() const { return Scalar::reduce(digest()); }

unsigned __int128 Transcript::challenge128() const {
  auto d = digest();
  unsigned __int128 lo = load_u64_le(d.data());
  unsigned __int128 hi = load_u64_le(d.data() + 8);
  return lo | (hi << 64);
}

}  // namespace colo
