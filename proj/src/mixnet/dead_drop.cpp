#include "colo/mixnet/dead_drop.hpp"

#include <sodium.h>

#include <algorithm>
#include <string>

#include "colo/core/error.hpp"
#include "colo/core/hash.hpp"

namespace colo {

X25519KeyPair x25519_keypair(Prg& prg) {
  X25519KeyPair kp;
  prg.fill(kp.sk);
  if (crypto_scalarmult_base(kp.pk.data(), kp.sk.data()) != 0) {
    fail(ErrorCode::kCrypto, "x25519 base");
  }
  return kp;
}

std::array<std::uint8_t, 32> x25519_shared(const X25519Secret& sk, const X25519Public& peer) {
  std::array<std::uint8_t, 32> out{};
  if (crypto_scalarmult(out.data(), sk.data(), peer.data()) != 0) {
    fail(ErrorCode::kCrypto, "x25519 shared secret is degenerate");
  }
  return out;
}

Seed edge_key(const X25519KeyPair& self, const X25519Public& peer) {
  auto dh = x25519_shared(self.sk, peer);
  const X25519Public& lo = std::min(self.pk, peer);
  const X25519Public& hi = std::max(self.pk, peer);
  return hash_parts({as_bytes("colo/edge-key/v1"), dh, lo, hi});
}

Seed self_slot_key(const Seed& device_seed, std::uint32_t slot) {
  return derive_seed(device_seed, "self-slot/" + std::to_string(slot));
}

DeadDrop derive_drop(const Seed& k, ByteView query_id, std::uint64_t round,
                     std::uint32_t server_count) {
  require(server_count > 0, ErrorCode::kInvalidArgument, "derive_drop needs servers");
  ByteWriter label;
  label.raw(as_bytes("colo/dead-drop/v1"));
  label.blob(query_id);
  label.u64(round);
  Bytes out = prg_expand(k, label.bytes(), 24);
  DeadDrop d;
  std::copy(out.begin(), out.begin() + 16, d.id.begin());
  d.server = static_cast<std::uint32_t>(load_u64_le(out.data() + 16) % server_count);
  return d;
}

}  // namespace colo
