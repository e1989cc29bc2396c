#pragma once

#include <array>
#include <cstdint>

#include "colo/core/bytes.hpp"
#include "colo/core/prg.hpp"

namespace colo {

inline constexpr std::size_t kX25519Bytes = 32;
using X25519Public = std::array<std::uint8_t, kX25519Bytes>;
using X25519Secret = std::array<std::uint8_t, kX25519Bytes>;

struct X25519KeyPair {
  X25519Public pk{};
  X25519Secret sk{};
};

X25519KeyPair x25519_keypair(Prg& prg);
// Throws kCrypto on a low-order peer key.
std::array<std::uint8_t, 32> x25519_shared(const X25519Secret& sk, const X25519Public& peer);

// Edge key: BLAKE2b over the DH secret and both public keys in sorted order,
// so both endpoints derive the same value.
Seed edge_key(const X25519KeyPair& self, const X25519Public& peer);
// Key of a padding slot, known only to its device.
Seed self_slot_key(const Seed& device_seed, std::uint32_t slot);

struct DeadDrop {
  std::array<std::uint8_t, 16> id{};
  std::uint32_t server = 0;

  friend bool operator==(const DeadDrop&, const DeadDrop&) = default;
};

// 24 bytes of prg_expand(k, "colo/dead-drop/v1" || query_id || round):
// the first 16 are the drop id, the last 8 pick the host server.
DeadDrop derive_drop(const Seed& k, ByteView query_id, std::uint64_t round,
                     std::uint32_t server_count);

}  // namespace colo
