#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "colo/core/bytes.hpp"
#include "colo/core/prg.hpp"
#include "colo/mixnet/dead_drop.hpp"

namespace colo {

// Layer: ephemeral X25519 key (32) | ChaCha20-Poly1305 ciphertext. A route
// layer's plaintext is u8 1 | u32 next server | inner onion; the drop layer's
// is u8 2 | drop id (16) | payload of exactly slot_size bytes.
inline constexpr std::size_t kLayerOverhead = 32 + 16;
inline constexpr std::size_t kRouteHeader = 1 + 4;
inline constexpr std::size_t kDropHeader = 1 + 16;
inline constexpr std::size_t kReplyOverhead = 16;

using LayerKey = std::array<std::uint8_t, 32>;

struct RouteHop {
  std::uint32_t server = 0;
  X25519Public pk{};
};

// Size of an onion with route_layers route layers above the drop layer.
std::size_t onion_size(std::size_t slot_size, std::size_t route_layers);
// Size of a reply after `layers` servers sealed it.
std::size_t reply_size(std::size_t slot_size, std::size_t layers);

struct BuiltOnion {
  Bytes data;
  // Reply keys from the first hop to the drop host; the reply is opened in
  // this order.
  std::vector<LayerKey> reply_keys;
};

// Enc_{route[0]}(... Enc_{route[m-1]}(Enc_{drop_host}(drop id, payload))).
// Throws kInvalidArgument when payload exceeds slot_size; shorter payloads
// are zero padded.
BuiltOnion build_onion(ByteView payload, std::span<const RouteHop> route,
                       const RouteHop& drop_host, const DeadDrop& drop, std::size_t slot_size,
                       Prg& prg);

struct PeeledLayer {
  enum class Kind : std::uint8_t { kForward, kDrop };
  Kind kind = Kind::kForward;
  std::uint32_t next = 0;
  std::array<std::uint8_t, 16> drop_id{};
  // The inner onion for kForward, the slot payload for kDrop.
  Bytes inner;
  LayerKey reply_key{};
};

// nullopt when the layer does not decrypt or parse.
std::optional<PeeledLayer> peel_layer(ByteView onion, const X25519KeyPair& server);

Bytes seal_reply(ByteView reply, const LayerKey& key);
// Removes every layer in order; nullopt if any layer fails.
std::optional<Bytes> open_reply(ByteView reply, std::span<const LayerKey> keys);

}  // namespace colo
