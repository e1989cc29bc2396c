#include "colo/mixnet/onion.hpp"

#include <sodium.h>

#include <algorithm>

#include "colo/core/error.hpp"
#include "colo/core/hash.hpp"

namespace colo {
namespace {

constexpr std::uint8_t kForwardTag = 1;
constexpr std::uint8_t kDropTag = 2;
constexpr std::array<std::uint8_t, crypto_aead_chacha20poly1305_IETF_NPUBBYTES> kNonce{};

struct LayerKeys {
  LayerKey forward;
  LayerKey reply;
};

LayerKeys layer_keys(ByteView dh, ByteView epk, ByteView pk) {
  return {hash_parts({as_bytes("colo/onion/layer/v1"), dh, epk, pk}),
          hash_parts({as_bytes("colo/onion/reply/v1"), dh, epk, pk})};
}

// Wraps plaintext for one hop; keys are single-use so the nonce is fixed.
Bytes wrap(ByteView plaintext, const X25519Public& pk, Prg& prg, LayerKey& reply_key) {
  X25519KeyPair eph = x25519_keypair(prg);
  auto dh = x25519_shared(eph.sk, pk);
  LayerKeys keys = layer_keys(dh, eph.pk, pk);
  reply_key = keys.reply;
  Bytes out(kLayerOverhead + plaintext.size());
  std::copy(eph.pk.begin(), eph.pk.end(), out.begin());
  unsigned long long clen = 0;
  crypto_aead_chacha20poly1305_ietf_encrypt(out.data() + 32, &clen, plaintext.data(),
                                            plaintext.size(), nullptr, 0, nullptr,
                                            kNonce.data(), keys.forward.data());
  return out;
}

}  // namespace

std::size_t onion_size(std::size_t slot_size, std::size_t route_layers) {
  return slot_size + kDropHeader + kLayerOverhead + route_layers * (kRouteHeader + kLayerOverhead);
}

std::size_t reply_size(std::size_t slot_size, std::size_t layers) {
  return slot_size + layers * kReplyOverhead;
}

BuiltOnion build_onion(ByteView payload, std::span<const RouteHop> route,
                       const RouteHop& drop_host, const DeadDrop& drop, std::size_t slot_size,
                       Prg& prg) {
  require(payload.size() <= slot_size, ErrorCode::kInvalidArgument,
          "payload of " + std::to_string(payload.size()) + " bytes exceeds the " +
              std::to_string(slot_size) + "-byte slot");
  BuiltOnion out;
  out.reply_keys.resize(route.size() + 1);

  Bytes plain;
  plain.reserve(kDropHeader + slot_size);
  plain.push_back(kDropTag);
  plain.insert(plain.end(), drop.id.begin(), drop.id.end());
  plain.insert(plain.end(), payload.begin(), payload.end());
  plain.resize(kDropHeader + slot_size, 0);
  Bytes onion = wrap(plain, drop_host.pk, prg, out.reply_keys.back());

  for (std::size_t i = route.size(); i-- > 0;) {
    std::uint32_t next = i + 1 < route.size() ? route[i + 1].server : drop_host.server;
    ByteWriter w;
    w.u8(kForwardTag);
    w.u32(next);
    w.raw(onion);
    onion = wrap(w.bytes(), route[i].pk, prg, out.reply_keys[i]);
  }
  out.data = std::move(onion);
  return out;
}

std::optional<PeeledLayer> peel_layer(ByteView onion, const X25519KeyPair& server) {
  if (onion.size() < kLayerOverhead + 1) return std::nullopt;
  X25519Public epk{};
  std::copy(onion.begin(), onion.begin() + 32, epk.begin());
  std::array<std::uint8_t, 32> dh{};
  if (crypto_scalarmult(dh.data(), server.sk.data(), epk.data()) != 0) return std::nullopt;
  LayerKeys keys = layer_keys(dh, epk, server.pk);

  Bytes plain(onion.size() - kLayerOverhead);
  unsigned long long plen = 0;
  if (crypto_aead_chacha20poly1305_ietf_decrypt(plain.data(), &plen, nullptr, onion.data() + 32,
                                                onion.size() - 32, nullptr, 0, kNonce.data(),
                                                keys.forward.data()) != 0) {
    return std::nullopt;
  }
  PeeledLayer out;
  out.reply_key = keys.reply;
  if (plain[0] == kForwardTag && plain.size() >= kRouteHeader) {
    out.kind = PeeledLayer::Kind::kForward;
    ByteReader r(ByteView(plain).subspan(1, 4));
    out.next = r.u32();
    out.inner.assign(plain.begin() + kRouteHeader, plain.end());
    return out;
  }
  if (plain[0] == kDropTag && plain.size() >= kDropHeader) {
    out.kind = PeeledLayer::Kind::kDrop;
    std::copy(plain.begin() + 1, plain.begin() + kDropHeader, out.drop_id.begin());
    out.inner.assign(plain.begin() + kDropHeader, plain.end());
    return out;
  }
  return std::nullopt;
}

Bytes seal_reply(ByteView reply, const LayerKey& key) {
  Bytes out(reply.size() + kReplyOverhead);
  unsigned long long clen = 0;
  crypto_aead_chacha20poly1305_ietf_encrypt(out.data(), &clen, reply.data(), reply.size(), nullptr,
                                            0, nullptr, kNonce.data(), key.data());
  return out;
}

std::optional<Bytes> open_reply(ByteView reply, std::span<const LayerKey> keys) {
  Bytes cur(reply.begin(), reply.end());
  for (const LayerKey& key : keys) {
    if (cur.size() < kReplyOverhead) return std::nullopt;
    Bytes plain(cur.size() - kReplyOverhead);
    unsigned long long plen = 0;
    if (crypto_aead_chacha20poly1305_ietf_decrypt(plain.data(), &plen, nullptr, cur.data(),
                                                  cur.size(), nullptr, 0, kNonce.data(),
                                                  key.data()) != 0) {
      return std::nullopt;
    }
    cur = std::move(plain);
  }
  return cur;
}

}  // namespace colo
