#include "colo/ot/simplest_ot.hpp"

#include <sodium.h>

#include <cstring>

#include "colo/core/error.hpp"

namespace colo {
namespace {

using Key = std::array<std::uint8_t, 32>;

Key derive_key(const SessionId& sid, const GroupElement& s, const GroupElement& r,
               const GroupElement& shared) {
  auto es = s.encode();
  auto er = r.encode();
  auto ek = shared.encode();
  return hash_parts({as_bytes("colo/ot/v1/key"), sid, es, er, ek});
}

// Every slot has its own key, so a zero nonce is safe.
constexpr std::array<std::uint8_t, 12> kZeroNonce{};

std::array<std::uint8_t, 36> aead_ad(const SessionId& sid, std::size_t index) {
  std::array<std::uint8_t, 36> ad{};
  std::memcpy(ad.data(), sid.data(), sid.size());
  std::uint32_t i = static_cast<std::uint32_t>(index);
  for (int b = 0; b < 4; ++b) ad[32 + b] = static_cast<std::uint8_t>(i >> (8 * b));
  return ad;
}

std::array<std::uint8_t, kOtCiphertextSize> seal(const Key& key, const SessionId& sid,
                                                 std::size_t index, const OtPayload& p) {
  std::array<std::uint8_t, kOtPlaintextSize> pt{};
  store_u64_le(pt.data(), p.value.value);
  auto rb = p.randomness.to_bytes();
  std::memcpy(pt.data() + 8, rb.data(), rb.size());
  auto ad = aead_ad(sid, index);
  std::array<std::uint8_t, kOtCiphertextSize> ct{};
  unsigned long long clen = 0;
  crypto_aead_chacha20poly1305_ietf_encrypt(ct.data(), &clen, pt.data(), pt.size(), ad.data(),
                                            ad.size(), nullptr, kZeroNonce.data(), key.data());
  return ct;
}

}  // namespace

std::optional<OtPayload> ot_open_slot(const Key& key, const SessionId& sid, std::size_t index,
                                      const std::array<std::uint8_t, kOtCiphertextSize>& ct) {
  auto ad = aead_ad(sid, index);
  std::array<std::uint8_t, kOtPlaintextSize> pt{};
  unsigned long long plen = 0;
  if (crypto_aead_chacha20poly1305_ietf_decrypt(pt.data(), &plen, nullptr, ct.data(), ct.size(),
                                                ad.data(), ad.size(), kZeroNonce.data(),
                                                key.data()) != 0) {
    return std::nullopt;
  }
  auto r = Scalar::from_bytes(ByteView(pt.data() + 8, Scalar::kBytes));
  if (!r) return std::nullopt;
  return OtPayload{RingElement(load_u64_le(pt.data())), *r};
}

SessionId ot_session_id(ByteView query_id, ByteView edge_id, std::string_view role) {
  return hash_parts({as_bytes("colo/ot/v1/session"), query_id, edge_id, as_bytes(role)});
}

Bytes OtReceiverMsg::serialize() const {
  auto e = r.encode();
  return Bytes(e.begin(), e.end());
}

std::optional<OtReceiverMsg> OtReceiverMsg::deserialize(ByteView bytes) {
  auto p = GroupElement::decode(bytes);
  if (!p) return std::nullopt;
  return OtReceiverMsg{std::move(*p)};
}

Bytes OtSenderMsg::serialize() const {
  ByteWriter w;
  w.raw(s.encode());
  w.u32(static_cast<std::uint32_t>(ciphertexts.size()));
  for (const auto& ct : ciphertexts) w.raw(ct);
  return w.take();
}

std::optional<OtSenderMsg> OtSenderMsg::deserialize(ByteView bytes) {
  try {
    ByteReader in(bytes);
    auto s = GroupElement::decode(in.raw(GroupElement::kEncodedSize));
    if (!s) return std::nullopt;
    OtSenderMsg msg{std::move(*s), {}};
    std::uint32_t n = in.u32();
    if (static_cast<std::uint64_t>(n) * kOtCiphertextSize != in.remaining()) return std::nullopt;
    msg.ciphertexts.resize(n);
    for (auto& ct : msg.ciphertexts) ct = in.fixed<kOtCiphertextSize>();
    return msg;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::pair<OtSender, GroupElement> ot_sender_setup(Prg& prg, const SessionId& sid,
                                                  std::size_t n) {
  require(n >= 1, ErrorCode::kPrecondition, "OT needs at least one payload");
  OtSender sender;
  sender.n_ = n;
  do {
    sender.y_ = Scalar::random(prg);
  } while (sender.y_.is_zero());
  sender.s_ = GroupElement::mul_h(sender.y_);
  sender.t_ = sender.s_ * sender.y_;
  sender.sid_ = sid;
  GroupElement s = sender.s_;
  return {std::move(sender), std::move(s)};
}

std::pair<OtReceiver, OtReceiverMsg> ot_receive_request(const GroupElement& s,
                                                        std::size_t choice, std::size_t n,
                                                        Prg& prg, const SessionId& sid) {
  require(choice < n, ErrorCode::kPrecondition, "OT choice out of range");
  require(!s.is_identity(), ErrorCode::kProtocolAbort, "OT sender key is the identity");
  OtReceiver recv;
  Scalar x;
  do {
    x = Scalar::random(prg);
  } while (x.is_zero());
  GroupElement r = GroupElement::mul_h(x);
  if (choice > 0) r += s * Scalar::from_u64(choice);
  recv.s_ = s;
  recv.r_ = r;
  recv.key_ = derive_key(sid, s, r, s * x);
  recv.choice_ = choice;
  recv.n_ = n;
  recv.sid_ = sid;
  return {std::move(recv), OtReceiverMsg{std::move(r)}};
}

OtSenderMsg ot_send_payloads(OtSender& sender, const OtReceiverMsg& request,
                             std::span<const OtPayload> payloads) {
  require(!sender.used_, ErrorCode::kPrecondition, "OT sender state is single-use");
  require(payloads.size() == sender.n_, ErrorCode::kPrecondition,
          "OT payload count differs from the announced table length");
  require(!request.r.is_identity(), ErrorCode::kProtocolAbort, "OT request is the identity");
  sender.used_ = true;

  // Key i uses y*R - i*T.
  std::vector<GroupElement> shared(payloads.size());
  shared[0] = request.r * sender.y_;
  for (std::size_t i = 1; i < payloads.size(); ++i) shared[i] = shared[i - 1] - sender.t_;
  std::vector<GroupElement*> ptrs;
  for (GroupElement& p : shared) ptrs.push_back(&p);
  GroupElement::normalize(ptrs);

  OtSenderMsg msg{sender.s_, {}};
  msg.ciphertexts.reserve(payloads.size());
  for (std::size_t i = 0; i < payloads.size(); ++i) {
    Key k = derive_key(sender.sid_, sender.s_, request.r, shared[i]);
    msg.ciphertexts.push_back(seal(k, sender.sid_, i, payloads[i]));
  }
  return msg;
}

OtPayload ot_receive_payload(OtReceiver& receiver, const OtSenderMsg& msg) {
  require(!receiver.used_, ErrorCode::kPrecondition, "OT receiver state is single-use");
  receiver.used_ = true;
  if (!(msg.s == receiver.s_) || msg.ciphertexts.size() != receiver.n_) {
    fail(ErrorCode::kProtocolAbort, "OT response does not match the session");
  }
  auto p = ot_open_slot(receiver.key_, receiver.sid_, receiver.choice_,
                        msg.ciphertexts[receiver.choice_]);
  if (!p) fail(ErrorCode::kProtocolAbort, "OT payload failed authentication");
  return *p;
}

std::array<std::uint8_t, 32> ot_receiver_key(const OtReceiver& receiver) { return receiver.key_; }

}  // namespace colo
