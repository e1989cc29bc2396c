#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "colo/commitproof/commitment.hpp"
#include "colo/core/bytes.hpp"
#include "colo/core/group.hpp"
#include "colo/core/hash.hpp"
#include "colo/core/prg.hpp"

namespace colo {

// 1-out-of-N oblivious transfer in the Chou-Orlandi style over the
// randomness base h. Payloads are (T'[i], R[i]) openings.
using OtPayload = Opening;
using SessionId = Digest;

// u64 value || 32-byte scalar, sealed with ChaCha20-Poly1305.
inline constexpr std::size_t kOtPlaintextSize = 8 + Scalar::kBytes;
inline constexpr std::size_t kOtCiphertextSize = kOtPlaintextSize + 16;

SessionId ot_session_id(ByteView query_id, ByteView edge_id, std::string_view role);

struct OtReceiverMsg {
  GroupElement r;

  Bytes serialize() const;
  static std::optional<OtReceiverMsg> deserialize(ByteView bytes);
};

// Wire layout: S (65) | u32 N | N x 56-byte ciphertext.
struct OtSenderMsg {
  GroupElement s;
  std::vector<std::array<std::uint8_t, kOtCiphertextSize>> ciphertexts;

  Bytes serialize() const;
  static std::optional<OtSenderMsg> deserialize(ByteView bytes);
};

class OtSender {
 public:
  const GroupElement& public_key() const { return s_; }
  const SessionId& session() const { return sid_; }
  bool used() const { return used_; }

 private:
  friend std::pair<OtSender, GroupElement> ot_sender_setup(Prg& prg, const SessionId& sid,
                                                           std::size_t n);
  friend OtSenderMsg ot_send_payloads(OtSender& sender, const OtReceiverMsg& request,
                                      std::span<const OtPayload> payloads);
  Scalar y_;
  GroupElement s_;
  GroupElement t_;
  SessionId sid_{};
  std::size_t n_ = 0;
  bool used_ = false;
};

class OtReceiver {
 public:
  std::size_t choice() const { return choice_; }

 private:
  friend std::pair<OtReceiver, OtReceiverMsg> ot_receive_request(const GroupElement& s,
                                                                 std::size_t choice,
                                                                 std::size_t n, Prg& prg,
                                                                 const SessionId& sid);
  friend OtPayload ot_receive_payload(OtReceiver& receiver, const OtSenderMsg& msg);
  friend std::array<std::uint8_t, 32> ot_receiver_key(const OtReceiver& receiver);
  GroupElement s_;
  GroupElement r_;
  std::array<std::uint8_t, 32> key_{};
  std::size_t choice_ = 0;
  std::size_t n_ = 0;
  SessionId sid_{};
  bool used_ = false;
};

// n is the table length the sender will later transfer from.
std::pair<OtSender, GroupElement> ot_sender_setup(Prg& prg, const SessionId& sid, std::size_t n);

// Throws kPrecondition when choice >= n, kProtocolAbort when S is invalid.
std::pair<OtReceiver, OtReceiverMsg> ot_receive_request(const GroupElement& s,
                                                        std::size_t choice, std::size_t n,
                                                        Prg& prg, const SessionId& sid);

// Throws kPrecondition on reuse or when payloads.size() != n;
// kProtocolAbort on an invalid request point.
OtSenderMsg ot_send_payloads(OtSender& sender, const OtReceiverMsg& request,
                             std::span<const OtPayload> payloads);

// Throws kProtocolAbort when the message is malformed or fails to decrypt.
OtPayload ot_receive_payload(OtReceiver& receiver, const OtSenderMsg& msg);

// Decrypts ciphertext `index` under `key`; used by tests probing other slots.
std::optional<OtPayload> ot_open_slot(const std::array<std::uint8_t, 32>& key,
                                      const SessionId& sid, std::size_t index,
                                      const std::array<std::uint8_t, kOtCiphertextSize>& ct);

std::array<std::uint8_t, 32> ot_receiver_key(const OtReceiver& receiver);

}  // namespace colo
