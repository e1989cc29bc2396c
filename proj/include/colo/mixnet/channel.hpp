#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "colo/core/bytes.hpp"
#include "colo/localagg/frames.hpp"

namespace colo {

// Fragment carried in one slot per round:
// u8 kind (0 cover, 1 data) | u8 role | u32 stream offset | u32 length | data,
// zero padded to the slot size.
inline constexpr std::size_t kFragmentHeader = 10;

enum class RoundOutcome : std::uint8_t { kDelivered, kEcho, kLost };

// Reliable frame stream between the two endpoints of a slot. Each round the
// endpoint writes one fragment to the shared dead drop and reads back either
// the peer's fragment (delivered), its own (the peer's write never arrived) or
// nothing. Undelivered data is resent in the next round.
class Channel {
 public:
  // role distinguishes the endpoints (0 for the lower public key). A loopback
  // channel treats its own echo as delivery.
  Channel(std::size_t slot_size, std::uint8_t role, bool loopback);

  void push(const std::vector<Frame>& frames);
  Bytes fragment();
  // Frames completed by this round's reply. Throws kMalformed on a corrupt
  // stream.
  std::vector<Frame> receive(const std::optional<Bytes>& reply);

  RoundOutcome last_outcome() const { return last_; }
  bool has_pending() const { return acked_ < out_.size(); }
  bool last_was_data() const { return inflight_ > 0; }
  // Whether the last delivered fragment carried stream data.
  bool last_received_data() const { return received_data_; }
  // Drops unsent data and sends cover from now on.
  void close();
  bool closed() const { return closed_; }

  std::size_t capacity() const { return slot_size_ - kFragmentHeader; }
  std::uint64_t frames_sent() const { return frames_sent_; }
  std::uint64_t frames_received() const { return frames_received_; }
  std::uint64_t frame_bytes_sent() const { return out_.size(); }
  std::uint64_t data_fragments() const { return data_fragments_; }
  std::uint64_t retransmissions() const { return retransmissions_; }

 private:
  std::size_t slot_size_;
  std::uint8_t role_;
  bool loopback_;
  bool closed_ = false;
  Bytes out_;
  std::size_t acked_ = 0;
  std::size_t inflight_ = 0;
  bool resend_ = false;
  std::size_t recv_offset_ = 0;
  FrameDecoder decoder_;
  RoundOutcome last_ = RoundOutcome::kDelivered;
  bool received_data_ = false;
  std::uint64_t frames_sent_ = 0;
  std::uint64_t frames_received_ = 0;
  std::uint64_t data_fragments_ = 0;
  std::uint64_t retransmissions_ = 0;
};

}  // namespace colo
