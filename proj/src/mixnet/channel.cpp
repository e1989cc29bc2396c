#include "colo/mixnet/channel.hpp"

#include <algorithm>

#include "colo/core/error.hpp"

namespace colo {
namespace {

constexpr std::uint8_t kCover = 0;
constexpr std::uint8_t kData = 1;

}  // namespace

Channel::Channel(std::size_t slot_size, std::uint8_t role, bool loopback)
    : slot_size_(slot_size), role_(role), loopback_(loopback) {
  require(slot_size > kFragmentHeader, ErrorCode::kInvalidArgument,
          "slot size must exceed the fragment header");
}

void Channel::push(const std::vector<Frame>& frames) {
  if (closed_) return;
  for (const Frame& f : frames) {
    append_frame(out_, f);
    ++frames_sent_;
  }
}

Bytes Channel::fragment() {
  if (resend_) {
    ++retransmissions_;
  } else {
    inflight_ = closed_ ? 0 : std::min(capacity(), out_.size() - acked_);
  }
  resend_ = false;
  ByteWriter w;
  w.u8(inflight_ > 0 ? kData : kCover);
  w.u8(role_);
  w.u32(static_cast<std::uint32_t>(acked_));
  w.u32(static_cast<std::uint32_t>(inflight_));
  if (inflight_ > 0) {
    w.raw(ByteView(out_).subspan(acked_, inflight_));
    ++data_fragments_;
  }
  w.zeros(slot_size_ - w.size());
  return w.take();
}

std::vector<Frame> Channel::receive(const std::optional<Bytes>& reply) {
  std::vector<Frame> frames;
  received_data_ = false;
  if (!reply || reply->size() < kFragmentHeader) {
    last_ = RoundOutcome::kLost;
  } else {
    ByteReader r(*reply);
    std::uint8_t kind = r.u8();
    std::uint8_t role = r.u8();
    std::uint32_t offset = r.u32();
    std::uint32_t length = r.u32();
    if (role == role_ && !loopback_) {
      last_ = RoundOutcome::kEcho;
    } else {
      last_ = RoundOutcome::kDelivered;
      if (kind == kData) {
        require(length <= r.remaining(), ErrorCode::kMalformed, "fragment length");
        ByteView data = r.raw(length);
        received_data_ = true;
        if (offset == recv_offset_) {
          decoder_.feed(data);
          recv_offset_ += length;
        } else {
          require(offset < recv_offset_, ErrorCode::kMalformed, "fragment beyond stream");
        }
      }
    }
  }
  if (last_ == RoundOutcome::kDelivered) {
    acked_ += inflight_;
    inflight_ = 0;
  } else if (inflight_ > 0) {
    resend_ = true;
  }
  if (last_ == RoundOutcome::kDelivered) {
    while (auto f = decoder_.next()) {
      frames.push_back(std::move(*f));
      ++frames_received_;
    }
  }
  return frames;
}

void Channel::close() {
  closed_ = true;
  acked_ = out_.size();
  inflight_ = 0;
  resend_ = false;
}

}  // namespace colo
