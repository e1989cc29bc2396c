#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "colo/commitproof/bounded_offset.hpp"
#include "colo/core/bytes.hpp"
#include "colo/core/group.hpp"

namespace colo {

// Local-aggregation messages. Announce and OtResponse travel from the table
// builder to the evaluator; OtRequest and Ack travel back. Abort is sent by a
// builder that cannot answer a request.
enum class FrameType : std::uint8_t {
  kAnnounce = 1,
  kOtRequest = 2,
  kOtResponse = 3,
  kAck = 4,
  kAbort = 5,
};

// Wire layout: u8 type | u16 leaf index | u32 body length | body.
struct Frame {
  FrameType type = FrameType::kAnnounce;
  std::uint16_t leaf = 0;
  Bytes body;

  std::size_t wire_size() const { return kHeaderSize + body.size(); }
  static constexpr std::size_t kHeaderSize = 7;
};

Bytes encode_frame(const Frame& f);
void append_frame(Bytes& out, const Frame& f);

// Incremental parser over a reassembled byte stream.
class FrameDecoder {
 public:
  void feed(ByteView bytes);
  // Next complete frame; throws kMalformed on an unknown type.
  std::optional<Frame> next();
  std::size_t buffered() const { return buf_.size() - pos_; }

 private:
  Bytes buf_;
  std::size_t pos_ = 0;
};

// Announce body: u32 L | L x commitment (65) | u32 proof length | proof | S (65).
struct Announce {
  std::vector<Commitment> commitments;
  BoundedOffsetProof proof;
  GroupElement ot_key;

  Bytes serialize() const;
  static std::optional<Announce> deserialize(ByteView bytes);
};

std::size_t announce_body_size(std::size_t table_length, std::uint64_t bound);
std::size_t ot_request_body_size();
std::size_t ot_response_body_size(std::size_t table_length);
inline constexpr std::size_t kAckBodySize = 1;
inline constexpr std::size_t kAbortBodySize = 1;

}  // namespace colo
