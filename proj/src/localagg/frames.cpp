#include "colo/localagg/frames.hpp"

#include "colo/core/error.hpp"
#include "colo/ot/simplest_ot.hpp"

namespace colo {

void append_frame(Bytes& out, const Frame& f) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(f.type));
  w.u16(f.leaf);
  w.u32(static_cast<std::uint32_t>(f.body.size()));
  Bytes header = w.take();
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), f.body.begin(), f.body.end());
}

Bytes encode_frame(const Frame& f) {
  Bytes out;
  out.reserve(f.wire_size());
  append_frame(out, f);
  return out;
}

void FrameDecoder::feed(ByteView bytes) {
  if (pos_ > 0 && pos_ == buf_.size()) {
    buf_.clear();
    pos_ = 0;
  }
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

std::optional<Frame> FrameDecoder::next() {
  if (buffered() < Frame::kHeaderSize) return std::nullopt;
  ByteReader r(ByteView(buf_).subspan(pos_, Frame::kHeaderSize));
  std::uint8_t type = r.u8();
  std::uint16_t leaf = r.u16();
  std::uint32_t len = r.u32();
  if (type < 1 || type > 5) fail(ErrorCode::kMalformed, "unknown frame type");
  if (buffered() < Frame::kHeaderSize + len) return std::nullopt;
  Frame f;
  f.type = static_cast<FrameType>(type);
  f.leaf = leaf;
  auto start = buf_.begin() + static_cast<std::ptrdiff_t>(pos_ + Frame::kHeaderSize);
  f.body.assign(start, start + len);
  pos_ += Frame::kHeaderSize + len;
  return f;
}

Bytes Announce::serialize() const {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(commitments.size()));
  for (const Commitment& c : commitments) w.raw(c.point.encode());
  w.blob(proof.serialize());
  w.raw(ot_key.encode());
  return w.take();
}

std::optional<Announce> Announce::deserialize(ByteView bytes) {
  try {
    ByteReader r(bytes);
    Announce a;
    std::uint32_t n = r.u32();
    if (static_cast<std::uint64_t>(n) * GroupElement::kEncodedSize > bytes.size()) return std::nullopt;
    a.commitments.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      auto p = GroupElement::decode(r.fixed<GroupElement::kEncodedSize>());
      if (!p) return std::nullopt;
      a.commitments.push_back(Commitment{std::move(*p)});
    }
    ByteView proof = r.blob();
    auto parsed = BoundedOffsetProof::deserialize(proof);
    if (!parsed) return std::nullopt;
    a.proof = std::move(*parsed);
    auto s = GroupElement::decode(r.fixed<GroupElement::kEncodedSize>());
    if (!s) return std::nullopt;
    a.ot_key = std::move(*s);
    r.expect_done();
    return a;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::size_t announce_body_size(std::size_t table_length, std::uint64_t bound) {
  return 4 + table_length * GroupElement::kEncodedSize + 4 + proof_wire_size(table_length, bound) +
         GroupElement::kEncodedSize;
}

std::size_t ot_request_body_size() { return GroupElement::kEncodedSize; }

std::size_t ot_response_body_size(std::size_t table_length) {
  return GroupElement::kEncodedSize + 4 + table_length * kOtCiphertextSize;
}

}  // namespace colo
