#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace colo {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

// Little-endian writer used by every wire format in the project.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void raw(ByteView data) { buf_.insert(buf_.end(), data.begin(), data.end()); }
  // u32 length prefix followed by the bytes.
  void blob(ByteView data);
  void zeros(std::size_t n) { buf_.resize(buf_.size() + n, 0); }

  std::size_t size() const { return buf_.size(); }
  const Bytes& bytes() const { return buf_; }
  Bytes take() { return std::move(buf_); }

 private:
  Bytes buf_;
};

// Bounds-checked reader; underflow throws Error(kMalformed).
class ByteReader {
 public:
  explicit ByteReader(ByteView data) : data_(data) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  ByteView raw(std::size_t n);
  ByteView blob();

  template <std::size_t N>
  std::array<std::uint8_t, N> fixed() {
    ByteView v = raw(N);
    std::array<std::uint8_t, N> out{};
    std::copy(v.begin(), v.end(), out.begin());
    return out;
  }

  std::size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }
  // Throws kMalformed when trailing bytes remain.
  void expect_done() const;

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

void store_u64_le(std::uint8_t* out, std::uint64_t v);
std::uint64_t load_u64_le(const std::uint8_t* in);

}  // namespace colo
