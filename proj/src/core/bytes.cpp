#include "colo/core/bytes.hpp"

#include <sodium.h>

#include "colo/core/error.hpp"

namespace colo {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kMalformed: return "malformed";
    case ErrorCode::kProtocolAbort: return "protocol-abort";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kCrypto: return "crypto";
  }
  return "unknown";
}

std::string to_hex(ByteView data) {
  std::string out(data.size() * 2 + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), data.data(), data.size());
  out.pop_back();
  return out;
}

Bytes from_hex(std::string_view hex) {
  Bytes out(hex.size() / 2 + 1);
  std::size_t len = 0;
  const char* end = nullptr;
  if (sodium_hex2bin(out.data(), out.size(), hex.data(), hex.size(), nullptr, &len,
                     &end) != 0 ||
      end != hex.data() + hex.size()) {
    fail(ErrorCode::kMalformed, "invalid hex string");
  }
  out.resize(len);
  return out;
}

void store_u64_le(std::uint8_t* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint64_t load_u64_le(const std::uint8_t* in) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | in[i];
  return v;
}

void ByteWriter::u16(std::uint16_t v) {
  u8(static_cast<std::uint8_t>(v));
  u8(static_cast<std::uint8_t>(v >> 8));
}

void ByteWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::blob(ByteView data) {
  require(data.size() <= UINT32_MAX, ErrorCode::kInvalidArgument, "blob too large");
  u32(static_cast<std::uint32_t>(data.size()));
  raw(data);
}

ByteView ByteReader::raw(std::size_t n) {
  if (n > remaining()) fail(ErrorCode::kMalformed, "truncated input");
  ByteView out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::uint8_t ByteReader::u8() { return raw(1)[0]; }

std::uint16_t ByteReader::u16() {
  ByteView b = raw(2);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t ByteReader::u32() {
  ByteView b = raw(4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t ByteReader::u64() { return load_u64_le(raw(8).data()); }

ByteView ByteReader::blob() { return raw(u32()); }

void ByteReader::expect_done() const {
  if (!done()) fail(ErrorCode::kMalformed, "trailing bytes");
}

}  // namespace colo
