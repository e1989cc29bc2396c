#pragma once

#include <sodium.h>

#include <array>
#include <initializer_list>
#include <cstdint>
#include <string_view>

#include "colo/core/bytes.hpp"
#include "colo/core/group.hpp"

namespace colo {

using Digest = std::array<std::uint8_t, 32>;

// SHA-512("colo/hash-to-scalar/v1" || transcript) reduced mod n.
Scalar hash_to_scalar(ByteView transcript);

// BLAKE2b-256 over length-framed parts.
Digest hash_parts(std::initializer_list<ByteView> parts);

// Incremental Fiat-Shamir transcript over SHA-512 with length framing.
class Transcript {
 public:
  explicit Transcript(std::string_view domain);

  Transcript& append(ByteView data);
  Transcript& append(std::string_view label) { return append(as_bytes(label)); }
  Transcript& append_u64(std::uint64_t v);
  Transcript& append_point(const GroupElement& p);

  // Finalising helpers; they do not consume the transcript.
  std::array<std::uint8_t, 64> digest() const;
  Scalar challenge_scalar() const;
  // 128-bit challenge as (lo, hi).
  unsigned __int128 challenge128() const;

 private:
  crypto_hash_sha512_state st_;
};

}  // namespace colo
