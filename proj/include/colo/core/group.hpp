#pragma once

struct ec_point_st;

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "colo/core/bytes.hpp"

namespace colo {

class Prg;

// Integer modulo the P-256 group order n, held as four little-endian limbs.
class Scalar {
 public:
  static constexpr std::size_t kBytes = 32;
  using Encoding = std::array<std::uint8_t, kBytes>;

  constexpr Scalar() = default;
  static Scalar from_u64(std::uint64_t v);
  // Canonical 32-byte little-endian encoding; values >= n are rejected.
  static std::optional<Scalar> from_bytes(ByteView le);
  // Any-length little-endian input reduced mod n.
  static Scalar reduce(ByteView le);
  static Scalar random(Prg& prg);
  static const Scalar& order_minus_one();

  Encoding to_bytes() const;
  bool is_zero() const { return (limbs_[0] | limbs_[1] | limbs_[2] | limbs_[3]) == 0; }
  const std::array<std::uint64_t, 4>& limbs() const { return limbs_; }

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator-() const;
  friend bool operator==(const Scalar&, const Scalar&) = default;

 private:
  std::array<std::uint64_t, 4> limbs_{};
};

// Point on P-256. g is the value base and h the randomness base; nobody
// knows log_h(g) because g is obtained by hashing to the curve.
class GroupElement {
 public:
  static constexpr std::size_t kEncodedSize = 65;
  using Encoding = std::array<std::uint8_t, kEncodedSize>;

  GroupElement();
  GroupElement(const GroupElement& o);
  GroupElement(GroupElement&& o) noexcept;
  GroupElement& operator=(const GroupElement& o);
  GroupElement& operator=(GroupElement&& o) noexcept;
  ~GroupElement();

  static GroupElement identity() { return GroupElement(); }
  static const GroupElement& g();
  static const GroupElement& h();

  // Fixed-base multiplications (precomputed tables).
  static GroupElement mul_g(const Scalar& s);
  static GroupElement mul_h(const Scalar& s);
  // a*g + b*h
  static GroupElement mul_gh(const Scalar& a, const Scalar& b);
  // h_coeff*h + sum scalars[i]*points[i]
  static GroupElement multiexp(std::span<const GroupElement* const> points,
                               std::span<const Scalar> scalars, const Scalar& h_coeff);

  // Uncompressed SEC1 (0x04 || x || y); the identity is 65 zero bytes.
  static std::optional<GroupElement> decode(ByteView bytes);
  Encoding encode() const;
  // Brings points to affine form so that encoding is cheap.
  static void normalize(std::span<GroupElement* const> points);

  static GroupElement hash_to_group(ByteView tag);

  GroupElement operator+(const GroupElement& o) const;
  GroupElement operator-(const GroupElement& o) const;
  GroupElement operator-() const;
  GroupElement operator*(const Scalar& s) const;
  GroupElement& operator+=(const GroupElement& o);
  GroupElement& operator-=(const GroupElement& o);

  bool is_identity() const;
  bool operator==(const GroupElement& o) const;

  const ec_point_st* raw() const { return p_; }

 private:
  explicit GroupElement(ec_point_st* p) : p_(p) {}

  ec_point_st* p_ = nullptr;
  std::optional<Encoding> wire_;  // set when decoded from bytes
};

}  // namespace colo
