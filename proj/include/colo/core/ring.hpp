#pragma once

#include <cstdint>
#include <span>

namespace colo {

// Element of Z/2^64. Masks, table entries and additive shares live here.
struct RingElement {
  std::uint64_t value = 0;

  constexpr RingElement() = default;
  constexpr explicit RingElement(std::uint64_t v) : value(v) {}

  constexpr RingElement operator-() const { return RingElement(0 - value); }
  constexpr RingElement& operator+=(RingElement o) {
    value += o.value;
    return *this;
  }
  constexpr RingElement& operator-=(RingElement o) {
    value -= o.value;
    return *this;
  }
  friend constexpr RingElement operator+(RingElement a, RingElement b) {
    return RingElement(a.value + b.value);
  }
  friend constexpr RingElement operator-(RingElement a, RingElement b) {
    return RingElement(a.value - b.value);
  }
  friend constexpr bool operator==(RingElement, RingElement) = default;
};

constexpr RingElement ring_add(RingElement a, RingElement b) { return a + b; }
constexpr RingElement ring_neg(RingElement a) { return -a; }

constexpr RingElement ring_sum(std::span<const RingElement> xs) {
  RingElement acc;
  for (RingElement x : xs) acc += x;
  return acc;
}

}  // namespace colo
