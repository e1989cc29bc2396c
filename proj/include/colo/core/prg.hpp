#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "colo/core/bytes.hpp"

namespace colo {

using Seed = std::array<std::uint8_t, 32>;

// n pseudorandom bytes, deterministic in (seed, label). n must be >= 1.
Bytes prg_expand(const Seed& seed, ByteView label, std::size_t n);
Bytes prg_expand(const Seed& seed, std::string_view label, std::size_t n);

// Child seed for the run -> device -> edge -> message hierarchy.
Seed derive_seed(const Seed& parent, std::string_view label);
Seed derive_seed(const Seed& parent, ByteView label);

Seed seed_from_u64(std::uint64_t run_seed);

// ChaCha20 keystream keyed by BLAKE2b(seed, label). The stream position is
// the byte counter; the same (seed, label, counter) yields the same bytes.
class Prg {
 public:
  explicit Prg(const Seed& seed, std::string_view label = "stream");

  void fill(std::span<std::uint8_t> out);
  Bytes bytes(std::size_t n);
  std::uint64_t next_u64();
  // Uniform in [0, bound); bound must be nonzero.
  std::uint64_t uniform(std::uint64_t bound);
  // Uniform in [lo, hi].
  std::int64_t uniform_range(std::int64_t lo, std::int64_t hi);
  double uniform01();
  Seed next_seed();
  Prg fork(std::string_view label);

  std::uint64_t counter() const { return counter_; }

 private:
  std::array<std::uint8_t, 32> key_{};
  std::uint64_t counter_ = 0;
};

template <class T>
void shuffle(std::vector<T>& items, Prg& prg) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(prg.uniform(i));
    std::swap(items[i - 1], items[j]);
  }
}

// Poisson sample by inversion; large means are split into pieces of <= 30.
std::uint64_t sample_poisson(double mean, Prg& prg);

}  // namespace colo
