#include "colo/core/prg.hpp"

#include <sodium.h>

#include <cmath>
#include <cstring>

#include "colo/core/error.hpp"

namespace colo {
namespace {

constexpr std::string_view kPrgTag = "colo/prg/v1";

// Selects libsodium's CPU-specific implementations before first use.
const int kSodiumReady = [] {
  if (sodium_init() < 0) fail(ErrorCode::kCrypto, "sodium_init");
  return 0;
}();

std::array<std::uint8_t, 32> subkey(const Seed& seed, ByteView label) {
  std::array<std::uint8_t, 32> out{};
  crypto_generichash_state st;
  crypto_generichash_init(&st, seed.data(), seed.size(), out.size());
  crypto_generichash_update(&st, reinterpret_cast<const unsigned char*>(kPrgTag.data()),
                            kPrgTag.size());
  std::uint8_t len[8];
  store_u64_le(len, label.size());
  crypto_generichash_update(&st, len, sizeof(len));
  crypto_generichash_update(&st, label.data(), label.size());
  crypto_generichash_final(&st, out.data(), out.size());
  return out;
}

// Writes keystream bytes [offset, offset + out.size()) for key.
void keystream(const std::array<std::uint8_t, 32>& key, std::uint64_t offset,
               std::span<std::uint8_t> out) {
  static const std::uint8_t kNonce[crypto_stream_chacha20_ietf_NONCEBYTES] = {};
  std::size_t done = 0;
  while (done < out.size()) {
    std::uint64_t pos = offset + done;
    std::uint64_t block = pos / 64;
    std::size_t skip = static_cast<std::size_t>(pos % 64);
    if (block > UINT32_MAX) fail(ErrorCode::kPrecondition, "prg stream exhausted");
    if (skip == 0 && out.size() - done >= 64) {
      std::size_t whole = (out.size() - done) / 64 * 64;
      std::uint64_t max_blocks = std::uint64_t{UINT32_MAX} - block + 1;
      whole = static_cast<std::size_t>(std::min<std::uint64_t>(whole, max_blocks * 64));
      std::memset(out.data() + done, 0, whole);
      crypto_stream_chacha20_ietf_xor_ic(out.data() + done, out.data() + done, whole, kNonce,
                                         static_cast<std::uint32_t>(block), key.data());
      done += whole;
    } else {
      std::uint8_t buf[64] = {};
      crypto_stream_chacha20_ietf_xor_ic(buf, buf, 64, kNonce,
                                         static_cast<std::uint32_t>(block), key.data());
      std::size_t take = std::min<std::size_t>(64 - skip, out.size() - done);
      std::memcpy(out.data() + done, buf + skip, take);
      done += take;
    }
  }
}

}  // namespace

Bytes prg_expand(const Seed& seed, ByteView label, std::size_t n) {
  require(n >= 1, ErrorCode::kPrecondition, "prg_expand requires n >= 1");
  Bytes out(n);
  keystream(subkey(seed, label), 0, out);
  return out;
}

Bytes prg_expand(const Seed& seed, std::string_view label, std::size_t n) {
  return prg_expand(seed, as_bytes(label), n);
}

Seed derive_seed(const Seed& parent, ByteView label) {
  Seed out{};
  keystream(subkey(parent, label), 0, out);
  return out;
}

Seed derive_seed(const Seed& parent, std::string_view label) {
  return derive_seed(parent, as_bytes(label));
}

Seed seed_from_u64(std::uint64_t run_seed) {
  Seed base{};
  store_u64_le(base.data(), run_seed);
  return derive_seed(base, "run-seed");
}

Prg::Prg(const Seed& seed, std::string_view label) : key_(subkey(seed, as_bytes(label))) {}

void Prg::fill(std::span<std::uint8_t> out) {
  keystream(key_, counter_, out);
  counter_ += out.size();
}

Bytes Prg::bytes(std::size_t n) {
  Bytes out(n);
  fill(out);
  return out;
}

std::uint64_t Prg::next_u64() {
  std::uint8_t buf[8];
  fill(buf);
  return load_u64_le(buf);
}

std::uint64_t Prg::uniform(std::uint64_t bound) {
  require(bound != 0, ErrorCode::kPrecondition, "uniform bound must be nonzero");
  std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  for (;;) {
    std::uint64_t v = next_u64();
    if (v <= limit) return v % bound;
  }
}

std::int64_t Prg::uniform_range(std::int64_t lo, std::int64_t hi) {
  require(hi >= lo, ErrorCode::kPrecondition, "empty range");
  std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  std::uint64_t off = span == 0 ? next_u64() : uniform(span);
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + off);
}

double Prg::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

Seed Prg::next_seed() {
  Seed s{};
  fill(s);
  return s;
}

Prg Prg::fork(std::string_view label) { return Prg(next_seed(), label); }

std::uint64_t sample_poisson(double mean, Prg& prg) {
  require(mean >= 0 && std::isfinite(mean), ErrorCode::kPrecondition, "invalid Poisson mean");
  std::uint64_t total = 0;
  while (mean > 0) {
    double piece = std::min(mean, 30.0);
    mean -= piece;
    double u = prg.uniform01();
    double p = std::exp(-piece);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf && k < 1000) {
      ++k;
      p *= piece / static_cast<double>(k);
      cdf += p;
    }
    total += k;
  }
  return total;
}

}  // namespace colo
