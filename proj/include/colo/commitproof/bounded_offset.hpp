#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "colo/commitproof/commitment.hpp"
#include "colo/core/bytes.hpp"
#include "colo/core/prg.hpp"

namespace colo {

using Challenge = unsigned __int128;

// Bit weights used to prove x in [0, bound] exactly. For bound >= 2 the
// weights are 1, 2, ..., 2^(k-2), bound - 2^(k-1) + 1; for bound <= 1 a
// single weight equal to bound.
struct RangeLayout {
  unsigned bits = 0;
  std::vector<std::uint64_t> weights;
};
RangeLayout range_layout(std::uint64_t bound);

// Binary decomposition of n into strictly decreasing powers of two.
std::vector<std::uint32_t> power_of_two_chunks(std::size_t n);

// CDS OR-proof that a commitment opens to 0 or to its shift.
struct BitProof {
  GroupElement a0;
  GroupElement a1;
  Challenge e0 = 0;
  Scalar z0;
  Scalar z1;
};

struct EntryProof {
  // Commitments to bits 1..k-1; bit 0 is derived homomorphically.
  std::vector<GroupElement> bit_commitments;
  std::vector<BitProof> bits;
};

struct ChunkProof {
  std::uint32_t offset = 0;
  std::vector<EntryProof> entries;

  std::uint32_t size() const { return static_cast<std::uint32_t>(entries.size()); }
};

// Proof of knowledge of (r, rho) with CR = g^r h^rho.
struct MaskProof {
  GroupElement nonce;
  Scalar z_value;
  Scalar z_randomness;
};

// Wire layout (all integers little-endian):
//   u32 version | u32 entry count | u8 bits per entry
//   CR (65) | mask nonce (65) | z_value (32) | z_randomness (32)
//   u32 chunk count, then per chunk: u32 offset | u32 size | entries
//   entry: (bits-1) x point (65), then per bit:
//          a0 (65) | a1 (65) | e0 (16) | z0 (32) | z1 (32)
struct BoundedOffsetProof {
  static constexpr std::uint32_t kVersion = 1;

  Commitment mask_commitment;
  MaskProof mask_proof;
  unsigned bits = 0;
  std::vector<ChunkProof> chunks;

  std::vector<std::uint32_t> chunk_sizes() const;
  std::size_t entry_count() const;

  Bytes serialize() const;
  // nullopt on any structural or encoding error.
  static std::optional<BoundedOffsetProof> deserialize(ByteView bytes);
};

// serialize().size() of a proof over `entries` entries for `bound`.
std::size_t proof_wire_size(std::size_t entries, std::uint64_t bound);

struct ProvenTable {
  std::vector<Commitment> commitments;
  BoundedOffsetProof proof;
};

// Commits to table[i] + mask under randomness[i] and proves every committed
// value is mask plus something in [0, bound]. Refuses false statements.
ProvenTable prove_bounded_offset(std::span<const RingElement> table, RingElement mask,
                                 std::span<const Scalar> randomness, std::uint64_t bound,
                                 Prg& prg);

enum class VerifyStatus { kAccept, kReject, kMalformed };

const char* verify_status_name(VerifyStatus s);

VerifyStatus verify_bounded_offset(std::span<const Commitment> commitments,
                                   const BoundedOffsetProof& proof, std::uint64_t bound);

// Prover without statement checks, for adversarial builders. Commits to
// committed_values[i] under randomness[i], claims mask, and decomposes the
// claimed offsets bit by bit even when they are out of range.
ProvenTable prove_bounded_offset_unchecked(std::span<const RingElement> committed_values,
                                           std::span<const std::uint64_t> claimed_offsets,
                                           RingElement claimed_mask,
                                           std::span<const Scalar> randomness,
                                           std::uint64_t bound, Prg& prg);

}  // namespace colo
