#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "colo/commitproof/bounded_offset.hpp"
#include "colo/core/prg.hpp"
#include "colo/core/ring.hpp"
#include "colo/ot/simplest_ot.hpp"
#include "colo/query/plan.hpp"

namespace colo {

// Scripted misbehaviour of a table builder.
enum class BuilderAttack {
  kNone,
  kOutOfRange,        // entries far above the bound, proof forged bit by bit
  kInconsistentMask,  // entries masked with different r
  kWrongOpening,      // OT payloads carry a shifted value
  kSwapPayload,       // OT payloads rotated by one slot
};

const char* builder_attack_name(BuilderAttack a);

// T'[i] = F(s[i], B_in) + r with r uniform in [0, 2^64 - 1 - bound], so the
// offsets never wrap.
struct MaskedTable {
  std::vector<RingElement> masked;
  std::vector<Scalar> randomness;
  RingElement mask;
  ProvenTable proven;

  std::vector<OtPayload> payloads() const;
};

RingElement sample_mask(std::uint64_t bound, Prg& prg);

// Mask algebra only: T' and r without commitments or proof.
struct MaskedValues {
  std::vector<RingElement> masked;
  RingElement mask;
};
MaskedValues mask_table(const QueryPlan& leaf, std::span<const std::int64_t> builder_in, Prg& prg);

// Throws kPrecondition when builder_in lies outside the declared domains.
MaskedTable build_table(const QueryPlan& leaf, std::span<const std::int64_t> builder_in, Prg& prg);

// Table and OT payloads as a misbehaving builder would produce them.
struct AdversarialTable {
  MaskedTable table;
  std::vector<OtPayload> payloads;
};
AdversarialTable build_adversarial_table(const QueryPlan& leaf,
                                         std::span<const std::int64_t> builder_in,
                                         BuilderAttack attack, Prg& prg);

// Index of the evaluator's input tuple when the proof accepts, nullopt on
// rejection. Throws kPrecondition when evaluator_in lies outside the domains.
std::optional<std::uint64_t> evaluator_verify_and_choose(const QueryPlan& leaf,
                                                         std::span<const Commitment> commitments,
                                                         const BoundedOffsetProof& proof,
                                                         std::span<const std::int64_t> evaluator_in);

}  // namespace colo
