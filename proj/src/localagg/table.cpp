#include "colo/localagg/table.hpp"

#include "colo/core/error.hpp"

namespace colo {
namespace {

constexpr std::uint64_t kForgedEntry = 1'000'000;

void check_domains(std::span<const std::int64_t> values,
                   const std::vector<AttributeDomain>& domains, const char* who) {
  require(values.size() == domains.size(), ErrorCode::kPrecondition,
          std::string(who) + " input arity mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    require(domains[i].contains(values[i]), ErrorCode::kPrecondition,
            std::string(who) + " input outside domain of " + domains[i].name);
  }
}

std::vector<RingElement> plain_table(const QueryPlan& leaf, std::span<const std::int64_t> builder_in) {
  std::vector<RingElement> t(leaf.table_length);
  for (std::uint64_t i = 0; i < leaf.table_length; ++i) {
    t[i] = leaf.evaluate(input_at(leaf, i), builder_in);
  }
  return t;
}

std::vector<Scalar> random_scalars(std::size_t n, Prg& prg) {
  std::vector<Scalar> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(Scalar::random(prg));
  return out;
}

}  // namespace

const char* builder_attack_name(BuilderAttack a) {
  switch (a) {
    case BuilderAttack::kNone: return "none";
    case BuilderAttack::kOutOfRange: return "out-of-range";
    case BuilderAttack::kInconsistentMask: return "inconsistent-mask";
    case BuilderAttack::kWrongOpening: return "wrong-opening";
    case BuilderAttack::kSwapPayload: return "swap-payload";
  }
  return "?";
}

std::vector<OtPayload> MaskedTable::payloads() const {
  std::vector<OtPayload> out;
  out.reserve(masked.size());
  for (std::size_t i = 0; i < masked.size(); ++i) out.push_back({masked[i], randomness[i]});
  return out;
}

RingElement sample_mask(std::uint64_t bound, Prg& prg) {
  const std::uint64_t span = UINT64_MAX - bound;
  return RingElement{span == UINT64_MAX ? prg.next_u64() : prg.uniform(span + 1)};
}

MaskedValues mask_table(const QueryPlan& leaf, std::span<const std::int64_t> builder_in, Prg& prg) {
  check_domains(builder_in, leaf.builder_domains, "builder");
  MaskedValues out;
  out.masked = plain_table(leaf, builder_in);
  out.mask = sample_mask(leaf.bound, prg);
  for (RingElement& v : out.masked) v = v + out.mask;
  return out;
}

MaskedTable build_table(const QueryPlan& leaf, std::span<const std::int64_t> builder_in, Prg& prg) {
  check_domains(builder_in, leaf.builder_domains, "builder");
  std::vector<RingElement> t = plain_table(leaf, builder_in);
  MaskedTable out;
  out.mask = sample_mask(leaf.bound, prg);
  out.randomness = random_scalars(t.size(), prg);
  out.masked.reserve(t.size());
  for (RingElement v : t) out.masked.push_back(v + out.mask);
  out.proven = prove_bounded_offset(t, out.mask, out.randomness, leaf.bound, prg);
  return out;
}

AdversarialTable build_adversarial_table(const QueryPlan& leaf,
                                         std::span<const std::int64_t> builder_in,
                                         BuilderAttack attack, Prg& prg) {
  AdversarialTable out;
  if (attack == BuilderAttack::kNone || attack == BuilderAttack::kWrongOpening ||
      attack == BuilderAttack::kSwapPayload) {
    out.table = build_table(leaf, builder_in, prg);
    out.payloads = out.table.payloads();
    if (attack == BuilderAttack::kWrongOpening) {
      for (OtPayload& p : out.payloads) p.value = p.value + RingElement{1};
    } else if (attack == BuilderAttack::kSwapPayload) {
      std::vector<OtPayload> rotated(out.payloads.size());
      for (std::size_t i = 0; i < rotated.size(); ++i) {
        rotated[i] = out.payloads[(i + 1) % rotated.size()];
      }
      out.payloads = std::move(rotated);
    }
    return out;
  }

  std::vector<RingElement> t = plain_table(leaf, builder_in);
  MaskedTable& mt = out.table;
  mt.mask = sample_mask(leaf.bound, prg);
  mt.randomness = random_scalars(t.size(), prg);
  std::vector<std::uint64_t> offsets(t.size());
  mt.masked.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    offsets[i] = t[i].value;
    mt.masked[i] = t[i] + mt.mask;
  }
  if (attack == BuilderAttack::kOutOfRange) {
    // Every entry claims the forged value so the evaluator's slot carries it.
    for (std::size_t i = 0; i < t.size(); ++i) {
      offsets[i] = kForgedEntry;
      mt.masked[i] = RingElement{kForgedEntry} + mt.mask;
    }
  } else {
    for (std::size_t i = 0; i < t.size(); ++i) {
      mt.masked[i] = mt.masked[i] + RingElement{prg.uniform(1000) + 1};
    }
  }
  mt.proven = prove_bounded_offset_unchecked(mt.masked, offsets, mt.mask, mt.randomness,
                                             leaf.bound, prg);
  out.payloads = mt.payloads();
  return out;
}

std::optional<std::uint64_t> evaluator_verify_and_choose(const QueryPlan& leaf,
                                                         std::span<const Commitment> commitments,
                                                         const BoundedOffsetProof& proof,
                                                         std::span<const std::int64_t> evaluator_in) {
  check_domains(evaluator_in, leaf.evaluator_domains, "evaluator");
  if (commitments.size() != leaf.table_length) return std::nullopt;
  if (verify_bounded_offset(commitments, proof, leaf.bound) != VerifyStatus::kAccept) {
    return std::nullopt;
  }
  return index_of(leaf, evaluator_in);
}

}  // namespace colo
