#include "colo/commitproof/bounded_offset.hpp"

#include <bit>

#include "colo/core/error.hpp"
#include "colo/core/hash.hpp"

namespace colo {
namespace {

using ContextDigest = std::array<std::uint8_t, 64>;

Scalar scalar_from_u128(Challenge c) {
  std::array<std::uint8_t, 32> b{};
  store_u64_le(b.data(), static_cast<std::uint64_t>(c));
  store_u64_le(b.data() + 8, static_cast<std::uint64_t>(c >> 64));
  return *Scalar::from_bytes(b);
}

Challenge read_u128(ByteReader& in) {
  Challenge lo = in.u64();
  Challenge hi = in.u64();
  return lo | (hi << 64);
}

void write_u128(ByteWriter& out, Challenge c) {
  out.u64(static_cast<std::uint64_t>(c));
  out.u64(static_cast<std::uint64_t>(c >> 64));
}

Challenge random_u128(Prg& prg) {
  Challenge lo = prg.next_u64();
  Challenge hi = prg.next_u64();
  return lo | (hi << 64);
}

ContextDigest context_digest(std::span<const Commitment> commitments, const Commitment& cr,
                             std::uint64_t bound, unsigned bits) {
  Transcript t("colo/bounded-offset/v1/context");
  t.append_u64(BoundedOffsetProof::kVersion);
  t.append_point(GroupElement::g());
  t.append_point(GroupElement::h());
  t.append_u64(bound);
  t.append_u64(bits);
  t.append_u64(commitments.size());
  for (const Commitment& cm : commitments) t.append_point(cm.point);
  t.append_point(cr.point);
  return t.digest();
}

Scalar mask_challenge(const ContextDigest& ctx, const GroupElement& nonce) {
  Transcript t("colo/bounded-offset/v1/mask");
  t.append(ctx);
  t.append_point(nonce);
  return t.challenge_scalar();
}

Challenge chunk_challenge(const ContextDigest& ctx, std::size_t index, const ChunkProof& chunk) {
  Transcript t("colo/bounded-offset/v1/chunk");
  t.append(ctx);
  t.append_u64(index);
  t.append_u64(chunk.offset);
  t.append_u64(chunk.entries.size());
  for (const EntryProof& e : chunk.entries) {
    for (const GroupElement& c : e.bit_commitments) t.append_point(c);
    for (const BitProof& b : e.bits) {
      t.append_point(b.a0);
      t.append_point(b.a1);
    }
  }
  return t.challenge128();
}

// Weights for batching all bit equations of a chunk into one check.
Prg batch_weights(const ContextDigest& ctx, std::size_t index, Challenge e,
                  const ChunkProof& chunk) {
  Transcript t("colo/bounded-offset/v1/batch");
  t.append(ctx);
  t.append_u64(index);
  ByteWriter w;
  write_u128(w, e);
  for (const EntryProof& entry : chunk.entries) {
    for (const BitProof& b : entry.bits) {
      write_u128(w, b.e0);
      w.raw(b.z0.to_bytes());
      w.raw(b.z1.to_bytes());
    }
  }
  t.append(w.bytes());
  auto d = t.digest();
  Seed seed{};
  std::copy(d.begin(), d.begin() + 32, seed.begin());
  return Prg(seed, "batch");
}

std::vector<std::uint8_t> decompose(std::uint64_t x, const RangeLayout& layout) {
  std::vector<std::uint8_t> bits(layout.bits, 0);
  if (layout.bits == 1) {
    bits[0] = (x != 0 && layout.weights[0] != 0) ? 1 : 0;
    return bits;
  }
  unsigned k = layout.bits;
  std::uint64_t top_threshold = std::uint64_t{1} << (k - 1);
  std::uint64_t rest = x;
  if (x >= top_threshold) {
    bits[k - 1] = 1;
    rest = x - layout.weights[k - 1];
  }
  for (unsigned j = 0; j + 1 < k; ++j) bits[j] = static_cast<std::uint8_t>((rest >> j) & 1);
  return bits;
}

struct BitWitness {
  std::uint8_t beta = 0;
  Scalar gamma;
  Scalar nonce;
  Challenge sim_e = 0;
  Scalar sim_z;
};

ProvenTable prove_core(std::vector<Commitment> commitments,
                       std::span<const std::uint64_t> offsets, std::span<const Scalar> deltas,
                       const Scalar& mask_value, const Scalar& mask_rand, std::uint64_t bound,
                       Prg& prg) {
  const RangeLayout layout = range_layout(bound);
  const unsigned k = layout.bits;
  const std::size_t n = commitments.size();

  ProvenTable out;
  BoundedOffsetProof& proof = out.proof;
  proof.bits = k;
  proof.mask_commitment = commit(mask_value, mask_rand);

  std::vector<GroupElement*> to_normalize;
  for (Commitment& cm : commitments) to_normalize.push_back(&cm.point);
  to_normalize.push_back(&proof.mask_commitment.point);
  GroupElement::normalize(to_normalize);

  const ContextDigest ctx = context_digest(commitments, proof.mask_commitment, bound, k);

  Scalar tv = Scalar::random(prg);
  Scalar tr = Scalar::random(prg);
  proof.mask_proof.nonce = GroupElement::mul_gh(tv, tr);
  Scalar c = mask_challenge(ctx, proof.mask_proof.nonce);
  proof.mask_proof.z_value = tv + c * mask_value;
  proof.mask_proof.z_randomness = tr + c * mask_rand;

  std::vector<Scalar> shift(k);
  for (unsigned j = 0; j < k; ++j) {
    shift[j] = Scalar::from_u64(k == 1 ? layout.weights[0] : 1);
  }

  std::size_t offset = 0;
  std::size_t chunk_index = 0;
  for (std::uint32_t size : power_of_two_chunks(n)) {
    ChunkProof chunk;
    chunk.offset = static_cast<std::uint32_t>(offset);
    chunk.entries.resize(size);
    std::vector<std::vector<BitWitness>> witness(size, std::vector<BitWitness>(k));
    std::vector<GroupElement*> fresh;

    for (std::uint32_t e = 0; e < size; ++e) {
      const std::size_t i = offset + e;
      EntryProof& entry = chunk.entries[e];
      std::vector<BitWitness>& wit = witness[e];
      std::vector<std::uint8_t> beta = decompose(offsets[i], layout);

      Scalar gamma0 = deltas[i];
      entry.bit_commitments.resize(k - 1);
      for (unsigned j = 1; j < k; ++j) {
        wit[j].gamma = Scalar::random(prg);
        GroupElement cj = GroupElement::mul_h(wit[j].gamma);
        if (beta[j]) cj += GroupElement::g();
        entry.bit_commitments[j - 1] = std::move(cj);
        gamma0 = gamma0 - Scalar::from_u64(layout.weights[j]) * wit[j].gamma;
      }
      wit[0].gamma = gamma0;

      entry.bits.resize(k);
      for (unsigned j = 0; j < k; ++j) {
        BitWitness& bw = wit[j];
        bw.beta = beta[j];
        bw.nonce = Scalar::random(prg);
        bw.sim_e = random_u128(prg);
        bw.sim_z = Scalar::random(prg);
        GroupElement real = GroupElement::mul_h(bw.nonce);
        Scalar es = scalar_from_u128(bw.sim_e) * shift[j];
        GroupElement sim = GroupElement::mul_h(bw.sim_z - scalar_from_u128(bw.sim_e) * bw.gamma);
        GroupElement gs = GroupElement::mul_g(es);
        if (bw.beta) {
          sim -= gs;
          entry.bits[j].a0 = std::move(sim);
          entry.bits[j].a1 = std::move(real);
        } else {
          sim += gs;
          entry.bits[j].a0 = std::move(real);
          entry.bits[j].a1 = std::move(sim);
        }
      }
      for (GroupElement& cj : entry.bit_commitments) fresh.push_back(&cj);
      for (BitProof& b : entry.bits) {
        fresh.push_back(&b.a0);
        fresh.push_back(&b.a1);
      }
    }
    GroupElement::normalize(fresh);

    const Challenge e_total = chunk_challenge(ctx, chunk_index, chunk);
    for (std::uint32_t e = 0; e < size; ++e) {
      for (unsigned j = 0; j < k; ++j) {
        const BitWitness& bw = witness[e][j];
        BitProof& bp = chunk.entries[e].bits[j];
        Challenge e_real = e_total - bw.sim_e;
        Scalar z_real = bw.nonce + scalar_from_u128(e_real) * bw.gamma;
        if (bw.beta) {
          bp.e0 = bw.sim_e;
          bp.z0 = bw.sim_z;
          bp.z1 = z_real;
        } else {
          bp.e0 = e_real;
          bp.z0 = z_real;
          bp.z1 = bw.sim_z;
        }
      }
    }
    proof.chunks.push_back(std::move(chunk));
    offset += size;
    ++chunk_index;
  }
  out.commitments = std::move(commitments);
  return out;
}

bool point_fields_ok(ByteReader& in, GroupElement& out) {
  auto p = GroupElement::decode(in.raw(GroupElement::kEncodedSize));
  if (!p) return false;
  out = std::move(*p);
  return true;
}

bool scalar_field_ok(ByteReader& in, Scalar& out) {
  auto s = Scalar::from_bytes(in.raw(Scalar::kBytes));
  if (!s) return false;
  out = *s;
  return true;
}

}  // namespace

RangeLayout range_layout(std::uint64_t bound) {
  RangeLayout layout;
  if (bound <= 1) {
    layout.bits = 1;
    layout.weights = {bound};
    return layout;
  }
  unsigned k = static_cast<unsigned>(std::bit_width(bound));
  layout.bits = k;
  for (unsigned j = 0; j + 1 < k; ++j) layout.weights.push_back(std::uint64_t{1} << j);
  layout.weights.push_back(bound - (std::uint64_t{1} << (k - 1)) + 1);
  return layout;
}

std::vector<std::uint32_t> power_of_two_chunks(std::size_t n) {
  std::vector<std::uint32_t> sizes;
  for (int b = 31; b >= 0; --b) {
    if ((n >> b) & 1) sizes.push_back(std::uint32_t{1} << b);
  }
  return sizes;
}

const char* verify_status_name(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::kAccept: return "accept";
    case VerifyStatus::kReject: return "reject";
    case VerifyStatus::kMalformed: return "malformed";
  }
  return "unknown";
}

std::vector<std::uint32_t> BoundedOffsetProof::chunk_sizes() const {
  std::vector<std::uint32_t> sizes;
  for (const ChunkProof& c : chunks) sizes.push_back(c.size());
  return sizes;
}

std::size_t BoundedOffsetProof::entry_count() const {
  std::size_t n = 0;
  for (const ChunkProof& c : chunks) n += c.size();
  return n;
}

std::size_t proof_wire_size(std::size_t entries, std::uint64_t bound) {
  const std::size_t point = GroupElement::kEncodedSize;
  const std::size_t bits = range_layout(bound).bits;
  const std::size_t per_bit = 2 * point + 16 + 2 * Scalar::kBytes;
  const std::size_t chunks = static_cast<std::size_t>(std::popcount(entries));
  return 4 + 4 + 1 + 2 * point + 2 * Scalar::kBytes + 4 + 8 * chunks +
         entries * ((bits - 1) * point + bits * per_bit);
}

Bytes BoundedOffsetProof::serialize() const {
  ByteWriter w;
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(entry_count()));
  w.u8(static_cast<std::uint8_t>(bits));
  w.raw(mask_commitment.point.encode());
  w.raw(mask_proof.nonce.encode());
  w.raw(mask_proof.z_value.to_bytes());
  w.raw(mask_proof.z_randomness.to_bytes());
  w.u32(static_cast<std::uint32_t>(chunks.size()));
  for (const ChunkProof& c : chunks) {
    w.u32(c.offset);
    w.u32(c.size());
    for (const EntryProof& e : c.entries) {
      for (const GroupElement& p : e.bit_commitments) w.raw(p.encode());
      for (const BitProof& b : e.bits) {
        w.raw(b.a0.encode());
        w.raw(b.a1.encode());
        write_u128(w, b.e0);
        w.raw(b.z0.to_bytes());
        w.raw(b.z1.to_bytes());
      }
    }
  }
  return w.take();
}

std::optional<BoundedOffsetProof> BoundedOffsetProof::deserialize(ByteView bytes) {
  try {
    ByteReader in(bytes);
    if (in.u32() != kVersion) return std::nullopt;
    std::uint32_t entries = in.u32();
    BoundedOffsetProof p;
    p.bits = in.u8();
    if (p.bits == 0 || p.bits > 64) return std::nullopt;
    if (!point_fields_ok(in, p.mask_commitment.point)) return std::nullopt;
    if (!point_fields_ok(in, p.mask_proof.nonce)) return std::nullopt;
    if (!scalar_field_ok(in, p.mask_proof.z_value)) return std::nullopt;
    if (!scalar_field_ok(in, p.mask_proof.z_randomness)) return std::nullopt;
    std::uint32_t chunk_count = in.u32();
    if (chunk_count > 32) return std::nullopt;
    std::uint64_t seen = 0;
    for (std::uint32_t ci = 0; ci < chunk_count; ++ci) {
      ChunkProof c;
      c.offset = in.u32();
      std::uint32_t size = in.u32();
      std::size_t per_entry = (p.bits - 1) * GroupElement::kEncodedSize +
                              p.bits * (2 * GroupElement::kEncodedSize + 16 + 2 * Scalar::kBytes);
      if (static_cast<std::uint64_t>(size) * per_entry > in.remaining()) return std::nullopt;
      c.entries.resize(size);
      for (EntryProof& e : c.entries) {
        e.bit_commitments.resize(p.bits - 1);
        for (GroupElement& q : e.bit_commitments) {
          if (!point_fields_ok(in, q)) return std::nullopt;
        }
        e.bits.resize(p.bits);
        for (BitProof& b : e.bits) {
          if (!point_fields_ok(in, b.a0) || !point_fields_ok(in, b.a1)) return std::nullopt;
          b.e0 = read_u128(in);
          if (!scalar_field_ok(in, b.z0) || !scalar_field_ok(in, b.z1)) return std::nullopt;
        }
      }
      seen += size;
      p.chunks.push_back(std::move(c));
    }
    if (!in.done() || seen != entries) return std::nullopt;
    return p;
  } catch (const Error&) {
    return std::nullopt;
  }
}

ProvenTable prove_bounded_offset(std::span<const RingElement> table, RingElement mask,
                                 std::span<const Scalar> randomness, std::uint64_t bound,
                                 Prg& prg) {
  require(!table.empty(), ErrorCode::kPrecondition, "table must be non-empty");
  require(table.size() == randomness.size(), ErrorCode::kPrecondition,
          "one randomness value per table entry");
  require(mask.value <= UINT64_MAX - bound, ErrorCode::kPrecondition,
          "mask outside [0, 2^64 - bound)");
  std::vector<std::uint64_t> offsets;
  std::vector<RingElement> committed;
  offsets.reserve(table.size());
  for (RingElement t : table) {
    require(t.value <= bound, ErrorCode::kPrecondition, "table entry exceeds bound");
    offsets.push_back(t.value);
    committed.push_back(t + mask);
  }
  return prove_bounded_offset_unchecked(committed, offsets, mask, randomness, bound, prg);
}

ProvenTable prove_bounded_offset_unchecked(std::span<const RingElement> committed_values,
                                           std::span<const std::uint64_t> claimed_offsets,
                                           RingElement claimed_mask,
                                           std::span<const Scalar> randomness,
                                           std::uint64_t bound, Prg& prg) {
  require(!committed_values.empty(), ErrorCode::kPrecondition, "table must be non-empty");
  require(committed_values.size() == randomness.size() &&
              committed_values.size() == claimed_offsets.size(),
          ErrorCode::kPrecondition, "length mismatch");
  Scalar mask_rand = Scalar::random(prg);
  std::vector<Commitment> cms;
  std::vector<Scalar> deltas;
  cms.reserve(committed_values.size());
  for (std::size_t i = 0; i < committed_values.size(); ++i) {
    cms.push_back(commit(committed_values[i], randomness[i]));
    deltas.push_back(randomness[i] - mask_rand);
  }
  return prove_core(std::move(cms), claimed_offsets, deltas, Scalar::from_u64(claimed_mask.value),
                    mask_rand, bound, prg);
}

VerifyStatus verify_bounded_offset(std::span<const Commitment> commitments,
                                   const BoundedOffsetProof& proof, std::uint64_t bound) {
  const RangeLayout layout = range_layout(bound);
  const unsigned k = layout.bits;
  const std::size_t n = commitments.size();
  if (n == 0 || proof.bits != k || proof.entry_count() != n) return VerifyStatus::kMalformed;
  const std::vector<std::uint32_t> expected = power_of_two_chunks(n);
  if (proof.chunk_sizes() != expected) return VerifyStatus::kMalformed;
  std::size_t offset = 0;
  for (const ChunkProof& c : proof.chunks) {
    if (c.offset != offset) return VerifyStatus::kMalformed;
    for (const EntryProof& e : c.entries) {
      if (e.bit_commitments.size() != k - 1 || e.bits.size() != k) {
        return VerifyStatus::kMalformed;
      }
    }
    offset += c.size();
  }

  const Commitment& cr = proof.mask_commitment;
  const ContextDigest ctx = context_digest(commitments, cr, bound, k);

  {
    const MaskProof& mp = proof.mask_proof;
    Scalar c = mask_challenge(ctx, mp.nonce);
    const GroupElement* pts[] = {&GroupElement::g(), &mp.nonce, &cr.point};
    const Scalar sc[] = {mp.z_value, -Scalar::from_u64(1), -c};
    if (!GroupElement::multiexp(pts, sc, mp.z_randomness).is_identity()) {
      return VerifyStatus::kReject;
    }
  }

  const Scalar shift = Scalar::from_u64(k == 1 ? layout.weights[0] : 1);
  std::vector<Scalar> weights(k);
  for (unsigned j = 0; j < k; ++j) weights[j] = Scalar::from_u64(layout.weights[j]);

  for (std::size_t ci = 0; ci < proof.chunks.size(); ++ci) {
    const ChunkProof& chunk = proof.chunks[ci];
    const Challenge e_total = chunk_challenge(ctx, ci, chunk);
    Prg rho = batch_weights(ctx, ci, e_total, chunk);

    std::vector<const GroupElement*> pts;
    std::vector<Scalar> sc;
    const std::size_t per_entry = 1 + (k - 1) + 2 * k;
    pts.reserve(chunk.size() * per_entry + 2);
    sc.reserve(chunk.size() * per_entry + 2);
    Scalar h_coeff;
    Scalar g_coeff;
    Scalar cr_coeff;

    for (std::uint32_t ei = 0; ei < chunk.size(); ++ei) {
      const EntryProof& entry = chunk.entries[ei];
      const Commitment& cm = commitments[chunk.offset + ei];
      std::vector<Scalar> cj(k);
      for (unsigned j = 0; j < k; ++j) {
        const BitProof& b = entry.bits[j];
        Challenge e1 = e_total - b.e0;
        Scalar r0 = scalar_from_u128(random_u128(rho));
        Scalar r1 = scalar_from_u128(random_u128(rho));
        Scalar r1e1 = r1 * scalar_from_u128(e1);
        h_coeff = h_coeff + r0 * b.z0 + r1 * b.z1;
        g_coeff = g_coeff + r1e1 * shift;
        cj[j] = r0 * scalar_from_u128(b.e0) + r1e1;
        pts.push_back(&b.a0);
        sc.push_back(-r0);
        pts.push_back(&b.a1);
        sc.push_back(-r1);
      }
      // Bit 0 commitment is CM - CR - sum_{j>=1} w_j C_j.
      pts.push_back(&cm.point);
      sc.push_back(-cj[0]);
      cr_coeff = cr_coeff + cj[0];
      for (unsigned j = 1; j < k; ++j) {
        pts.push_back(&entry.bit_commitments[j - 1]);
        sc.push_back(cj[0] * weights[j] - cj[j]);
      }
    }
    pts.push_back(&cr.point);
    sc.push_back(cr_coeff);
    pts.push_back(&GroupElement::g());
    sc.push_back(g_coeff);
    if (!GroupElement::multiexp(pts, sc, h_coeff).is_identity()) return VerifyStatus::kReject;
  }
  return VerifyStatus::kAccept;
}

}  // namespace colo
