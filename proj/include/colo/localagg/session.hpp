#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "colo/core/prg.hpp"
#include "colo/localagg/frames.hpp"
#include "colo/localagg/table.hpp"
#include "colo/ot/simplest_ot.hpp"
#include "colo/query/plan.hpp"

namespace colo {

enum class LeafStatus : std::uint8_t { kPending, kDone, kAborted };

enum class AbortReason : std::uint8_t {
  kNone,
  kProofRejected,
  kMalformed,
  kOpeningMismatch,
  kOtFailure,
  kPeerAbort,
  kTransport,
};

const char* abort_reason_name(AbortReason r);

// Per-leaf outcome. contribution is what this endpoint adds to its
// accumulator for the leaf: T'[j] for an evaluator, -r for a builder, and
// zero while pending or after an abort.
struct LeafOutcome {
  LeafStatus status = LeafStatus::kPending;
  AbortReason reason = AbortReason::kNone;
  RingElement contribution;
};

using AttributeMap = std::map<std::string, std::int64_t>;

// Directed session identity: builder device, evaluator device.
Bytes session_tag(std::uint64_t builder, std::uint64_t evaluator);

// Table-builder side (device B) for every leaf of a plan.
class BuilderSession {
 public:
  BuilderSession(const QueryPlan& root, const AttributeMap& own, const AttributeMap& edge,
                 Bytes tag, Prg prg, BuilderAttack attack = BuilderAttack::kNone);

  std::vector<Frame> start();
  std::vector<Frame> on_frame(const Frame& f);
  bool finished() const;
  const std::vector<LeafOutcome>& outcomes() const { return outcomes_; }
  void abort_pending(AbortReason reason);

 private:
  std::vector<const QueryPlan*> leaves_;
  AttributeMap own_;
  AttributeMap edge_;
  Bytes tag_;
  Prg prg_;
  BuilderAttack attack_;
  std::vector<AdversarialTable> tables_;
  std::vector<std::optional<OtSender>> senders_;
  std::vector<LeafOutcome> outcomes_;
};

// Evaluator side (device A) for every leaf of a plan.
class EvaluatorSession {
 public:
  EvaluatorSession(const QueryPlan& root, const AttributeMap& own, Bytes tag, Prg prg);

  std::vector<Frame> on_frame(const Frame& f);
  bool finished() const;
  const std::vector<LeafOutcome>& outcomes() const { return outcomes_; }
  void abort_pending(AbortReason reason);
  // Number of leaves whose proof verified; OT is only issued for these.
  std::size_t verified_count() const { return verified_; }

 private:
  struct Pending {
    std::vector<Commitment> commitments;
    std::optional<OtReceiver> receiver;
  };
  Frame reject(std::uint16_t leaf, AbortReason reason);

  std::vector<const QueryPlan*> leaves_;
  AttributeMap own_;
  Bytes tag_;
  Prg prg_;
  std::vector<Pending> pending_;
  std::vector<LeafOutcome> outcomes_;
  std::size_t verified_ = 0;
};

// Padding session: the device talks to itself with size-matched random frames
// and a telescoping mask pair (r on the evaluator side, -r on the builder side).
class SelfSession {
 public:
  SelfSession(const QueryPlan& root, Prg prg);

  std::vector<Frame> start();
  std::vector<Frame> on_frame(const Frame& f);
  bool finished() const;
  // Gives up on the remaining exchanges; contributions stay zero.
  void abort();
  std::vector<RingElement> contributions() const;

 private:
  Frame dummy(FrameType type, std::uint16_t leaf, std::size_t size);

  std::vector<const QueryPlan*> leaves_;
  Prg prg_;
  std::vector<RingElement> masks_;
  std::vector<bool> done_;
};

// All protocol state behind one slot of a device: either a real edge (one or
// both directions) or a padding self-session.
class SlotProtocol {
 public:
  static SlotProtocol real(std::optional<BuilderSession> builder,
                           std::optional<EvaluatorSession> evaluator);
  static SlotProtocol self(SelfSession s);

  std::vector<Frame> start();
  // Routes a received frame to the session it belongs to.
  std::vector<Frame> on_frame(const Frame& f);
  bool finished() const;
  bool is_self() const { return self_.has_value(); }
  void abort_pending(AbortReason reason);
  // Per-leaf sum of the contributions this endpoint commits.
  std::vector<RingElement> contributions(std::size_t leaf_count) const;

  const std::optional<BuilderSession>& builder() const { return builder_; }
  const std::optional<EvaluatorSession>& evaluator() const { return evaluator_; }

 private:
  std::optional<BuilderSession> builder_;
  std::optional<EvaluatorSession> evaluator_;
  std::optional<SelfSession> self_;
};

// Drives one builder/evaluator pair to completion, passing every frame
// through its wire encoding. Returns the number of frames exchanged.
std::size_t run_direct(BuilderSession& builder, EvaluatorSession& evaluator);

}  // namespace colo
