#include "colo/localagg/session.hpp"

#include "colo/core/error.hpp"

namespace colo {
namespace {

constexpr std::string_view kOtRole = "builder-to-evaluator";

SessionId leaf_session(const QueryPlan& leaf, const Bytes& tag) {
  return ot_session_id(as_bytes(leaf.query_id), tag, kOtRole);
}

Frame make_frame(FrameType type, std::uint16_t leaf, Bytes body) {
  return Frame{type, leaf, std::move(body)};
}

bool valid_leaf(const Frame& f, std::size_t count) { return f.leaf < count; }

}  // namespace

const char* abort_reason_name(AbortReason r) {
  switch (r) {
    case AbortReason::kNone: return "none";
    case AbortReason::kProofRejected: return "proof-rejected";
    case AbortReason::kMalformed: return "malformed";
    case AbortReason::kOpeningMismatch: return "opening-mismatch";
    case AbortReason::kOtFailure: return "ot-failure";
    case AbortReason::kPeerAbort: return "peer-abort";
    case AbortReason::kTransport: return "transport";
  }
  return "?";
}

Bytes session_tag(std::uint64_t builder, std::uint64_t evaluator) {
  ByteWriter w;
  w.u64(builder);
  w.u64(evaluator);
  return w.take();
}

// ---- builder ----

BuilderSession::BuilderSession(const QueryPlan& root, const AttributeMap& own,
                               const AttributeMap& edge, Bytes tag, Prg prg, BuilderAttack attack)
    : leaves_(root.leaves()),
      own_(own),
      edge_(edge),
      tag_(std::move(tag)),
      prg_(std::move(prg)),
      attack_(attack),
      senders_(leaves_.size()),
      outcomes_(leaves_.size()) {}

std::vector<Frame> BuilderSession::start() {
  std::vector<Frame> out;
  tables_.reserve(leaves_.size());
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    const QueryPlan& leaf = *leaves_[i];
    std::vector<std::int64_t> in = leaf.builder_inputs(own_, edge_);
    tables_.push_back(build_adversarial_table(leaf, in, attack_, prg_));
    auto [sender, s] = ot_sender_setup(prg_, leaf_session(leaf, tag_), leaf.table_length);
    senders_[i] = std::move(sender);
    Announce a{tables_[i].table.proven.commitments, tables_[i].table.proven.proof, s};
    out.push_back(make_frame(FrameType::kAnnounce, static_cast<std::uint16_t>(i), a.serialize()));
  }
  return out;
}

std::vector<Frame> BuilderSession::on_frame(const Frame& f) {
  if (!valid_leaf(f, leaves_.size())) return {};
  LeafOutcome& o = outcomes_[f.leaf];
  if (o.status != LeafStatus::kPending) return {};
  auto abort = [&](AbortReason reason) {
    o.status = LeafStatus::kAborted;
    o.reason = reason;
    o.contribution = RingElement{};
    return std::vector<Frame>{make_frame(FrameType::kAbort, f.leaf, Bytes{static_cast<std::uint8_t>(reason)})};
  };
  switch (f.type) {
    case FrameType::kOtRequest: {
      if (!senders_[f.leaf] || senders_[f.leaf]->used()) return abort(AbortReason::kMalformed);
      auto req = OtReceiverMsg::deserialize(f.body);
      if (!req) return abort(AbortReason::kMalformed);
      try {
        OtSenderMsg msg = ot_send_payloads(*senders_[f.leaf], *req, tables_[f.leaf].payloads);
        return {make_frame(FrameType::kOtResponse, f.leaf, msg.serialize())};
      } catch (const Error&) {
        return abort(AbortReason::kOtFailure);
      }
    }
    case FrameType::kAck:
      if (f.body.size() == kAckBodySize && f.body[0] == 0 && senders_[f.leaf] &&
          senders_[f.leaf]->used()) {
        o.status = LeafStatus::kDone;
        o.contribution = -tables_[f.leaf].table.mask;
      } else {
        const bool known = f.body.size() == kAckBodySize && f.body[0] > 0 &&
                           f.body[0] <= static_cast<std::uint8_t>(AbortReason::kTransport);
        o.status = LeafStatus::kAborted;
        o.reason = known ? static_cast<AbortReason>(f.body[0]) : AbortReason::kPeerAbort;
      }
      return {};
    default: return {};
  }
}

bool BuilderSession::finished() const {
  for (const LeafOutcome& o : outcomes_) {
    if (o.status == LeafStatus::kPending) return false;
  }
  return true;
}

void BuilderSession::abort_pending(AbortReason reason) {
  for (LeafOutcome& o : outcomes_) {
    if (o.status == LeafStatus::kPending) o = {LeafStatus::kAborted, reason, RingElement{}};
  }
}

// ---- evaluator ----

EvaluatorSession::EvaluatorSession(const QueryPlan& root, const AttributeMap& own, Bytes tag,
                                   Prg prg)
    : leaves_(root.leaves()),
      own_(own),
      tag_(std::move(tag)),
      prg_(std::move(prg)),
      pending_(leaves_.size()),
      outcomes_(leaves_.size()) {}

Frame EvaluatorSession::reject(std::uint16_t leaf, AbortReason reason) {
  outcomes_[leaf] = {LeafStatus::kAborted, reason, RingElement{}};
  pending_[leaf] = {};
  // The ack body is 0 on acceptance, otherwise the abort reason.
  return make_frame(FrameType::kAck, leaf, Bytes{static_cast<std::uint8_t>(reason)});
}

std::vector<Frame> EvaluatorSession::on_frame(const Frame& f) {
  if (!valid_leaf(f, leaves_.size())) return {};
  if (outcomes_[f.leaf].status != LeafStatus::kPending) return {};
  const QueryPlan& leaf = *leaves_[f.leaf];
  Pending& p = pending_[f.leaf];
  switch (f.type) {
    case FrameType::kAnnounce: {
      if (p.receiver) return {reject(f.leaf, AbortReason::kMalformed)};
      auto a = Announce::deserialize(f.body);
      if (!a) return {reject(f.leaf, AbortReason::kMalformed)};
      std::vector<std::int64_t> in = leaf.evaluator_inputs(own_);
      auto j = evaluator_verify_and_choose(leaf, a->commitments, a->proof, in);
      if (!j) return {reject(f.leaf, AbortReason::kProofRejected)};
      ++verified_;
      try {
        auto [receiver, msg] = ot_receive_request(a->ot_key, *j, leaf.table_length, prg_,
                                                  leaf_session(leaf, tag_));
        p.receiver = std::move(receiver);
        p.commitments = std::move(a->commitments);
        return {make_frame(FrameType::kOtRequest, f.leaf, msg.serialize())};
      } catch (const Error&) {
        return {reject(f.leaf, AbortReason::kOtFailure)};
      }
    }
    case FrameType::kOtResponse: {
      if (!p.receiver) return {reject(f.leaf, AbortReason::kMalformed)};
      auto msg = OtSenderMsg::deserialize(f.body);
      if (!msg) return {reject(f.leaf, AbortReason::kMalformed)};
      OtPayload opening;
      try {
        opening = ot_receive_payload(*p.receiver, *msg);
      } catch (const Error&) {
        return {reject(f.leaf, AbortReason::kOtFailure)};
      }
      if (!verify_opening(p.commitments[p.receiver->choice()], opening)) {
        return {reject(f.leaf, AbortReason::kOpeningMismatch)};
      }
      outcomes_[f.leaf] = {LeafStatus::kDone, AbortReason::kNone, opening.value};
      pending_[f.leaf] = {};
      return {make_frame(FrameType::kAck, f.leaf, Bytes{0})};
    }
    case FrameType::kAbort:
      outcomes_[f.leaf] = {LeafStatus::kAborted, AbortReason::kPeerAbort, RingElement{}};
      pending_[f.leaf] = {};
      return {};
    default: return {};
  }
}

bool EvaluatorSession::finished() const {
  for (const LeafOutcome& o : outcomes_) {
    if (o.status == LeafStatus::kPending) return false;
  }
  return true;
}

void EvaluatorSession::abort_pending(AbortReason reason) {
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (outcomes_[i].status == LeafStatus::kPending) {
      outcomes_[i] = {LeafStatus::kAborted, reason, RingElement{}};
      pending_[i] = {};
    }
  }
}

// ---- self ----

SelfSession::SelfSession(const QueryPlan& root, Prg prg)
    : leaves_(root.leaves()), prg_(std::move(prg)), done_(leaves_.size(), false) {
  masks_.reserve(leaves_.size());
  for (const QueryPlan* leaf : leaves_) masks_.push_back(sample_mask(leaf->bound, prg_));
}

Frame SelfSession::dummy(FrameType type, std::uint16_t leaf, std::size_t size) {
  return make_frame(type, leaf, prg_.bytes(size));
}

std::vector<Frame> SelfSession::start() {
  std::vector<Frame> out;
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    out.push_back(dummy(FrameType::kAnnounce, static_cast<std::uint16_t>(i),
                        announce_body_size(leaves_[i]->table_length, leaves_[i]->bound)));
  }
  return out;
}

std::vector<Frame> SelfSession::on_frame(const Frame& f) {
  if (!valid_leaf(f, leaves_.size()) || done_[f.leaf]) return {};
  switch (f.type) {
    case FrameType::kAnnounce:
      return {dummy(FrameType::kOtRequest, f.leaf, ot_request_body_size())};
    case FrameType::kOtRequest:
      return {dummy(FrameType::kOtResponse, f.leaf,
                    ot_response_body_size(leaves_[f.leaf]->table_length))};
    case FrameType::kOtResponse: return {make_frame(FrameType::kAck, f.leaf, Bytes{0})};
    case FrameType::kAck: done_[f.leaf] = true; return {};
    default: return {};
  }
}

bool SelfSession::finished() const {
  for (bool d : done_) {
    if (!d) return false;
  }
  return true;
}

void SelfSession::abort() { std::fill(done_.begin(), done_.end(), true); }

std::vector<RingElement> SelfSession::contributions() const {
  std::vector<RingElement> out;
  out.reserve(masks_.size());
  for (RingElement r : masks_) out.push_back(r + (-r));
  return out;
}

// ---- slot ----

SlotProtocol SlotProtocol::real(std::optional<BuilderSession> builder,
                                std::optional<EvaluatorSession> evaluator) {
  SlotProtocol s;
  s.builder_ = std::move(builder);
  s.evaluator_ = std::move(evaluator);
  return s;
}

SlotProtocol SlotProtocol::self(SelfSession session) {
  SlotProtocol s;
  s.self_ = std::move(session);
  return s;
}

std::vector<Frame> SlotProtocol::start() {
  if (self_) return self_->start();
  return builder_ ? builder_->start() : std::vector<Frame>{};
}

std::vector<Frame> SlotProtocol::on_frame(const Frame& f) {
  if (self_) return self_->on_frame(f);
  switch (f.type) {
    case FrameType::kAnnounce:
    case FrameType::kOtResponse:
    case FrameType::kAbort:
      return evaluator_ ? evaluator_->on_frame(f) : std::vector<Frame>{};
    case FrameType::kOtRequest:
    case FrameType::kAck:
      return builder_ ? builder_->on_frame(f) : std::vector<Frame>{};
  }
  return {};
}

bool SlotProtocol::finished() const {
  if (self_) return self_->finished();
  return (!builder_ || builder_->finished()) && (!evaluator_ || evaluator_->finished());
}

void SlotProtocol::abort_pending(AbortReason reason) {
  if (self_) self_->abort();
  if (builder_) builder_->abort_pending(reason);
  if (evaluator_) evaluator_->abort_pending(reason);
}

std::vector<RingElement> SlotProtocol::contributions(std::size_t leaf_count) const {
  std::vector<RingElement> out(leaf_count);
  if (self_) {
    auto c = self_->contributions();
    for (std::size_t i = 0; i < leaf_count && i < c.size(); ++i) out[i] = c[i];
    return out;
  }
  for (std::size_t i = 0; i < leaf_count; ++i) {
    if (builder_ && builder_->outcomes()[i].status == LeafStatus::kDone) {
      out[i] = out[i] + builder_->outcomes()[i].contribution;
    }
    if (evaluator_ && evaluator_->outcomes()[i].status == LeafStatus::kDone) {
      out[i] = out[i] + evaluator_->outcomes()[i].contribution;
    }
  }
  return out;
}

std::size_t run_direct(BuilderSession& builder, EvaluatorSession& evaluator) {
  std::vector<Frame> to_evaluator = builder.start();
  std::vector<Frame> to_builder;
  std::size_t count = 0;
  auto wire = [](const Frame& f) {
    FrameDecoder d;
    d.feed(encode_frame(f));
    return *d.next();
  };
  while (!to_evaluator.empty() || !to_builder.empty()) {
    for (const Frame& f : to_evaluator) {
      ++count;
      auto out = evaluator.on_frame(wire(f));
      to_builder.insert(to_builder.end(), out.begin(), out.end());
    }
    to_evaluator.clear();
    for (const Frame& f : to_builder) {
      ++count;
      auto out = builder.on_frame(wire(f));
      to_evaluator.insert(to_evaluator.end(), out.begin(), out.end());
    }
    to_builder.clear();
  }
  return count;
}

}  // namespace colo
