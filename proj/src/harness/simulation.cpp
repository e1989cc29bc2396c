#include "colo/harness/simulation.hpp"

#include <algorithm>
#include <optional>

#include "colo/aggregation/distribution.hpp"
#include "colo/aggregation/report.hpp"
#include "colo/aggregation/shares.hpp"
#include "colo/commitproof/bounded_offset.hpp"
#include "colo/core/error.hpp"
#include "colo/core/parallel.hpp"
#include "colo/harness/attributes.hpp"
#include "colo/harness/oracle.hpp"
#include "colo/localagg/padding.hpp"
#include "colo/localagg/session.hpp"
#include "colo/mixnet/channel.hpp"
#include "colo/mixnet/dead_drop.hpp"
#include "colo/mixnet/onion.hpp"

namespace colo {
namespace {

constexpr int kLossLimit = 2;
constexpr int kStallLimit = 3;

[[noreturn]] void rethrow_with_phase(const std::string& phase) {
  try {
    throw;
  } catch (const Error& e) {
    throw Error(e.code(), phase + ": " + e.what());
  }
}

BuilderAttack parse_attack(const std::string& name) {
  for (BuilderAttack a : {BuilderAttack::kNone, BuilderAttack::kOutOfRange,
                          BuilderAttack::kInconsistentMask, BuilderAttack::kWrongOpening,
                          BuilderAttack::kSwapPayload}) {
    if (name == builder_attack_name(a)) return a;
  }
  fail(ErrorCode::kConfig, "unknown builder attack '" + name + "'");
}

std::string seed_label(std::string_view prefix, std::uint64_t i) {
  return std::string(prefix) + "/" + std::to_string(i);
}

struct Slot {
  std::optional<std::uint32_t> peer;
  std::uint32_t peer_slot = 0;
  Seed key{};
  Channel channel;
  SlotProtocol protocol;
  int losses = 0;
  int stall = 0;
  bool transport_abort = false;
  // This round's state.
  DeadDrop drop;
  std::vector<LayerKey> reply_keys;
  bool sent_data = false;

  bool done() const { return protocol.finished() && !channel.has_pending(); }
};

struct Device {
  Seed seed{};
  X25519KeyPair keys;
  Prg onion_prg{Seed{}};
  std::vector<Slot> slots;
  std::vector<Submission> outbox;
  std::uint64_t onions_sent = 0;
  std::uint64_t onion_bytes_sent = 0;
  std::uint64_t layers_built = 0;
  std::uint64_t replies_received = 0;
  std::uint64_t reply_bytes_received = 0;
  std::uint64_t layers_opened = 0;
  std::uint64_t malformed = 0;
  std::vector<RingElement> accumulator;
};

void abort_slot(Slot& slot, AbortReason reason) {
  slot.protocol.abort_pending(reason);
  slot.channel.close();
}

// Leaf outcome of the session with `peer` in which `device` plays one role.
const LeafOutcome* outcome_of(const Device& d, std::uint32_t peer, bool builder, std::size_t leaf) {
  for (const Slot& s : d.slots) {
    if (s.peer != peer) continue;
    if (builder) {
      return s.protocol.builder() ? &s.protocol.builder()->outcomes()[leaf] : nullptr;
    }
    return s.protocol.evaluator() ? &s.protocol.evaluator()->outcomes()[leaf] : nullptr;
  }
  return nullptr;
}

struct Prepared {
  Graph graph;
  Attributes attrs;
};

Prepared prepare(const RunConfig& config, const RunInputs& inputs) {
  const Seed run_seed = seed_from_u64(config.seed);
  Prepared p;
  Prg bound_prg(derive_seed(run_seed, "degree-bound"));
  p.graph = make_graph(inputs.graph.nodes, bound_degree(inputs.graph.nodes, inputs.graph.edges,
                                                        config.degree_bound, bound_prg));
  try {
    p.attrs = synthesize_attributes(p.graph, inputs.plan.preprocess,
                                    derive_seed(run_seed, "attributes"));
  } catch (...) {
    rethrow_with_phase("setup");
  }
  return p;
}

}  // namespace

RunInputs load_inputs(const RunConfig& config) {
  if (config.graph.empty() == (config.gen_n == 0)) {
    fail(ErrorCode::kConfig, "exactly one of graph and gen-n must be given");
  }
  RunInputs in;
  try {
    in.plan = parse_query(read_text_file(config.query));
  } catch (...) {
    rethrow_with_phase("query");
  }
  try {
    in.certified = parse_certified(read_text_file(certified_path(config)));
  } catch (...) {
    rethrow_with_phase("certified");
  }
  if (!config.scenario.empty()) {
    try {
      in.scenario = load_scenario(config.scenario);
    } catch (...) {
      rethrow_with_phase("scenario");
    }
  }
  const Seed run_seed = seed_from_u64(config.seed);
  try {
    if (!config.graph.empty()) {
      in.graph = load_snap(config.graph);
    } else {
      Prg prg(derive_seed(run_seed, "graph"));
      std::size_t cap = config.gen_max_degree > 0 ? config.gen_max_degree : config.degree_bound;
      in.graph = gen_graph(config.gen_n, config.gen_degree, cap, prg);
    }
    if (config.subsample > 0 && in.graph.nodes > config.subsample) {
      Prg prg(derive_seed(run_seed, "subsample"));
      in.graph = subsample(in.graph, config.subsample, prg);
    }
  } catch (...) {
    rethrow_with_phase("graph");
  }
  return in;
}

RunResult simulate(const RunConfig& config, const RunInputs& inputs) {
  validate(config);
  const QueryPlan& plan = inputs.plan;
  const Scenario& scenario = inputs.scenario;
  const Seed run_seed = seed_from_u64(config.seed);
  const std::uint32_t M = config.servers;
  const std::size_t d = config.degree_bound;
  const auto leaves = plan.leaves();
  const std::size_t L = leaves.size();
  const Bytes qid(plan.query_id.begin(), plan.query_id.end());

  RunResult result;
  RunDiagnostics& diag = result.diag;

  // Setup: degree bounding and attribute synthesis.
  Prepared prep = prepare(config, inputs);
  result.graph = std::move(prep.graph);
  const Graph& g = result.graph;
  const Attributes& attrs = prep.attrs;
  const std::size_t N = g.nodes;
  diag.nodes = N;
  diag.edges_before_bound = inputs.graph.edges.size();
  diag.edges = g.edges.size();
  diag.directed_sessions = directed_sessions(g, config.direction).size();

  // Distribution.
  std::vector<ServerSigningKey> signing;
  std::vector<SigningPublic> signing_pk;
  for (std::uint32_t s = 0; s < M; ++s) {
    signing.push_back(signing_keypair(derive_seed(run_seed, seed_label("server-sign", s))));
    signing_pk.push_back(signing.back().pk);
  }
  SignedQuery signed_query;
  try {
    signed_query = sign_and_broadcast(plan, signing, inputs.certified, scenario);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kPrecondition) throw;
    fail(ErrorCode::kProtocolAbort, std::string("distribution: ") + e.what());
  }
  // Every device receives the same broadcast, so one verification stands for all.
  diag.valid_signatures = valid_signatures(signed_query, signing_pk);
  diag.signature_threshold = signature_threshold(M, config.malicious_frac);
  if (!device_accepts(signed_query, signing_pk, config.malicious_frac)) {
    fail(ErrorCode::kProtocolAbort,
         "distribution: " + std::to_string(diag.valid_signatures) + " valid signatures, " +
             std::to_string(diag.signature_threshold) + " required");
  }

  // Device setup.
  const auto adjacency = g.adjacency();
  std::vector<Device> devices(N);
  for (std::uint32_t i = 0; i < N; ++i) {
    Device& dev = devices[i];
    dev.seed = derive_seed(run_seed, seed_label("device", i));
    Prg key_prg(derive_seed(dev.seed, "x25519"));
    dev.keys = x25519_keypair(key_prg);
    dev.onion_prg = Prg(derive_seed(dev.seed, "onion"));
  }
  try {
    for (std::uint32_t i = 0; i < N; ++i) {
      Device& dev = devices[i];
      BuilderAttack attack = BuilderAttack::kNone;
      if (auto a = scenario.builder_attack(i)) attack = parse_attack(*a);
      auto plan_slots = pad_to_degree(adjacency[i], d);
      dev.slots.reserve(d);
      for (std::uint32_t s = 0; s < plan_slots.size(); ++s) {
        const auto& peer = plan_slots[s];
        if (!peer) {
          dev.slots.push_back(Slot{std::nullopt, s, self_slot_key(dev.seed, s),
                                   Channel(config.slot_size, 0, true),
                                   SlotProtocol::self(SelfSession(
                                       plan, Prg(derive_seed(dev.seed, seed_label("self", s)))))});
          continue;
        }
        const std::uint32_t j = *peer;
        const X25519Public& peer_pk = devices[j].keys.pk;
        std::optional<BuilderSession> builder;
        std::optional<EvaluatorSession> evaluator;
        if (config.direction == DirectionPolicy::kBoth || i > j) {
          builder.emplace(plan, attrs.node[i], attrs.edge_of(i, j), session_tag(i, j),
                          Prg(derive_seed(dev.seed, seed_label("builder", j))), attack);
        }
        if (config.direction == DirectionPolicy::kBoth || i < j) {
          evaluator.emplace(plan, attrs.node[i], session_tag(j, i),
                            Prg(derive_seed(dev.seed, seed_label("evaluator", j))));
        }
        auto it = std::find(adjacency[j].begin(), adjacency[j].end(), i);
        const std::uint8_t role = dev.keys.pk < peer_pk ? 0 : 1;
        dev.slots.push_back(Slot{j, static_cast<std::uint32_t>(it - adjacency[j].begin()),
                                 edge_key(dev.keys, peer_pk),
                                 Channel(config.slot_size, role, false),
                                 SlotProtocol::real(std::move(builder), std::move(evaluator))});
      }
      for (Slot& slot : dev.slots) slot.channel.push(slot.protocol.start());
    }
  } catch (...) {
    rethrow_with_phase("setup");
  }

  // Local aggregation: one fragment per slot and round until every slot is done.
  Mixnet net(config.mixnet(), derive_seed(run_seed, "mixnet"), scenario);
  const MixnetConfig& mc = net.config();
  auto all_done = [&] {
    for (const Device& dev : devices) {
      for (const Slot& s : dev.slots) {
        if (!s.done()) return false;
      }
    }
    return true;
  };
  std::vector<std::size_t> slot_base(N + 1, 0);
  for (std::uint32_t i = 0; i < N; ++i) slot_base[i + 1] = slot_base[i] + devices[i].slots.size();

  std::uint64_t round = 0;
  try {
    for (; round < config.max_rounds && !all_done(); ++round) {
      parallel_for(N, config.threads, [&](std::size_t i) {
        Device& dev = devices[i];
        dev.outbox.clear();
        for (std::uint32_t s = 0; s < dev.slots.size(); ++s) {
          Slot& slot = dev.slots[s];
          Bytes fragment = slot.channel.fragment();
          slot.sent_data = slot.channel.last_was_data();
          slot.drop = derive_drop(slot.key, qid, round, mc.servers);
          std::vector<RouteHop> route = net.random_route(dev.onion_prg);
          BuiltOnion onion = build_onion(fragment, route, net.hop(slot.drop.server), slot.drop,
                                         mc.slot_size, dev.onion_prg);
          slot.reply_keys = std::move(onion.reply_keys);
          dev.layers_built += slot.reply_keys.size();
          dev.onions_sent += 1;
          dev.onion_bytes_sent += onion.data.size();
          dev.outbox.push_back(Submission{static_cast<std::uint32_t>(i), s, route[0].server,
                                          std::move(onion.data)});
        }
      });

      std::vector<Submission> submissions;
      submissions.reserve(slot_base[N]);
      for (std::uint32_t i = 0; i < N; ++i) {
        for (const Slot& slot : devices[i].slots) {
          if (!slot.peer) continue;
          ++diag.drop_checks;
          const Slot& other = devices[*slot.peer].slots[slot.peer_slot];
          if (!(other.drop == slot.drop)) ++diag.drop_mismatches;
        }
        for (Submission& sub : devices[i].outbox) {
          if (diag.onion_bytes == 0) diag.onion_bytes = sub.onion.size();
          if (sub.onion.size() != diag.onion_bytes) diag.onion_sizes_uniform = false;
          submissions.push_back(std::move(sub));
        }
        devices[i].outbox.clear();
      }

      std::vector<std::optional<Bytes>> replies(slot_base[N]);
      for (Delivery& del : net.run_round(round, std::move(submissions))) {
        replies[slot_base[del.device] + del.slot] = std::move(del.reply);
      }
      if (!net.last_round().sizes_uniform) diag.onion_sizes_uniform = false;

      parallel_for(N, config.threads, [&](std::size_t i) {
        Device& dev = devices[i];
        for (std::uint32_t s = 0; s < dev.slots.size(); ++s) {
          Slot& slot = dev.slots[s];
          std::optional<Bytes>& sealed = replies[slot_base[i] + s];
          std::optional<Bytes> opened;
          if (sealed) {
            dev.replies_received += 1;
            dev.reply_bytes_received += sealed->size();
            opened = open_reply(*sealed, slot.reply_keys);
            if (opened) dev.layers_opened += slot.reply_keys.size();
          }
          std::vector<Frame> frames;
          try {
            frames = slot.channel.receive(opened);
            for (const Frame& f : frames) slot.channel.push(slot.protocol.on_frame(f));
          } catch (const Error& e) {
            if (e.code() != ErrorCode::kMalformed) throw;
            ++dev.malformed;
            abort_slot(slot, AbortReason::kMalformed);
            continue;
          }
          if (slot.channel.closed()) continue;
          const bool unfinished = !slot.protocol.finished();
          if (slot.channel.last_outcome() != RoundOutcome::kDelivered) {
            if ((slot.sent_data || unfinished) && ++slot.losses >= kLossLimit) {
              slot.transport_abort = true;
              abort_slot(slot, AbortReason::kTransport);
            }
          } else if (unfinished && !slot.sent_data && !slot.channel.last_received_data() &&
                     !slot.channel.has_pending()) {
            if (++slot.stall >= kStallLimit) {
              slot.transport_abort = true;
              abort_slot(slot, AbortReason::kTransport);
            }
          } else {
            slot.stall = 0;
          }
        }
      });
    }
  } catch (...) {
    rethrow_with_phase("local aggregation");
  }
  diag.rounds = round;

  // Whatever is still open at the round limit is a transport failure.
  for (Device& dev : devices) {
    for (Slot& slot : dev.slots) {
      if (!slot.protocol.finished()) {
        slot.transport_abort = true;
        abort_slot(slot, AbortReason::kTransport);
      }
    }
  }

  // Per-device accumulators and share upload.
  std::vector<std::vector<ShareUpload>> inbox(M);
  for (std::uint32_t i = 0; i < N; ++i) {
    Device& dev = devices[i];
    dev.accumulator.assign(L, RingElement{});
    for (const Slot& slot : dev.slots) {
      auto c = slot.protocol.contributions(L);
      for (std::size_t l = 0; l < L; ++l) dev.accumulator[l] += c[l];
    }
    result.device_results.push_back(dev.accumulator);
    Prg share_prg(derive_seed(dev.seed, "shares"));
    for (ShareUpload& up : share_result(i, dev.accumulator, M, share_prg)) {
      inbox[up.server].push_back(std::move(up));
    }
  }

  // Global aggregation, with scripted share tampering.
  std::vector<ServerTally> tallies;
  std::vector<std::uint64_t> shares_received(M), shares_dropped(M), shares_duplicated(M);
  for (std::uint32_t s = 0; s < M; ++s) {
    std::vector<ShareUpload>& box = inbox[s];
    shares_received[s] = box.size();
    Prg tamper(derive_seed(run_seed, seed_label("server-aggregation", s)));
    auto drops = static_cast<std::uint64_t>(scenario.server_total("drop-share", s));
    for (; drops > 0 && !box.empty(); --drops) {
      box.erase(box.begin() + static_cast<std::ptrdiff_t>(tamper.uniform(box.size())));
      ++shares_dropped[s];
    }
    auto dups = static_cast<std::uint64_t>(scenario.server_total("duplicate-share", s));
    for (; dups > 0 && !box.empty(); --dups) {
      ShareUpload copy = box[tamper.uniform(box.size())];
      box.push_back(std::move(copy));
      ++shares_duplicated[s];
    }
    tallies.push_back(tally(s, L, box));
  }
  try {
    result.reconstructed = reconstruct(tallies, M);
  } catch (...) {
    rethrow_with_phase("aggregation");
  }

  // Oracles.
  result.oracle = oracle(plan, g, attrs, config.direction);
  result.surviving_oracle.assign(L, RingElement{});
  for (auto [e, b] : directed_sessions(g, config.direction)) {
    for (std::size_t l = 0; l < L; ++l) {
      const LeafOutcome* eo = outcome_of(devices[e], b, false, l);
      const LeafOutcome* bo = outcome_of(devices[b], e, true, l);
      if (eo && bo && eo->status == LeafStatus::kDone && bo->status == LeafStatus::kDone) {
        result.surviving_oracle[l] += pair_value(*leaves[l], attrs, e, b);
      }
    }
  }
  diag.matches_oracle = result.reconstructed == result.oracle;
  diag.matches_surviving_oracle = result.reconstructed == result.surviving_oracle;
  result.report = analyst_finalize(plan, result.reconstructed);

  // Metrics.
  auto& metrics = result.metrics;
  std::uint64_t device_onion_bytes = 0, device_reply_bytes = 0;
  for (std::uint32_t i = 0; i < N; ++i) {
    const Device& dev = devices[i];
    MetricsRecord dist{"device", i, "distribution", {}};
    dist.counters["signatures_received"] = signed_query.signatures.size();
    dist.counters["query_bytes_received"] = signed_query.canonical.size();
    metrics.push_back(std::move(dist));

    MetricsRecord rec{"device", i, "localagg", {}};
    auto& c = rec.counters;
    std::uint64_t commit_real = 0, commit_pad = 0, ot_sender = 0, ot_receiver = 0;
    std::map<std::uint32_t, std::uint64_t> chunks;
    for (const Slot& slot : dev.slots) {
      c["frames_sent"] += slot.channel.frames_sent();
      c["frames_received"] += slot.channel.frames_received();
      c["frame_bytes_sent"] += slot.channel.frame_bytes_sent();
      c["data_fragments"] += slot.channel.data_fragments();
      c["retransmissions"] += slot.channel.retransmissions();
      c["losses"] += static_cast<std::uint64_t>(slot.losses);
      c["transport_aborts"] += slot.transport_abort ? 1 : 0;
      diag.frames_sent += slot.channel.frames_sent();
      diag.frames_delivered += slot.channel.frames_received();
      diag.losses += static_cast<std::uint64_t>(slot.losses);
      diag.transport_aborts += slot.transport_abort ? 1 : 0;
      const bool self = slot.protocol.is_self();
      const bool builds = self || slot.protocol.builder().has_value();
      const bool evaluates = self || slot.protocol.evaluator().has_value();
      for (const QueryPlan* leaf : leaves) {
        if (builds) {
          (self ? commit_pad : commit_real) += leaf->table_length;
          ++ot_sender;
          for (std::uint32_t size : power_of_two_chunks(leaf->table_length)) ++chunks[size];
        }
        if (evaluates) ++ot_receiver;
      }
      auto count = [&](const std::vector<LeafOutcome>& outs) {
        for (const LeafOutcome& o : outs) {
          ++diag.leaf_sessions;
          if (o.status == LeafStatus::kDone) {
            ++diag.leaf_sessions_done;
            ++c["leaf_sessions_done"];
          } else if (o.status == LeafStatus::kAborted) {
            ++diag.leaf_sessions_aborted;
            ++c["leaf_sessions_aborted"];
            ++diag.abort_reasons[abort_reason_name(o.reason)];
          }
        }
      };
      if (slot.protocol.builder()) count(slot.protocol.builder()->outcomes());
      if (slot.protocol.evaluator()) count(slot.protocol.evaluator()->outcomes());
    }
    c["slots"] = dev.slots.size();
    c["real_slots"] = static_cast<std::uint64_t>(
        std::count_if(dev.slots.begin(), dev.slots.end(), [](const Slot& s) { return s.peer; }));
    c["commitments"] = commit_real + commit_pad;
    c["commitments_real"] = commit_real;
    c["commitments_padding"] = commit_pad;
    c["proof_entries"] = commit_real + commit_pad;
    for (auto [size, n] : chunks) c["proof_chunk_" + std::to_string(size)] = n;
    c["ot_sender_sessions"] = ot_sender;
    c["ot_receiver_sessions"] = ot_receiver;
    c["onions_sent"] = dev.onions_sent;
    c["onion_bytes_sent"] = dev.onion_bytes_sent;
    c["onion_layers_built"] = dev.layers_built;
    c["replies_received"] = dev.replies_received;
    c["reply_bytes_received"] = dev.reply_bytes_received;
    c["reply_layers_opened"] = dev.layers_opened;
    c["malformed_streams"] = dev.malformed;
    c["rounds"] = round;
    device_onion_bytes += dev.onion_bytes_sent;
    device_reply_bytes += dev.reply_bytes_received;
    metrics.push_back(std::move(rec));

    MetricsRecord up{"device", i, "upload", {}};
    up.counters["share_uploads"] = M;
    up.counters["share_bytes_sent"] = static_cast<std::uint64_t>(M) * L * 8;
    metrics.push_back(std::move(up));
  }

  std::uint64_t srv_in = 0, srv_out = 0, srv_dev_in = 0, srv_dev_out = 0;
  for (std::uint32_t s = 0; s < M; ++s) {
    MetricsRecord dist{"server", s, "distribution", {}};
    dist.counters["signatures_issued"] = static_cast<std::uint64_t>(
        std::count_if(signed_query.signatures.begin(), signed_query.signatures.end(),
                      [s](const QuerySignature& q) { return q.server == s; }));
    dist.counters["broadcast_bytes_sent"] = static_cast<std::uint64_t>(N) *
                                            (signed_query.canonical.size() + 64);
    metrics.push_back(std::move(dist));

    const ServerCounters& sc = net.counters()[s];
    srv_in += sc.bytes_in;
    srv_out += sc.bytes_out;
    srv_dev_in += sc.device_bytes_in;
    srv_dev_out += sc.device_bytes_out;
    MetricsRecord mix{"server", s, "localagg", {}};
    mix.counters = {{"bytes_in", sc.bytes_in},
                    {"bytes_out", sc.bytes_out},
                    {"device_bytes_in", sc.device_bytes_in},
                    {"device_bytes_out", sc.device_bytes_out},
                    {"layers_peeled", sc.layers_peeled},
                    {"replies_sealed", sc.replies_sealed},
                    {"noise_generated", sc.noise_generated},
                    {"noise_bytes", sc.noise_bytes},
                    {"peel_failures", sc.peel_failures},
                    {"collisions", sc.collisions},
                    {"scripted_drops", sc.scripted_drops},
                    {"scripted_duplicates", sc.scripted_duplicates},
                    {"drops_hosted", sc.drops_hosted},
                    {"rounds", round}};
    metrics.push_back(std::move(mix));

    MetricsRecord agg{"server", s, "aggregation", {}};
    agg.counters["shares_received"] = shares_received[s];
    agg.counters["share_bytes_received"] = shares_received[s] * L * 8;
    agg.counters["shares_dropped"] = shares_dropped[s];
    agg.counters["shares_duplicated"] = shares_duplicated[s];
    agg.counters["tally_bytes_sent"] = L * 8;
    metrics.push_back(std::move(agg));
  }
  diag.bytes_conserved = device_onion_bytes == srv_dev_in && device_reply_bytes == srv_dev_out &&
                         srv_in - srv_dev_in == srv_out - srv_dev_out;

  MetricsRecord summary{"run", 0, "summary", {}};
  auto& sc = summary.counters;
  sc["nodes"] = N;
  sc["edges"] = diag.edges;
  sc["edges_before_bound"] = diag.edges_before_bound;
  sc["directed_sessions"] = diag.directed_sessions;
  sc["servers"] = M;
  sc["hops"] = mc.hops;
  sc["degree_bound"] = d;
  sc["slot_size"] = mc.slot_size;
  sc["leaves"] = L;
  sc["rounds"] = round;
  sc["valid_signatures"] = diag.valid_signatures;
  sc["signature_threshold"] = diag.signature_threshold;
  sc["frames_sent"] = diag.frames_sent;
  sc["frames_delivered"] = diag.frames_delivered;
  sc["leaf_sessions"] = diag.leaf_sessions;
  sc["leaf_sessions_done"] = diag.leaf_sessions_done;
  sc["leaf_sessions_aborted"] = diag.leaf_sessions_aborted;
  sc["losses"] = diag.losses;
  sc["transport_aborts"] = diag.transport_aborts;
  sc["drop_checks"] = diag.drop_checks;
  sc["drop_mismatches"] = diag.drop_mismatches;
  sc["onion_bytes"] = diag.onion_bytes;
  sc["onion_sizes_uniform"] = diag.onion_sizes_uniform ? 1 : 0;
  sc["device_bytes_sent"] = device_onion_bytes;
  sc["device_bytes_received"] = device_reply_bytes;
  sc["server_bytes_in"] = srv_in;
  sc["server_bytes_out"] = srv_out;
  sc["bytes_conserved"] = diag.bytes_conserved ? 1 : 0;
  sc["matches_oracle"] = diag.matches_oracle ? 1 : 0;
  sc["matches_surviving_oracle"] = diag.matches_surviving_oracle ? 1 : 0;
  for (const auto& [reason, n] : diag.abort_reasons) sc["aborts_" + reason] = n;
  metrics.push_back(std::move(summary));

  result.observations = net.observations();
  return result;
}

RunResult run(const RunConfig& config) {
  validate(config);
  RunInputs inputs = load_inputs(config);
  RunResult result = simulate(config, inputs);
  if (!config.report_out.empty()) write_text_file(config.report_out, report_text(result));
  if (!config.metrics_out.empty()) {
    write_text_file(config.metrics_out, metrics_jsonl(result.metrics));
    std::string csv = config.metrics_out;
    auto dot = csv.rfind('.');
    auto slash = csv.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) csv.resize(dot);
    write_text_file(csv + ".csv", metrics_csv(result.metrics));
  }
  return result;
}

nlohmann::json plaintext_answer(const RunConfig& config, const RunInputs& inputs) {
  validate(config);
  Prepared prep = prepare(config, inputs);
  return analyst_finalize(inputs.plan, oracle(inputs.plan, prep.graph, prep.attrs, config.direction));
}

std::string report_text(const RunResult& result) { return result.report.dump(2) + "\n"; }

}  // namespace colo
