#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "colo/core/ring.hpp"
#include "colo/harness/config.hpp"
#include "colo/harness/graph.hpp"
#include "colo/harness/metrics.hpp"
#include "colo/mixnet/mixnet.hpp"
#include "colo/mixnet/scenario.hpp"
#include "colo/query/plan.hpp"

namespace colo {

struct RunInputs {
  QueryPlan plan;
  Graph graph;  // before degree bounding
  Scenario scenario;
  std::vector<std::string> certified;
};

struct RunDiagnostics {
  std::size_t nodes = 0;
  std::size_t edges_before_bound = 0;
  std::size_t edges = 0;
  std::size_t directed_sessions = 0;
  std::uint64_t rounds = 0;

  std::size_t valid_signatures = 0;
  std::size_t signature_threshold = 0;

  // Local-aggregation frames over every slot, padding included.
  std::uint64_t frames_sent = 0;
  std::uint64_t frames_delivered = 0;
  std::uint64_t leaf_sessions = 0;  // per endpoint and leaf
  std::uint64_t leaf_sessions_done = 0;
  std::uint64_t leaf_sessions_aborted = 0;
  std::map<std::string, std::uint64_t> abort_reasons;
  std::uint64_t losses = 0;
  std::uint64_t transport_aborts = 0;

  // Per round and edge, both endpoints derive the dead drop independently.
  std::uint64_t drop_checks = 0;
  std::uint64_t drop_mismatches = 0;
  bool onion_sizes_uniform = true;
  std::uint64_t onion_bytes = 0;

  bool bytes_conserved = true;
  bool matches_oracle = false;
  bool matches_surviving_oracle = false;
};

struct RunResult {
  nlohmann::json report;
  std::vector<MetricsRecord> metrics;
  std::vector<RingElement> reconstructed;
  std::vector<RingElement> oracle;
  // Oracle over the directed sessions that completed on both endpoints.
  std::vector<RingElement> surviving_oracle;
  // What each device shares out, per leaf.
  std::vector<std::vector<RingElement>> device_results;
  RunDiagnostics diag;
  Graph graph;  // after degree bounding
  std::vector<Observation> observations;
};

// Parses the query, allow-list and scenario, and loads or generates the graph.
// Errors carry a phase prefix ("query: ", "graph: ", ...).
RunInputs load_inputs(const RunConfig& config);

// Distribution, local aggregation over the mixnet, and global aggregation.
// Throws kProtocolAbort when devices reject the query.
RunResult simulate(const RunConfig& config, const RunInputs& inputs);

// load_inputs + simulate, then writes report_out and metrics_out when set.
RunResult run(const RunConfig& config);

// The report an honest run would produce, computed in the clear over the
// same degree-bounded graph and attributes.
nlohmann::json plaintext_answer(const RunConfig& config, const RunInputs& inputs);

std::string report_text(const RunResult& result);

}  // namespace colo
