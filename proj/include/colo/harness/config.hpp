#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "colo/harness/oracle.hpp"
#include "colo/mixnet/mixnet.hpp"

namespace CLI {
class App;
}

namespace colo {

struct RunConfig {
  std::uint32_t servers = 40;
  double malicious_frac = 0.2;
  std::size_t degree_bound = 10;
  std::uint32_t hops = 14;
  double noise_mean = 500.0;
  std::size_t slot_size = 1024;
  std::uint64_t seed = 1;

  std::string query;      // query file
  std::string certified;  // allow-list; empty means queries/certified.txt beside the query
  std::string scenario;   // scenario script, optional
  std::string metrics_out;
  std::string report_out;

  // Either a SNAP edge list or a generated graph.
  std::string graph;
  std::size_t gen_n = 0;
  double gen_degree = 4.0;
  std::size_t gen_max_degree = 0;  // 0: use degree_bound
  std::size_t subsample = 0;       // 0: keep every node

  DirectionPolicy direction = DirectionPolicy::kBoth;
  std::uint64_t max_rounds = 10000;
  unsigned threads = 1;

  MixnetConfig mixnet() const { return {servers, hops, noise_mean, slot_size}; }
};

// Throws kConfig unless 0 <= f < 0.5, d >= 1, M >= 2 and the mixnet fields
// are in range.
void validate(const RunConfig& config);

// Registers the run flags on a CLI11 app, plus --config for a key=value file
// using the same names without dashes.
void add_run_options(CLI::App& app, RunConfig& config);

// Parses a flag vector (no program name) into a validated config.
RunConfig parse_run_args(const std::vector<std::string>& args);

// Resolved allow-list path for a config.
std::string certified_path(const RunConfig& config);

}  // namespace colo
