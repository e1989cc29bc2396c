#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "colo/core/bytes.hpp"
#include "colo/core/prg.hpp"
#include "colo/mixnet/dead_drop.hpp"
#include "colo/mixnet/onion.hpp"
#include "colo/mixnet/scenario.hpp"

namespace colo {

struct MixnetConfig {
  std::uint32_t servers = 40;
  std::uint32_t hops = 14;
  double noise_mean = 500.0;
  std::size_t slot_size = 1024;
};

// Throws kConfig when a field is out of range.
void validate(const MixnetConfig& config);

// One onion handed to its first hop.
struct Submission {
  std::uint32_t device = 0;
  std::uint32_t slot = 0;
  std::uint32_t first_hop = 0;
  Bytes onion;
};

// Reply that made it back along the reverse path, still sealed.
struct Delivery {
  std::uint32_t device = 0;
  std::uint32_t slot = 0;
  Bytes reply;
};

struct ServerCounters {
  // All traffic, and the part exchanged directly with devices.
  std::uint64_t bytes_in = 0;
  std::uint64_t bytes_out = 0;
  std::uint64_t device_bytes_in = 0;
  std::uint64_t device_bytes_out = 0;
  std::uint64_t layers_peeled = 0;
  std::uint64_t replies_sealed = 0;
  std::uint64_t noise_generated = 0;
  std::uint64_t noise_bytes = 0;
  std::uint64_t peel_failures = 0;
  std::uint64_t collisions = 0;
  std::uint64_t scripted_drops = 0;
  std::uint64_t scripted_duplicates = 0;
  std::uint64_t drops_hosted = 0;
};

// What a logging server sees on its first-hop input: who sent which onion.
struct Observation {
  std::uint64_t round = 0;
  std::uint32_t server = 0;
  std::uint32_t device = 0;
  std::uint64_t bytes = 0;
};

struct RoundStats {
  std::uint64_t submissions = 0;
  std::uint64_t deliveries = 0;
  std::uint64_t noise = 0;
  std::uint64_t swaps = 0;
  std::uint64_t echoes = 0;
  std::uint64_t collisions = 0;
  std::uint64_t peel_failures = 0;
  // Onion length on each forward leg; hop_legs counts forward and reverse legs.
  std::vector<std::size_t> leg_sizes;
  bool sizes_uniform = true;
  std::uint64_t hop_legs = 0;
};

// Synchronous Karaoke-style mixnet: in each round every onion crosses its m
// route servers, meets its partner at the dead drop, and the reply retraces
// the path, each server adding one sealing layer.
class Mixnet {
 public:
  Mixnet(MixnetConfig config, const Seed& seed, Scenario scenario = {});

  const MixnetConfig& config() const { return config_; }
  std::vector<RouteHop> directory() const;
  RouteHop hop(std::uint32_t server) const { return {server, keys_[server].pk}; }

  // Uniform route of config.hops servers plus the hop of the drop host.
  std::vector<RouteHop> random_route(Prg& prg) const;

  std::vector<Delivery> run_round(std::uint64_t round, std::vector<Submission> submissions);

  const RoundStats& last_round() const { return last_; }
  const std::vector<ServerCounters>& counters() const { return counters_; }
  const std::vector<Observation>& observations() const { return observations_; }
  std::uint64_t rounds_run() const { return rounds_; }

 private:
  MixnetConfig config_;
  Seed seed_;
  Scenario scenario_;
  std::vector<X25519KeyPair> keys_;
  std::vector<ServerCounters> counters_;
  std::vector<Observation> observations_;
  RoundStats last_;
  std::uint64_t rounds_ = 0;
};

}  // namespace colo
