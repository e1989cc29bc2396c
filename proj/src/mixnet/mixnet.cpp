#include "colo/mixnet/mixnet.hpp"

#include <map>
#include <string>

#include "colo/core/error.hpp"

namespace colo {
namespace {

constexpr std::int64_t kFromDevice = -1;

struct Origin {
  std::int64_t server = kFromDevice;
  std::uint32_t index = 0;
};

struct Packet {
  Bytes onion;
  Origin origin;
};

// Reverse-path state a server keeps for every onion it forwarded.
struct Entry {
  Origin origin;
  LayerKey key{};
  bool noise = false;
};

using Replies = std::vector<std::vector<std::optional<Bytes>>>;

}  // namespace

void validate(const MixnetConfig& c) {
  require(c.servers >= 2, ErrorCode::kConfig, "mixnet needs at least 2 servers");
  require(c.hops >= 1, ErrorCode::kConfig, "route length must be at least 1");
  require(c.noise_mean >= 0.0, ErrorCode::kConfig, "noise mean must be non-negative");
  require(c.slot_size >= 64, ErrorCode::kConfig, "slot size must be at least 64 bytes");
}

Mixnet::Mixnet(MixnetConfig config, const Seed& seed, Scenario scenario)
    : config_(config), seed_(seed), scenario_(std::move(scenario)) {
  validate(config_);
  keys_.reserve(config_.servers);
  for (std::uint32_t s = 0; s < config_.servers; ++s) {
    Prg prg(derive_seed(seed_, "server-key/" + std::to_string(s)));
    keys_.push_back(x25519_keypair(prg));
  }
  counters_.resize(config_.servers);
}

std::vector<RouteHop> Mixnet::directory() const {
  std::vector<RouteHop> out;
  for (std::uint32_t s = 0; s < config_.servers; ++s) out.push_back(hop(s));
  return out;
}

std::vector<RouteHop> Mixnet::random_route(Prg& prg) const {
  std::vector<RouteHop> route;
  route.reserve(config_.hops);
  for (std::uint32_t i = 0; i < config_.hops; ++i) {
    route.push_back(hop(static_cast<std::uint32_t>(prg.uniform(config_.servers))));
  }
  return route;
}

std::vector<Delivery> Mixnet::run_round(std::uint64_t round, std::vector<Submission> submissions) {
  const std::uint32_t M = config_.servers;
  const std::uint32_t m = config_.hops;
  last_ = RoundStats{};
  last_.submissions = submissions.size();
  last_.hop_legs = 2 * static_cast<std::uint64_t>(m) + 2;

  std::vector<Prg> rng;
  rng.reserve(M);
  for (std::uint32_t s = 0; s < M; ++s) {
    rng.emplace_back(derive_seed(seed_, "server/" + std::to_string(s) + "/round/" +
                                            std::to_string(round)));
  }

  std::vector<std::vector<Packet>> inbound(M);
  for (std::size_t i = 0; i < submissions.size(); ++i) {
    Submission& sub = submissions[i];
    require(sub.first_hop < M, ErrorCode::kInvalidArgument, "first hop out of range");
    ServerCounters& c = counters_[sub.first_hop];
    c.bytes_in += sub.onion.size();
    c.device_bytes_in += sub.onion.size();
    if (scenario_.logs_observations(sub.first_hop, round)) {
      observations_.push_back({round, sub.first_hop, sub.device, sub.onion.size()});
    }
    inbound[sub.first_hop].push_back({std::move(sub.onion), {kFromDevice, static_cast<std::uint32_t>(i)}});
  }

  auto record_leg = [&](const std::vector<std::vector<Packet>>& batch) {
    std::optional<std::size_t> size;
    for (const auto& per_server : batch) {
      for (const Packet& p : per_server) {
        if (!size) size = p.onion.size();
        if (p.onion.size() != *size) last_.sizes_uniform = false;
      }
    }
    last_.leg_sizes.push_back(size.value_or(0));
  };

  std::vector<std::vector<std::vector<Entry>>> table(m + 1, std::vector<std::vector<Entry>>(M));

  for (std::uint32_t leg = 0; leg < m; ++leg) {
    record_leg(inbound);
    std::vector<std::vector<Packet>> next(M);
    for (std::uint32_t s = 0; s < M; ++s) {
      ServerCounters& c = counters_[s];
      const double drop_frac = scenario_.server_param("drop-fraction", s, round);
      const double dup_frac = scenario_.server_param("duplicate-fraction", s, round);
      std::vector<std::pair<std::uint32_t, Packet>> out;
      for (Packet& p : inbound[s]) {
        if (leg > 0) c.bytes_in += p.onion.size();
        auto layer = peel_layer(p.onion, keys_[s]);
        ++c.layers_peeled;
        if (!layer || layer->kind != PeeledLayer::Kind::kForward || layer->next >= M) {
          ++c.peel_failures;
          ++last_.peel_failures;
          continue;
        }
        if (drop_frac > 0.0 && rng[s].uniform01() < drop_frac) {
          ++c.scripted_drops;
          continue;
        }
        auto idx = static_cast<std::uint32_t>(table[leg][s].size());
        table[leg][s].push_back({p.origin, layer->reply_key, false});
        Packet fwd{std::move(layer->inner), {static_cast<std::int64_t>(s), idx}};
        if (dup_frac > 0.0 && rng[s].uniform01() < dup_frac) {
          ++c.scripted_duplicates;
          out.emplace_back(layer->next, fwd);
        }
        out.emplace_back(layer->next, std::move(fwd));
      }
      if (leg == 0 && config_.noise_mean > 0.0) {
        std::uint64_t n = sample_poisson(config_.noise_mean, rng[s]);
        for (std::uint64_t k = 0; k < n; ++k) {
          std::vector<RouteHop> route;
          for (std::uint32_t i = 0; i + 1 < m; ++i) {
            route.push_back(hop(static_cast<std::uint32_t>(rng[s].uniform(M))));
          }
          DeadDrop drop;
          rng[s].fill(drop.id);
          drop.server = static_cast<std::uint32_t>(rng[s].uniform(M));
          BuiltOnion onion = build_onion({}, route, hop(drop.server), drop, config_.slot_size, rng[s]);
          auto idx = static_cast<std::uint32_t>(table[leg][s].size());
          table[leg][s].push_back({{static_cast<std::int64_t>(s), 0}, {}, true});
          std::uint32_t first = route.empty() ? drop.server : route[0].server;
          ++c.noise_generated;
          c.noise_bytes += onion.data.size();
          ++last_.noise;
          out.emplace_back(first, Packet{std::move(onion.data), {static_cast<std::int64_t>(s), idx}});
        }
      }
      shuffle(out, rng[s]);
      for (auto& [to, packet] : out) {
        c.bytes_out += packet.onion.size();
        next[to].push_back(std::move(packet));
      }
    }
    inbound = std::move(next);
  }

  // Dead-drop exchange at the drop hosts.
  record_leg(inbound);
  Replies replies(M);
  for (std::uint32_t s = 0; s < M; ++s) {
    ServerCounters& c = counters_[s];
    std::vector<Bytes> payloads;
    std::map<std::array<std::uint8_t, 16>, std::vector<std::uint32_t>> drops;
    for (Packet& p : inbound[s]) {
      c.bytes_in += p.onion.size();
      auto layer = peel_layer(p.onion, keys_[s]);
      ++c.layers_peeled;
      if (!layer || layer->kind != PeeledLayer::Kind::kDrop) {
        ++c.peel_failures;
        ++last_.peel_failures;
        continue;
      }
      auto idx = static_cast<std::uint32_t>(table[m][s].size());
      table[m][s].push_back({p.origin, layer->reply_key, false});
      payloads.push_back(std::move(layer->inner));
      drops[layer->drop_id].push_back(idx);
    }
    replies[s].resize(table[m][s].size());
    c.drops_hosted += drops.size();
    for (const auto& [id, members] : drops) {
      if (members.size() == 1) {
        replies[s][members[0]] = payloads[members[0]];
        ++last_.echoes;
        continue;
      }
      replies[s][members[0]] = payloads[members[1]];
      replies[s][members[1]] = payloads[members[0]];
      ++last_.swaps;
      c.collisions += members.size() - 2;
      last_.collisions += members.size() - 2;
    }
  }

  // Reverse path: each server seals the reply and hands it to whoever gave
  // it the onion.
  std::vector<std::optional<Bytes>> to_device(submissions.size());
  for (std::uint32_t leg = m + 1; leg-- > 0;) {
    Replies prev(M);
    if (leg > 0) {
      for (std::uint32_t s = 0; s < M; ++s) prev[s].resize(table[leg - 1][s].size());
    }
    for (std::uint32_t s = 0; s < M; ++s) {
      ServerCounters& c = counters_[s];
      for (std::size_t idx = 0; idx < replies[s].size(); ++idx) {
        if (!replies[s][idx]) continue;
        const Entry& e = table[leg][s][idx];
        if (e.noise) continue;
        Bytes sealed = seal_reply(*replies[s][idx], e.key);
        ++c.replies_sealed;
        c.bytes_out += sealed.size();
        if (e.origin.server == kFromDevice) {
          if (to_device[e.origin.index]) continue;
          c.device_bytes_out += sealed.size();
          to_device[e.origin.index] = std::move(sealed);
          continue;
        }
        auto& slot = prev[static_cast<std::size_t>(e.origin.server)][e.origin.index];
        if (slot) continue;
        counters_[static_cast<std::size_t>(e.origin.server)].bytes_in += sealed.size();
        slot = std::move(sealed);
      }
    }
    replies = std::move(prev);
  }

  std::vector<Delivery> out;
  for (std::size_t i = 0; i < to_device.size(); ++i) {
    if (!to_device[i]) continue;
    out.push_back({submissions[i].device, submissions[i].slot, std::move(*to_device[i])});
  }
  last_.deliveries = out.size();
  ++rounds_;
  return out;
}

}  // namespace colo
