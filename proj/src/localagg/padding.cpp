#include "colo/localagg/padding.hpp"

#include <algorithm>

#include "colo/core/error.hpp"

namespace colo {

EdgeList bound_degree(std::size_t node_count, const EdgeList& edges, std::size_t d, Prg& prg) {
  EdgeList order = edges;
  shuffle(order, prg);
  std::vector<std::size_t> degree(node_count, 0);
  EdgeList kept;
  for (auto [u, v] : order) {
    require(u < node_count && v < node_count, ErrorCode::kInvalidArgument, "edge endpoint out of range");
    if (u == v || degree[u] >= d || degree[v] >= d) continue;
    ++degree[u];
    ++degree[v];
    kept.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::vector<std::optional<std::uint32_t>> pad_to_degree(std::span<const std::uint32_t> neighbors,
                                                        std::size_t d) {
  require(neighbors.size() <= d, ErrorCode::kPrecondition, "degree exceeds the degree bound");
  std::vector<std::optional<std::uint32_t>> slots(neighbors.begin(), neighbors.end());
  slots.resize(d);
  return slots;
}

}  // namespace colo
