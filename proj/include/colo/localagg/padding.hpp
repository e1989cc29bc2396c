#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "colo/core/prg.hpp"

namespace colo {

using EdgeList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

// Keeps each edge of a seeded random permutation while both endpoints have
// fewer than d kept edges. A node of degree > d keeps a uniform d-subset when
// its neighbors are otherwise unconstrained. Output is sorted.
EdgeList bound_degree(std::size_t node_count, const EdgeList& edges, std::size_t d, Prg& prg);

// Exactly d slots: the neighbors in order, then self-sessions (nullopt).
// Throws kPrecondition when neighbors.size() > d.
std::vector<std::optional<std::uint32_t>> pad_to_degree(std::span<const std::uint32_t> neighbors,
                                                        std::size_t d);

}  // namespace colo
