#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "colo/core/ring.hpp"
#include "colo/harness/attributes.hpp"
#include "colo/harness/graph.hpp"
#include "colo/query/plan.hpp"

namespace colo {

// kBoth runs every edge once per orientation; kSingle lets the lower node id
// evaluate and the higher one build.
enum class DirectionPolicy { kBoth, kSingle };

const char* direction_name(DirectionPolicy p);
std::optional<DirectionPolicy> parse_direction(std::string_view s);

// (evaluator, builder) pairs, sorted.
std::vector<std::pair<std::uint32_t, std::uint32_t>> directed_sessions(const Graph& g,
                                                                      DirectionPolicy policy);

// F(evaluator inputs, builder inputs) of one leaf for one directed pair.
RingElement pair_value(const QueryPlan& leaf, const Attributes& attrs, std::uint32_t evaluator,
                       std::uint32_t builder);

// Plaintext answer of every leaf (root.leaves() order): the sum of F over
// the directed sessions of g, mod 2^64.
std::vector<RingElement> oracle(const QueryPlan& root, const Graph& g, const Attributes& attrs,
                                DirectionPolicy policy);

}  // namespace colo
