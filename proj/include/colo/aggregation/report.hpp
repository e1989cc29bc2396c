#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "colo/core/ring.hpp"
#include "colo/query/plan.hpp"

namespace colo {

// Shown for an AVG whose COUNT is zero.
inline constexpr const char* kUndefined = "undefined";

// Recombines reconstructed leaf values (in root.leaves() order) into the
// analyst's answer:
//   {"query_id", "aggregation", "group_by", "subqueries": [{"label", "value"}],
//    "result": <number | "undefined" | {"rows": [{"group", "value", ...}]}>}
// Throws kInvalidArgument when the value count does not match the leaves.
nlohmann::json analyst_finalize(const QueryPlan& root, std::span<const RingElement> leaf_values);

// AVG of a reconstructed sum and count, or nullopt when count is zero.
std::optional<double> average(RingElement sum, RingElement count);

}  // namespace colo
