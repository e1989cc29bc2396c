#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "colo/core/prg.hpp"
#include "colo/harness/graph.hpp"
#include "colo/localagg/session.hpp"
#include "colo/query/preprocess.hpp"

namespace colo {

// Raw device data and the attributes derived from it by a query's
// preprocess table. Edge maps are keyed by the sorted endpoint pair.
struct Attributes {
  std::vector<AttributeMap> node_raw;
  std::map<std::pair<std::uint32_t, std::uint32_t>, AttributeMap> edge_raw;
  std::vector<AttributeMap> node;
  std::map<std::pair<std::uint32_t, std::uint32_t>, AttributeMap> edge;

  const AttributeMap& edge_of(std::uint32_t a, std::uint32_t b) const;
};

// Samples each raw field uniformly over the range the preprocess rules read,
// keyed by (seed, entity, field) so queries sharing a field see the same data.
Attributes synthesize_attributes(const Graph& g, const PreprocessTable& pre, const Seed& seed);

}  // namespace colo
