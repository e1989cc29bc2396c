#include "colo/harness/attributes.hpp"

#include <algorithm>

#include "colo/core/error.hpp"

namespace colo {
namespace {

std::int64_t sample(const Seed& seed, const std::string& entity, const std::string& field,
                    std::pair<std::int64_t, std::int64_t> range) {
  Prg prg(derive_seed(seed, entity + "/" + field));
  return prg.uniform_range(range.first, range.second);
}

}  // namespace

const AttributeMap& Attributes::edge_of(std::uint32_t a, std::uint32_t b) const {
  auto it = edge.find({std::min(a, b), std::max(a, b)});
  if (it == edge.end()) fail(ErrorCode::kPrecondition, "no attributes for edge");
  return it->second;
}

Attributes synthesize_attributes(const Graph& g, const PreprocessTable& pre, const Seed& seed) {
  Attributes out;
  const auto node_fields = pre.raw_fields(false);
  const auto edge_fields = pre.raw_fields(true);
  out.node_raw.resize(g.nodes);
  out.node.resize(g.nodes);
  for (std::uint32_t v = 0; v < g.nodes; ++v) {
    const std::string entity = "node/" + std::to_string(v);
    for (const auto& [field, range] : node_fields) {
      out.node_raw[v][field] = sample(seed, entity, field, range);
    }
    out.node[v] = pre.derive(out.node_raw[v], false);
  }
  for (auto [a, b] : g.edges) {
    const std::string entity = "edge/" + std::to_string(a) + "-" + std::to_string(b);
    AttributeMap raw;
    for (const auto& [field, range] : edge_fields) raw[field] = sample(seed, entity, field, range);
    out.edge[{a, b}] = pre.derive(raw, true);
    out.edge_raw[{a, b}] = std::move(raw);
  }
  return out;
}

}  // namespace colo
