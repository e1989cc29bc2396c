#include "colo/harness/oracle.hpp"

#include <algorithm>

namespace colo {

const char* direction_name(DirectionPolicy p) {
  return p == DirectionPolicy::kBoth ? "both" : "single";
}

std::optional<DirectionPolicy> parse_direction(std::string_view s) {
  if (s == "both") return DirectionPolicy::kBoth;
  if (s == "single") return DirectionPolicy::kSingle;
  return std::nullopt;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> directed_sessions(const Graph& g,
                                                                      DirectionPolicy policy) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  out.reserve(g.edges.size() * 2);
  for (auto [u, v] : g.edges) {
    out.emplace_back(u, v);
    if (policy == DirectionPolicy::kBoth) out.emplace_back(v, u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

RingElement pair_value(const QueryPlan& leaf, const Attributes& attrs, std::uint32_t evaluator,
                       std::uint32_t builder) {
  auto a = leaf.evaluator_inputs(attrs.node[evaluator]);
  auto b = leaf.builder_inputs(attrs.node[builder], attrs.edge_of(evaluator, builder));
  return leaf.evaluate(a, b);
}

std::vector<RingElement> oracle(const QueryPlan& root, const Graph& g, const Attributes& attrs,
                                DirectionPolicy policy) {
  auto leaves = root.leaves();
  std::vector<RingElement> out(leaves.size());
  for (auto [a, b] : directed_sessions(g, policy)) {
    for (std::size_t i = 0; i < leaves.size(); ++i) out[i] += pair_value(*leaves[i], attrs, a, b);
  }
  return out;
}

}  // namespace colo
