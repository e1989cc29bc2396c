#include "colo/aggregation/report.hpp"

#include "colo/core/error.hpp"

namespace colo {
namespace {

// Value of a non-grouped plan whose leaves start at values[pos].
nlohmann::json finalize_node(const QueryPlan& plan, std::span<const RingElement> values,
                             std::size_t& pos) {
  if (plan.is_leaf()) return values[pos++].value;
  // An AVG node: sum then count.
  RingElement sum = values[pos++];
  RingElement count = values[pos++];
  auto avg = average(sum, count);
  nlohmann::json out;
  out["sum"] = sum.value;
  out["count"] = count.value;
  out["value"] = avg ? nlohmann::json(*avg) : nlohmann::json(kUndefined);
  return out;
}

}  // namespace

std::optional<double> average(RingElement sum, RingElement count) {
  if (count.value == 0) return std::nullopt;
  return static_cast<double>(sum.value) / static_cast<double>(count.value);
}

nlohmann::json analyst_finalize(const QueryPlan& root, std::span<const RingElement> leaf_values) {
  std::vector<const QueryPlan*> leaves = root.leaves();
  require(leaf_values.size() == leaves.size(), ErrorCode::kInvalidArgument,
          "expected " + std::to_string(leaves.size()) + " leaf values, got " +
              std::to_string(leaf_values.size()));
  nlohmann::json report;
  report["query_id"] = root.query_id;
  report["aggregation"] = agg_op_name(root.requested);
  report["group_by"] = root.group_by ? nlohmann::json(root.group_by->to_string()) : nlohmann::json();
  nlohmann::json subs = nlohmann::json::array();
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    subs.push_back({{"label", leaves[i]->label()}, {"value", leaf_values[i].value}});
  }
  report["subqueries"] = std::move(subs);

  std::size_t pos = 0;
  if (root.group_by && !root.subqueries.empty() && root.subqueries.front().group_value) {
    nlohmann::json rows = nlohmann::json::array();
    for (const QueryPlan& group : root.subqueries) {
      nlohmann::json v = finalize_node(group, leaf_values, pos);
      nlohmann::json row;
      row["group"] = *group.group_value;
      if (v.is_object()) {
        row.update(v);
      } else {
        row["value"] = std::move(v);
      }
      rows.push_back(std::move(row));
    }
    report["result"] = {{"rows", std::move(rows)}};
  } else {
    nlohmann::json v = finalize_node(root, leaf_values, pos);
    report["result"] = v.is_object() ? v["value"] : v;
    if (v.is_object()) {
      report["sum"] = v["sum"];
      report["count"] = v["count"];
    }
  }
  return report;
}

}  // namespace colo
