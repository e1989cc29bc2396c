#pragma once

#include <optional>
#include <string_view>

#include "colo/query/expr.hpp"

namespace colo {

enum class AggOp { kSum, kCount, kAvg };

const char* agg_op_name(AggOp op);

// Syntax tree of "SELECT AGG(expr) FROM neigh(1) [WHERE pred] [GROUP BY attr]".
struct QueryAst {
  AggOp agg = AggOp::kSum;
  ExprPtr value;  // null for COUNT(*)
  ExprPtr where;  // null when absent
  std::optional<AttrRef> group_by;
  int group_line = 0;
  int group_column = 0;
};

QueryAst parse_sql(std::string_view sql, int first_line = 1);

// Lowercase keywords, single spaces, sorted conjuncts.
std::string canonical_sql(const QueryAst& ast);

}  // namespace colo
