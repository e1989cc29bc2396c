#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colo/core/ring.hpp"
#include "colo/query/expr.hpp"
#include "colo/query/parser.hpp"
#include "colo/query/preprocess.hpp"

namespace colo {

struct PlanOptions {
  std::uint64_t domain_cap = 1000;
  std::uint64_t table_cap = 65536;
  std::uint64_t exhaustive_cap = 1'000'000;
};

// Which part of the requested aggregation a leaf plan computes.
enum class LeafPart { kValue, kSum, kCount };

struct QueryPlan {
  std::string query_id;   // hex BLAKE2b of canonical
  std::string canonical;  // canonical SQL, "---", canonical preprocess table
  AggOp requested = AggOp::kSum;
  AggOp agg = AggOp::kSum;  // kSum for every compiled plan, kAvg for an AVG root
  ExprPtr value;            // null for COUNT(*)
  ExprPtr where;            // null when absent
  std::optional<AttrRef> group_by;
  PreprocessTable preprocess;

  // Evaluator inputs: self attributes sorted by name. Builder inputs:
  // neighbor attributes sorted by name, then edge attributes sorted by name.
  std::vector<AttrRef> evaluator_attrs;
  std::vector<AttributeDomain> evaluator_domains;
  std::vector<AttrRef> builder_attrs;
  std::vector<AttributeDomain> builder_domains;
  std::uint64_t table_length = 1;
  std::uint64_t bound = 0;

  // Empty for a leaf. Otherwise one entry per group value (each of which may
  // split further into sum/count) or the sum/count pair of an AVG.
  std::vector<QueryPlan> subqueries;
  std::optional<std::int64_t> group_value;
  LeafPart part = LeafPart::kValue;

  bool is_leaf() const { return subqueries.empty(); }
  std::vector<const QueryPlan*> leaves() const;
  // "group=v/sum", "count", "value", ...
  std::string label() const;

  // F(a, b) = WHERE ? value : 0 (value = 1 for COUNT). Inputs ordered as
  // evaluator_attrs and builder_attrs. Precondition: is_leaf().
  RingElement evaluate(std::span<const std::int64_t> evaluator_in,
                       std::span<const std::int64_t> builder_in) const;
  std::int64_t evaluate_int(std::span<const std::int64_t> evaluator_in,
                            std::span<const std::int64_t> builder_in) const;

  // Gathers inputs from derived attribute maps ("x" for nodes, "edge.x").
  std::vector<std::int64_t> evaluator_inputs(const std::map<std::string, std::int64_t>& self) const;
  std::vector<std::int64_t> builder_inputs(const std::map<std::string, std::int64_t>& neighbor,
                                           const std::map<std::string, std::int64_t>& edge) const;

  CompiledExpr predicate;
};

// Full query file: SQL, a line "---", then preprocess lines.
QueryPlan parse_query(std::string_view text, const PlanOptions& options = {});
QueryPlan compile_query(const QueryAst& ast, PreprocessTable preprocess,
                        const PlanOptions& options = {});
// Query file text that parses back to an equal plan.
std::string print_query(const QueryPlan& plan);

// One sub-plan per value of the group key, with "key = v" conjoined into WHERE.
std::vector<QueryPlan> rewrite_groupby(const QueryPlan& plan, const PlanOptions& options = {});
// SUM(value) and COUNT(*) plans sharing WHERE.
std::pair<QueryPlan, QueryPlan> rewrite_avg(const QueryPlan& plan, const PlanOptions& options = {});

// Mixed radix over evaluator_domains, first attribute most significant.
std::vector<std::vector<std::int64_t>> enumerate_inputs(const QueryPlan& plan);
std::vector<std::int64_t> input_at(const QueryPlan& plan, std::uint64_t index);
std::uint64_t index_of(const QueryPlan& plan, std::span<const std::int64_t> tuple);

bool validate_certified(const QueryPlan& plan, std::span<const std::string> certified);
// One hex query id per line; '#' comments and blank lines ignored.
std::vector<std::string> parse_certified(std::string_view text);

}  // namespace colo
