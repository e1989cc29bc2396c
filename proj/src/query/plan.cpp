#include "colo/query/plan.hpp"

#include <algorithm>
#include <cctype>

#include "colo/core/bytes.hpp"
#include "colo/core/hash.hpp"
#include "colo/query/error.hpp"

namespace colo {
namespace {

constexpr std::string_view kSeparator = "---";

struct Located {
  AttrRef attr;
  int line = 0;
  int column = 0;
};

void collect_located(const ExprPtr& e, std::vector<Located>& out) {
  if (!e) return;
  if (e->kind == ExprKind::kAttr) {
    out.push_back({e->attr, e->line, e->column});
    return;
  }
  for (const ExprPtr& a : e->args) collect_located(a, out);
}

const AttributeDomain& domain_of(const PreprocessTable& table, const AttrRef& a, int line,
                                 int column) {
  const PreprocessEntry* entry = table.find(a.table_name());
  if (entry == nullptr) {
    throw QueryError(QueryErrorKind::kUnknownAttribute, line, column,
                     "attribute '" + a.to_string() + "' has no preprocess entry");
  }
  return entry->domain;
}

std::uint64_t product(const std::vector<AttributeDomain>& ds, std::uint64_t cap) {
  std::uint64_t p = 1;
  for (const AttributeDomain& d : ds) {
    if (p > cap / d.size()) return cap + 1;
    p *= d.size();
  }
  return p;
}

std::string query_hash(const std::string& canonical) {
  Digest d = hash_parts({as_bytes(std::string_view("colo/query/v1")), as_bytes(canonical)});
  return to_hex(d);
}

QueryAst ast_of(const QueryPlan& plan) {
  QueryAst ast;
  ast.agg = plan.requested;
  ast.value = plan.value;
  ast.where = plan.where;
  ast.group_by = plan.group_by;
  return ast;
}

// F = (WHERE != 0) * value, with value = 1 for COUNT.
ExprPtr leaf_function(const QueryPlan& plan) {
  ExprPtr value = plan.value ? plan.value : make_const(1);
  if (!plan.where) return value;
  ExprPtr indicator = make_binary(BinOp::kNe, plan.where, make_const(0));
  if (!plan.value) return indicator;
  return make_binary(BinOp::kMul, indicator, value);
}

void assign_inputs(QueryPlan& plan, const std::vector<Located>& refs, const PlanOptions& options) {
  std::vector<AttrRef> self, neighbor, edge;
  for (const Located& r : refs) {
    domain_of(plan.preprocess, r.attr, r.line, r.column);
    auto& bucket = r.attr.role == Role::kSelf ? self : r.attr.role == Role::kNeighbor ? neighbor : edge;
    if (std::find(bucket.begin(), bucket.end(), r.attr) == bucket.end()) bucket.push_back(r.attr);
  }
  auto by_name = [](const AttrRef& a, const AttrRef& b) { return a.name < b.name; };
  std::sort(self.begin(), self.end(), by_name);
  std::sort(neighbor.begin(), neighbor.end(), by_name);
  std::sort(edge.begin(), edge.end(), by_name);

  plan.evaluator_attrs = self;
  plan.builder_attrs = neighbor;
  plan.builder_attrs.insert(plan.builder_attrs.end(), edge.begin(), edge.end());
  plan.evaluator_domains.clear();
  plan.builder_domains.clear();
  for (const AttrRef& a : plan.evaluator_attrs) {
    plan.evaluator_domains.push_back(plan.preprocess.find(a.table_name())->domain);
  }
  for (const AttrRef& a : plan.builder_attrs) {
    plan.builder_domains.push_back(plan.preprocess.find(a.table_name())->domain);
  }
  plan.table_length = product(plan.evaluator_domains, options.table_cap);
  if (plan.table_length > options.table_cap) {
    throw QueryError(QueryErrorKind::kDomainTooLarge, 0, 0,
                     "evaluator input domain exceeds " + std::to_string(options.table_cap) +
                         " tuples");
  }
}

void compile_leaf(QueryPlan& plan, const PlanOptions& options) {
  const std::size_t ne = plan.evaluator_attrs.size();
  auto slot_of = [&](const AttrRef& a) -> std::size_t {
    auto ev = std::find(plan.evaluator_attrs.begin(), plan.evaluator_attrs.end(), a);
    if (ev != plan.evaluator_attrs.end()) return ev - plan.evaluator_attrs.begin();
    auto bi = std::find(plan.builder_attrs.begin(), plan.builder_attrs.end(), a);
    return ne + (bi - plan.builder_attrs.begin());
  };
  ExprPtr f = leaf_function(plan);
  plan.predicate = CompiledExpr::compile(f, slot_of);

  std::vector<AttributeDomain> all = plan.evaluator_domains;
  all.insert(all.end(), plan.builder_domains.begin(), plan.builder_domains.end());
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  if (product(all, options.exhaustive_cap) <= options.exhaustive_cap) {
    std::vector<std::int64_t> slots(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) slots[i] = all[i].lo;
    bool first = true;
    for (;;) {
      std::int64_t v = plan.predicate.eval(slots.data());
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
      bool carry = true;
      for (std::size_t i = all.size(); carry && i-- > 0;) {
        if (slots[i] < all[i].hi) {
          ++slots[i];
          carry = false;
        } else {
          slots[i] = all[i].lo;
        }
      }
      if (carry) break;
    }
  } else {
    Interval iv = interval_of(f, [&](const AttrRef& a) {
      const AttributeDomain& d = plan.preprocess.find(a.table_name())->domain;
      return Interval{d.lo, d.hi};
    });
    lo = iv.lo;
    hi = iv.hi;
  }
  if (lo < 0) {
    throw QueryError(QueryErrorKind::kNegativeOutput, 0, 0,
                     "aggregated value can be negative (minimum " + std::to_string(lo) + ")");
  }
  plan.bound = static_cast<std::uint64_t>(hi);
}

QueryPlan compile_node(const QueryAst& ast, const PreprocessTable& preprocess,
                       const PlanOptions& options, int group_line, int group_column) {
  QueryPlan plan;
  plan.preprocess = preprocess;
  plan.requested = ast.agg;
  plan.agg = ast.agg == AggOp::kAvg ? AggOp::kAvg : AggOp::kSum;
  plan.value = ast.agg == AggOp::kCount ? nullptr : ast.value;
  plan.where = ast.where;
  plan.group_by = ast.group_by;
  plan.canonical = canonical_sql(ast) + "\n" + std::string(kSeparator) + "\n" + preprocess.to_string();
  plan.query_id = query_hash(plan.canonical);

  std::vector<Located> refs;
  collect_located(plan.value, refs);
  collect_located(plan.where, refs);
  if (plan.group_by) refs.push_back({*plan.group_by, group_line, group_column});
  assign_inputs(plan, refs, options);

  if (plan.group_by) {
    plan.subqueries = rewrite_groupby(plan, options);
  } else if (plan.agg == AggOp::kAvg) {
    auto [sum, count] = rewrite_avg(plan, options);
    plan.subqueries = {std::move(sum), std::move(count)};
  } else {
    compile_leaf(plan, options);
  }
  if (!plan.is_leaf()) {
    for (const QueryPlan& s : plan.subqueries) plan.bound = std::max(plan.bound, s.bound);
  }
  return plan;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<const QueryPlan*> QueryPlan::leaves() const {
  if (is_leaf()) return {this};
  std::vector<const QueryPlan*> out;
  for (const QueryPlan& s : subqueries) {
    auto sub = s.leaves();
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::string QueryPlan::label() const {
  std::string out;
  if (group_value) out = "group=" + std::to_string(*group_value);
  const char* p = part == LeafPart::kSum ? "sum" : part == LeafPart::kCount ? "count" : nullptr;
  if (p != nullptr) out += out.empty() ? p : std::string("/") + p;
  return out.empty() ? "value" : out;
}

std::int64_t QueryPlan::evaluate_int(std::span<const std::int64_t> evaluator_in,
                                     std::span<const std::int64_t> builder_in) const {
  require(is_leaf(), ErrorCode::kPrecondition, "evaluate on a non-leaf plan");
  require(evaluator_in.size() == evaluator_attrs.size() && builder_in.size() == builder_attrs.size(),
          ErrorCode::kInvalidArgument, "input arity mismatch");
  std::int64_t local[16];
  std::vector<std::int64_t> heap;
  std::int64_t* slots = local;
  const std::size_t n = evaluator_in.size() + builder_in.size();
  if (n > std::size(local)) {
    heap.resize(n);
    slots = heap.data();
  }
  std::copy(evaluator_in.begin(), evaluator_in.end(), slots);
  std::copy(builder_in.begin(), builder_in.end(), slots + evaluator_in.size());
  return predicate.eval(slots);
}

RingElement QueryPlan::evaluate(std::span<const std::int64_t> evaluator_in,
                                std::span<const std::int64_t> builder_in) const {
  return RingElement{static_cast<std::uint64_t>(evaluate_int(evaluator_in, builder_in))};
}

std::vector<std::int64_t> QueryPlan::evaluator_inputs(
    const std::map<std::string, std::int64_t>& self) const {
  std::vector<std::int64_t> out;
  out.reserve(evaluator_attrs.size());
  for (const AttrRef& a : evaluator_attrs) {
    auto it = self.find(a.table_name());
    require(it != self.end(), ErrorCode::kPrecondition, "missing attribute " + a.table_name());
    out.push_back(it->second);
  }
  return out;
}

std::vector<std::int64_t> QueryPlan::builder_inputs(
    const std::map<std::string, std::int64_t>& neighbor,
    const std::map<std::string, std::int64_t>& edge) const {
  std::vector<std::int64_t> out;
  out.reserve(builder_attrs.size());
  for (const AttrRef& a : builder_attrs) {
    const auto& source = a.role == Role::kEdge ? edge : neighbor;
    auto it = source.find(a.table_name());
    require(it != source.end(), ErrorCode::kPrecondition, "missing attribute " + a.table_name());
    out.push_back(it->second);
  }
  return out;
}

QueryPlan compile_query(const QueryAst& ast, PreprocessTable preprocess,
                        const PlanOptions& options) {
  return compile_node(ast, preprocess, options, ast.group_line, ast.group_column);
}

QueryPlan parse_query(std::string_view text, const PlanOptions& options) {
  std::string sql;
  std::size_t pos = 0;
  int line_no = 1;
  int preprocess_line = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (trim(line) == kSeparator) {
      preprocess_line = line_no + 1;
      pos = end + 1;
      break;
    }
    // Blank comment lines so token positions keep their line numbers.
    if (!trim(line).empty() && trim(line).front() == '#') line = {};
    sql.append(line);
    sql.push_back('\n');
    pos = end + 1;
    ++line_no;
  }
  PreprocessTable table;
  if (preprocess_line > 0 && pos <= text.size()) {
    table = parse_preprocess(text.substr(pos), preprocess_line, options.domain_cap);
  }
  QueryAst ast = parse_sql(sql, 1);
  return compile_query(ast, std::move(table), options);
}

std::string print_query(const QueryPlan& plan) { return plan.canonical; }

std::vector<QueryPlan> rewrite_groupby(const QueryPlan& plan, const PlanOptions& options) {
  require(plan.group_by.has_value(), ErrorCode::kPrecondition, "plan has no GROUP BY");
  const AttributeDomain& key = domain_of(plan.preprocess, *plan.group_by, 0, 0);
  std::vector<QueryPlan> out;
  for (std::int64_t v = key.lo; v <= key.hi; ++v) {
    QueryAst sub = ast_of(plan);
    sub.group_by.reset();
    if (key.size() > 1) {
      ExprPtr cond = make_binary(BinOp::kEq, make_attr(*plan.group_by), make_const(v));
      sub.where = sub.where ? make_conjunction({sub.where, cond}) : cond;
    }
    QueryPlan p = compile_node(sub, plan.preprocess, options, 0, 0);
    p.group_value = v;
    for (QueryPlan& s : p.subqueries) s.group_value = v;
    out.push_back(std::move(p));
  }
  return out;
}

std::pair<QueryPlan, QueryPlan> rewrite_avg(const QueryPlan& plan, const PlanOptions& options) {
  require(plan.agg == AggOp::kAvg, ErrorCode::kPrecondition, "plan is not an AVG");
  QueryAst sum = ast_of(plan);
  sum.agg = AggOp::kSum;
  sum.group_by.reset();
  QueryAst count = sum;
  count.agg = AggOp::kCount;
  count.value = nullptr;
  QueryPlan s = compile_node(sum, plan.preprocess, options, 0, 0);
  QueryPlan c = compile_node(count, plan.preprocess, options, 0, 0);
  s.part = LeafPart::kSum;
  c.part = LeafPart::kCount;
  s.group_value = c.group_value = plan.group_value;
  return {std::move(s), std::move(c)};
}

std::vector<std::int64_t> input_at(const QueryPlan& plan, std::uint64_t index) {
  require(index < plan.table_length, ErrorCode::kInvalidArgument, "input index out of range");
  std::vector<std::int64_t> tuple(plan.evaluator_domains.size());
  for (std::size_t i = tuple.size(); i-- > 0;) {
    const AttributeDomain& d = plan.evaluator_domains[i];
    tuple[i] = d.lo + static_cast<std::int64_t>(index % d.size());
    index /= d.size();
  }
  return tuple;
}

std::vector<std::vector<std::int64_t>> enumerate_inputs(const QueryPlan& plan) {
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(plan.table_length);
  for (std::uint64_t k = 0; k < plan.table_length; ++k) out.push_back(input_at(plan, k));
  return out;
}

std::uint64_t index_of(const QueryPlan& plan, std::span<const std::int64_t> tuple) {
  require(tuple.size() == plan.evaluator_domains.size(), ErrorCode::kInvalidArgument,
          "tuple arity mismatch");
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    const AttributeDomain& d = plan.evaluator_domains[i];
    require(d.contains(tuple[i]), ErrorCode::kInvalidArgument,
            "value outside domain of " + d.name);
    index = index * d.size() + static_cast<std::uint64_t>(tuple[i] - d.lo);
  }
  return index;
}

bool validate_certified(const QueryPlan& plan, std::span<const std::string> certified) {
  return std::find(certified.begin(), certified.end(), plan.query_id) != certified.end();
}

std::vector<std::string> parse_certified(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;
    std::string id(line.substr(0, line.find_first_of(" \t")));
    std::transform(id.begin(), id.end(), id.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    out.push_back(std::move(id));
  }
  return out;
}

}  // namespace colo
