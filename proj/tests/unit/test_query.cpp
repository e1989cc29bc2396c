#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "colo/query/error.hpp"
#include "colo/query/plan.hpp"

namespace colo {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string corpus(int i) {
  return read_file(std::string(COLO_SOURCE_DIR) + "/queries/q" + std::to_string(i) + ".colo");
}

QueryErrorKind error_kind(std::string_view text, int* line = nullptr, int* column = nullptr) {
  try {
    parse_query(text);
  } catch (const QueryError& e) {
    if (line) *line = e.line();
    if (column) *column = e.column();
    return e.kind();
  }
  ADD_FAILURE() << "query parsed: " << text;
  return QueryErrorKind::kSyntax;
}

TEST(QueryParse, Q1PlanShape) {
  QueryPlan p = parse_query(
      "SELECT COUNT(*) FROM neigh(1) WHERE self.inf & neighbor.inf\n---\ninf: 0..1 = flag(x)\n");
  EXPECT_EQ(p.table_length, 2u);
  EXPECT_EQ(p.bound, 1u);
  EXPECT_EQ(p.agg, AggOp::kSum);
  EXPECT_EQ(p.requested, AggOp::kCount);
  EXPECT_TRUE(p.is_leaf());
  EXPECT_EQ(p.evaluate(std::vector<std::int64_t>{1}, std::vector<std::int64_t>{1}), RingElement{1});
  EXPECT_EQ(p.evaluate(std::vector<std::int64_t>{1}, std::vector<std::int64_t>{0}), RingElement{0});
}

TEST(QueryParse, CorpusTableLengths) {
  const std::uint64_t expected[] = {2, 2, 60, 2, 120, 60, 2, 240};
  for (int i = 1; i <= 8; ++i) {
    QueryPlan p = parse_query(corpus(i));
    EXPECT_EQ(p.table_length, expected[i - 1]) << "q" << i;
    for (const QueryPlan* leaf : p.leaves()) {
      EXPECT_GE(leaf->table_length, 1u);
      EXPECT_LE(leaf->table_length, p.table_length);
    }
  }
}

TEST(QueryParse, CorpusLeafStructure) {
  const std::size_t leaves[] = {1, 1, 2, 2, 2, 3, 4, 2};
  for (int i = 1; i <= 8; ++i) {
    EXPECT_EQ(parse_query(corpus(i)).leaves().size(), leaves[i - 1]) << "q" << i;
  }
  QueryPlan q7 = parse_query(corpus(7));
  std::vector<std::string> labels;
  for (const QueryPlan* l : q7.leaves()) labels.push_back(l->label());
  EXPECT_EQ(labels, (std::vector<std::string>{"group=0/sum", "group=0/count", "group=1/sum",
                                              "group=1/count"}));
}

TEST(QueryParse, RoundTripCorpus) {
  for (int i = 1; i <= 8; ++i) {
    QueryPlan p = parse_query(corpus(i));
    QueryPlan q = parse_query(print_query(p));
    EXPECT_EQ(p.canonical, q.canonical);
    EXPECT_EQ(p.query_id, q.query_id);
    EXPECT_EQ(p.table_length, q.table_length);
    EXPECT_EQ(p.bound, q.bound);
    EXPECT_EQ(p.preprocess, q.preprocess);
    ASSERT_EQ(p.leaves().size(), q.leaves().size());
    for (std::size_t k = 0; k < p.leaves().size(); ++k) {
      EXPECT_EQ(p.leaves()[k]->query_id, q.leaves()[k]->query_id);
    }
  }
}

TEST(QueryParse, CanonicalFormQ1) {
  QueryPlan p = parse_query(corpus(1));
  EXPECT_EQ(p.canonical,
            "select count(*) from neigh(1) where neighbor.inf & self.inf\n---\n"
            "inf: 0..1 = flag(infected)\n");
  QueryPlan avg = parse_query(corpus(3));
  EXPECT_EQ(avg.canonical.substr(0, avg.canonical.find('\n')),
            "select avg(edge.contacts) from neigh(1) where neighbor.inf & "
            "neighbor.tInf > self.tInf + 2 & self.inf");
}

TEST(QueryParse, WhitespaceAndCaseVariantsShareId) {
  QueryPlan a = parse_query(corpus(1));
  QueryPlan b = parse_query(
      "select   count( * )\nfrom neigh( 1 )  where neighbor.inf AND self.inf\n---\n"
      "inf:0..1=flag( infected )\n");
  EXPECT_EQ(a.query_id, b.query_id);
}

TEST(QueryParse, ChainedComparisonIsConjunction) {
  const char* pre = "\n---\nage: 0..99 = field(age)\n";
  QueryPlan a = parse_query(std::string("SELECT COUNT(*) FROM neigh(1) WHERE 20 <= self.age < 30") + pre);
  QueryPlan b = parse_query(
      std::string("SELECT COUNT(*) FROM neigh(1) WHERE self.age < 30 & 20 <= self.age") + pre);
  EXPECT_EQ(a.query_id, b.query_id);
  for (std::int64_t age = 0; age < 100; ++age) {
    EXPECT_EQ(a.evaluate_int(std::vector<std::int64_t>{age}, {}), age >= 20 && age < 30 ? 1 : 0);
  }
}

TEST(QueryErrors, UnsupportedAggregation) {
  int line = 0, col = 0;
  EXPECT_EQ(error_kind("SELECT MAX(self.x) FROM neigh(1)\n---\nx: 0..3 = field(x)\n", &line, &col),
            QueryErrorKind::kUnsupportedAggregation);
  EXPECT_EQ(line, 1);
  EXPECT_EQ(col, 8);
  EXPECT_EQ(error_kind("SELECT COUNT(self.x) FROM neigh(1)\n---\nx: 0..3 = field(x)\n"),
            QueryErrorKind::kUnsupportedAggregation);
}

TEST(QueryErrors, IdentifierPredicate) {
  int line = 0, col = 0;
  EXPECT_EQ(error_kind("SELECT COUNT(*) FROM neigh(1)\nWHERE self.ID = 17\n---\n", &line, &col),
            QueryErrorKind::kIdentifierPredicate);
  EXPECT_EQ(line, 2);
  EXPECT_EQ(col, 7);
  EXPECT_EQ(error_kind("SELECT COUNT(*) FROM neigh(1)\n---\nid: 0..9 = field(id)\n"),
            QueryErrorKind::kIdentifierPredicate);
}

TEST(QueryErrors, UnknownAndUnboundedAttributes) {
  int line = 0, col = 0;
  EXPECT_EQ(error_kind("SELECT COUNT(*) FROM neigh(1)\nWHERE self.inf & neighbor.zz\n---\n"
                       "inf: 0..1 = flag(i)\n",
                       &line, &col),
            QueryErrorKind::kUnknownAttribute);
  EXPECT_EQ(line, 2);
  EXPECT_EQ(col, 18);
  EXPECT_EQ(error_kind("SELECT COUNT(*) FROM neigh(1) WHERE self.x\n---\n\nx = clamp(x)\n", &line,
                       &col),
            QueryErrorKind::kUnboundedAttribute);
  EXPECT_EQ(line, 4);
  EXPECT_EQ(col, 1);
}

TEST(QueryErrors, SyntaxPositions) {
  int line = 0, col = 0;
  EXPECT_EQ(error_kind("SELECT COUNT(*) FROM neigh(1)\nWHERE self.x &\n---\nx: 0..1 = flag(x)\n",
                       &line, &col),
            QueryErrorKind::kSyntax);
  EXPECT_EQ(line, 3);
  EXPECT_EQ(error_kind("SELECT COUNT(*) FROM neigh(2)\n---\n"), QueryErrorKind::kSyntax);
  EXPECT_EQ(error_kind("SELECT COUNT(*) FROM neigh(1) WHERE self.x $ 1\n---\nx: 0..1 = flag(x)\n",
                       &line, &col),
            QueryErrorKind::kSyntax);
  EXPECT_EQ(col, 44);
}

TEST(QueryErrors, DomainCapsAndRules) {
  EXPECT_EQ(error_kind("SELECT COUNT(*) FROM neigh(1) WHERE self.x\n---\nx: 0..1000 = field(x)\n"),
            QueryErrorKind::kDomainTooLarge);
  EXPECT_EQ(error_kind("SELECT COUNT(*) FROM neigh(1) WHERE self.x\n---\nx: 0..2 = flag(x)\n"),
            QueryErrorKind::kInvalidRule);
  EXPECT_EQ(error_kind("SELECT COUNT(*) FROM neigh(1) WHERE self.x\n---\nx: 0..2 = bucket(x; 5, 5)\n"),
            QueryErrorKind::kInvalidRule);
  EXPECT_EQ(error_kind("SELECT COUNT(*) FROM neigh(1) WHERE self.a & self.b & self.c\n---\n"
                       "a: 0..999 = field(a)\nb: 0..999 = field(b)\nc: 0..999 = field(c)\n"),
            QueryErrorKind::kDomainTooLarge);
  EXPECT_EQ(error_kind("SELECT SUM(self.x - 2) FROM neigh(1)\n---\nx: 0..3 = field(x)\n"),
            QueryErrorKind::kNegativeOutput);
}

TEST(QueryErrors, NestingDepthLimited) {
  std::string deep = "SELECT COUNT(*) FROM neigh(1) WHERE " + std::string(40, '(') + "self.x" +
                     std::string(40, ')') + "\n---\nx: 0..1 = flag(x)\n";
  EXPECT_EQ(error_kind(deep), QueryErrorKind::kSyntax);
  std::string ok = "SELECT COUNT(*) FROM neigh(1) WHERE " + std::string(20, '(') + "self.x" +
                   std::string(20, ')') + "\n---\nx: 0..1 = flag(x)\n";
  EXPECT_NO_THROW(parse_query(ok));
}

TEST(QueryBound, ExhaustiveBoundCoversOutputs) {
  for (int i = 1; i <= 8; ++i) {
    QueryPlan p = parse_query(corpus(i));
    for (const QueryPlan* leaf : p.leaves()) {
      std::vector<AttributeDomain> all = leaf->evaluator_domains;
      all.insert(all.end(), leaf->builder_domains.begin(), leaf->builder_domains.end());
      std::vector<std::int64_t> slots(all.size());
      for (std::size_t k = 0; k < all.size(); ++k) slots[k] = all[k].lo;
      const std::size_t ne = leaf->evaluator_domains.size();
      std::int64_t max_seen = 0;
      for (bool more = true; more;) {
        std::int64_t v = leaf->evaluate_int(std::span(slots).first(ne), std::span(slots).subspan(ne));
        ASSERT_GE(v, 0);
        ASSERT_LE(static_cast<std::uint64_t>(v), leaf->bound);
        max_seen = std::max(max_seen, v);
        more = false;
        for (std::size_t k = all.size(); k-- > 0;) {
          if (slots[k] < all[k].hi) {
            ++slots[k];
            more = true;
            break;
          }
          slots[k] = all[k].lo;
        }
      }
      EXPECT_EQ(static_cast<std::uint64_t>(max_seen), leaf->bound) << "q" << i;
    }
  }
  EXPECT_EQ(parse_query(corpus(2)).bound, 15u);
  EXPECT_EQ(parse_query(corpus(3)).leaves()[0]->bound, 79u);
}

TEST(QueryBound, IntervalFallbackIsSound) {
  PlanOptions small;
  small.exhaustive_cap = 10;
  QueryPlan p = parse_query(corpus(3), small);
  QueryPlan q = parse_query(corpus(3));
  for (std::size_t k = 0; k < p.leaves().size(); ++k) {
    EXPECT_GE(p.leaves()[k]->bound, q.leaves()[k]->bound);
  }
}

TEST(QueryEnumerate, MixedRadixOrder) {
  QueryPlan one = parse_query(corpus(1));
  EXPECT_EQ(enumerate_inputs(one), (std::vector<std::vector<std::int64_t>>{{0}, {1}}));

  QueryPlan p = parse_query(corpus(3));
  auto s = enumerate_inputs(p);
  ASSERT_EQ(s.size(), 60u);
  EXPECT_EQ(s[0], (std::vector<std::int64_t>{0, 1}));
  EXPECT_EQ(s[59], (std::vector<std::int64_t>{1, 30}));
  for (std::uint64_t k = 0; k < s.size(); ++k) EXPECT_EQ(index_of(p, s[k]), k);

  QueryPlan q8 = parse_query(corpus(8));
  auto s8 = enumerate_inputs(q8);
  std::set<std::vector<std::int64_t>> distinct(s8.begin(), s8.end());
  EXPECT_EQ(distinct.size(), 240u);
  for (std::uint64_t k = 0; k < s8.size(); ++k) EXPECT_EQ(index_of(q8, s8[k]), k);
  EXPECT_THROW(index_of(q8, std::vector<std::int64_t>{120, 0}), Error);
}

TEST(QueryRewrite, GroupByPartitionsWhere) {
  for (int i : {5, 6, 7}) {
    QueryPlan p = parse_query(corpus(i));
    const AttributeDomain& key = p.preprocess.find(p.group_by->table_name())->domain;
    ASSERT_EQ(p.subqueries.size(), key.size());
    // Evaluate every group's COUNT leaf against the ungrouped COUNT on the full joint domain.
    QueryAst base;
    base.agg = AggOp::kCount;
    base.where = p.where;
    QueryPlan whole = compile_query(base, p.preprocess);
    std::vector<AttrRef> attrs = p.evaluator_attrs;
    attrs.insert(attrs.end(), p.builder_attrs.begin(), p.builder_attrs.end());
    std::vector<AttributeDomain> doms = p.evaluator_domains;
    doms.insert(doms.end(), p.builder_domains.begin(), p.builder_domains.end());
    std::vector<std::int64_t> vals(doms.size());
    for (std::size_t k = 0; k < doms.size(); ++k) vals[k] = doms[k].lo;
    auto gather = [&](const std::vector<AttrRef>& want) {
      std::vector<std::int64_t> out;
      for (const AttrRef& a : want) {
        out.push_back(vals[std::find(attrs.begin(), attrs.end(), a) - attrs.begin()]);
      }
      return out;
    };
    for (bool more = true; more;) {
      std::int64_t expected = whole.evaluate_int(gather(whole.evaluator_attrs), gather(whole.builder_attrs));
      std::int64_t hits = 0;
      for (const QueryPlan& g : p.subqueries) {
        const QueryPlan& count = g.is_leaf() ? g : g.subqueries.back();
        hits += count.evaluate_int(gather(count.evaluator_attrs), gather(count.builder_attrs));
      }
      ASSERT_EQ(hits, expected);
      more = false;
      for (std::size_t k = doms.size(); k-- > 0;) {
        if (vals[k] < doms[k].hi) {
          ++vals[k];
          more = true;
          break;
        }
        vals[k] = doms[k].lo;
      }
    }
  }
}

TEST(QueryRewrite, SingleValueGroupIsIdentity) {
  QueryPlan grouped = parse_query(
      "SELECT COUNT(*) FROM neigh(1) WHERE self.inf GROUP BY self.k\n---\n"
      "inf: 0..1 = flag(i)\nk: 3..3 = field(k)\n");
  QueryPlan plain = parse_query(
      "SELECT COUNT(*) FROM neigh(1) WHERE self.inf\n---\ninf: 0..1 = flag(i)\nk: 3..3 = field(k)\n");
  ASSERT_EQ(grouped.subqueries.size(), 1u);
  EXPECT_EQ(grouped.subqueries[0].query_id, plain.query_id);
  EXPECT_EQ(grouped.subqueries[0].group_value, 3);
}

TEST(QueryRewrite, GroupPredicateConjoined) {
  QueryPlan p = parse_query(corpus(5));
  ASSERT_EQ(p.subqueries.size(), 2u);
  EXPECT_NE(p.subqueries[1].canonical.find("self.ageGroup = 1"), std::string::npos);
  EXPECT_EQ(p.subqueries[0].table_length, 120u);
}

TEST(QueryRewrite, AvgSplitsIntoSumAndCount) {
  QueryPlan p = parse_query(corpus(3));
  auto [sum, count] = rewrite_avg(p);
  EXPECT_EQ(sum.part, LeafPart::kSum);
  EXPECT_EQ(count.part, LeafPart::kCount);
  EXPECT_EQ(print_expr(sum.where), print_expr(count.where));
  EXPECT_EQ(count.bound, 1u);
  EXPECT_EQ(sum.query_id, p.subqueries[0].query_id);
  EXPECT_EQ(count.query_id, p.subqueries[1].query_id);
}

TEST(QueryCertify, ShippedListAcceptsCorpus) {
  auto certified = parse_certified(read_file(std::string(COLO_SOURCE_DIR) + "/queries/certified.txt"));
  for (int i = 1; i <= 8; ++i) {
    EXPECT_TRUE(validate_certified(parse_query(corpus(i)), certified)) << "q" << i;
  }
  QueryPlan variant = parse_query(
      "SELECT count(*)  FROM neigh(1)\n   WHERE neighbor.inf & self.inf\n---\n"
      "# same table\ninf: 0..1 = flag(infected)\n");
  EXPECT_TRUE(validate_certified(variant, certified));
  QueryPlan other = parse_query(
      "SELECT COUNT(*) FROM neigh(1) WHERE self.inf\n---\ninf: 0..1 = flag(infected)\n");
  EXPECT_FALSE(validate_certified(other, certified));
}

}  // namespace
}  // namespace colo
