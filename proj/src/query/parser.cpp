#include "colo/query/parser.hpp"

#include <cctype>

#include "colo/query/error.hpp"
#include "colo/query/lexer.hpp"

namespace colo {
namespace {

bool is_identifier_attr(const std::string& name) {
  return name.size() == 2 && std::tolower(static_cast<unsigned char>(name[0])) == 'i' &&
         std::tolower(static_cast<unsigned char>(name[1])) == 'd';
}

class SqlParser {
 public:
  explicit SqlParser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  QueryAst parse() {
    QueryAst ast;
    expect_keyword("select");
    parse_aggregate(ast);
    expect_keyword("from");
    const Token neigh = peek();
    expect_keyword("neigh");
    expect("(");
    if (peek().type != TokenType::kNumber) syntax("expected neighbourhood radius");
    const Token radius = next();
    expect(")");
    if (radius.number != 1) {
      throw QueryError(QueryErrorKind::kSyntax, neigh.line, neigh.column,
                       "only neigh(1) is supported");
    }
    if (accept_keyword("where")) ast.where = parse_expr();
    if (accept_keyword("group")) {
      expect_keyword("by");
      ast.group_line = peek().line;
      ast.group_column = peek().column;
      ExprPtr key = parse_atom();
      if (key->kind != ExprKind::kAttr) {
        throw QueryError(QueryErrorKind::kSyntax, ast.group_line, ast.group_column,
                         "GROUP BY expects an attribute");
      }
      ast.group_by = key->attr;
    }
    if (peek().type != TokenType::kEnd) syntax("unexpected trailing input");
    return ast;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ + 1 < toks_.size() ? pos_++ : pos_]; }
  bool is_symbol(std::string_view s) const {
    return peek().type == TokenType::kSymbol && peek().text == s;
  }
  bool accept(std::string_view s) {
    if (!is_symbol(s)) return false;
    next();
    return true;
  }
  void expect(std::string_view s) {
    if (!accept(s)) syntax("expected '" + std::string(s) + "'");
  }
  bool accept_keyword(std::string_view k) {
    if (!keyword_equals(peek(), k)) return false;
    next();
    return true;
  }
  void expect_keyword(std::string_view k) {
    if (!accept_keyword(k)) syntax("expected " + std::string(k));
  }
  [[noreturn]] void syntax(const std::string& msg) const {
    std::string found = peek().type == TokenType::kEnd ? "end of input" : "'" + peek().text + "'";
    throw QueryError(QueryErrorKind::kSyntax, peek().line, peek().column,
                     msg + ", found " + found);
  }

  void parse_aggregate(QueryAst& ast) {
    const Token fn = peek();
    if (fn.type != TokenType::kIdent) syntax("expected aggregation");
    next();
    bool sum = keyword_equals(fn, "sum");
    bool count = keyword_equals(fn, "count");
    bool avg = keyword_equals(fn, "avg");
    if (!sum && !count && !avg) {
      throw QueryError(QueryErrorKind::kUnsupportedAggregation, fn.line, fn.column,
                       "unsupported aggregation '" + fn.text + "' (SUM, COUNT, AVG only)");
    }
    expect("(");
    if (count) {
      if (!accept("*")) {
        throw QueryError(QueryErrorKind::kUnsupportedAggregation, peek().line, peek().column,
                         "COUNT takes only *");
      }
      ast.agg = AggOp::kCount;
    } else {
      ast.value = parse_expr();
      ast.agg = sum ? AggOp::kSum : AggOp::kAvg;
    }
    expect(")");
    if (accept("/")) {
      const Token denom = peek();
      if (!sum || !keyword_equals(denom, "count")) {
        throw QueryError(QueryErrorKind::kUnsupportedAggregation, denom.line, denom.column,
                         "only SUM(x)/COUNT(*) may be divided");
      }
      next();
      expect("(");
      expect("*");
      expect(")");
      ast.agg = AggOp::kAvg;
    }
  }

  ExprPtr parse_expr() {
    DepthGuard guard(*this);
    ExprPtr lhs = parse_and();
    while (accept("|") || accept_keyword("or")) lhs = make_binary(BinOp::kOr, lhs, parse_and());
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (accept("&") || accept_keyword("and")) lhs = make_binary(BinOp::kAnd, lhs, parse_not());
    return lhs;
  }

  ExprPtr parse_not() {
    if (accept("!") || accept_keyword("not")) {
      DepthGuard guard(*this);
      return make_unary(ExprKind::kNot, parse_not());
    }
    return parse_cmp();
  }

  std::optional<BinOp> comparison() {
    static const std::pair<std::string_view, BinOp> kOps[] = {
        {"=", BinOp::kEq}, {"==", BinOp::kEq}, {"!=", BinOp::kNe}, {"<>", BinOp::kNe},
        {"<", BinOp::kLt}, {"<=", BinOp::kLe}, {">", BinOp::kGt},  {">=", BinOp::kGe}};
    for (const auto& [text, op] : kOps) {
      if (accept(text)) return op;
    }
    return std::nullopt;
  }

  ExprPtr parse_cmp() {
    ExprPtr lhs = parse_sum();
    if (accept_keyword("in")) {
      expect("[");
      ExprPtr lo = parse_sum();
      expect(",");
      ExprPtr hi = parse_sum();
      expect("]");
      return make_between(lhs, lo, hi);
    }
    std::optional<BinOp> op = comparison();
    if (!op) return lhs;
    ExprPtr rhs = parse_sum();
    ExprPtr result = make_binary(*op, lhs, rhs);
    while ((op = comparison())) {
      ExprPtr next_rhs = parse_sum();
      result = make_binary(BinOp::kAnd, result, make_binary(*op, rhs, next_rhs));
      rhs = next_rhs;
    }
    return result;
  }

  ExprPtr parse_sum() {
    ExprPtr lhs = parse_term();
    for (;;) {
      if (accept("+")) lhs = make_binary(BinOp::kAdd, lhs, parse_term());
      else if (accept("-")) lhs = make_binary(BinOp::kSub, lhs, parse_term());
      else return lhs;
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    while (accept("*")) lhs = make_binary(BinOp::kMul, lhs, parse_unary());
    return lhs;
  }

  ExprPtr parse_unary() {
    if (accept("-")) {
      DepthGuard guard(*this);
      return make_unary(ExprKind::kNeg, parse_unary());
    }
    return parse_atom();
  }

  ExprPtr parse_atom() {
    const Token t = peek();
    if (t.type == TokenType::kNumber) {
      next();
      return make_const(t.number);
    }
    if (accept("(")) {
      ExprPtr e = parse_expr();
      expect(")");
      return e;
    }
    if (t.type == TokenType::kIdent) {
      Role role;
      if (keyword_equals(t, "self")) role = Role::kSelf;
      else if (keyword_equals(t, "neighbor") || keyword_equals(t, "neighbour")) role = Role::kNeighbor;
      else if (keyword_equals(t, "edge")) role = Role::kEdge;
      else syntax("expected self., neighbor. or edge. attribute");
      next();
      expect(".");
      if (peek().type != TokenType::kIdent) syntax("expected attribute name");
      const Token name = next();
      if (is_identifier_attr(name.text)) {
        throw QueryError(QueryErrorKind::kIdentifierPredicate, t.line, t.column,
                         "predicates on per-device identifiers are not certifiable");
      }
      auto e = std::make_shared<Expr>();
      e->kind = ExprKind::kAttr;
      e->attr = AttrRef{role, name.text};
      e->line = t.line;
      e->column = t.column;
      return e;
    }
    syntax("expected expression");
  }

  struct DepthGuard {
    explicit DepthGuard(SqlParser& p) : parser(p) {
      if (++parser.depth_ > CompiledExpr::kMaxDepth) parser.syntax("expression nested too deeply");
    }
    ~DepthGuard() { --parser.depth_; }
    SqlParser& parser;
  };

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

const char* agg_op_name(AggOp op) {
  switch (op) {
    case AggOp::kSum: return "sum";
    case AggOp::kCount: return "count";
    case AggOp::kAvg: return "avg";
  }
  return "?";
}

QueryAst parse_sql(std::string_view sql, int first_line) {
  SqlParser p(tokenize(sql, first_line));
  QueryAst ast = p.parse();
  if (ast.value) ast.value = canonicalize(ast.value);
  if (ast.where) ast.where = canonicalize(ast.where);
  return ast;
}

std::string canonical_sql(const QueryAst& ast) {
  std::string out = "select ";
  out += agg_op_name(ast.agg);
  out += "(";
  out += ast.value ? print_expr(ast.value) : "*";
  out += ") from neigh(1)";
  if (ast.where) out += " where " + print_expr(ast.where);
  if (ast.group_by) out += " group by " + ast.group_by->to_string();
  return out;
}

}  // namespace colo
