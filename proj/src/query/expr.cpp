#include "colo/query/expr.hpp"

#include <algorithm>

#include "colo/core/error.hpp"

namespace colo {
namespace {

int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::kConst: return e.value < 0 ? 7 : 8;
    case ExprKind::kAttr: return 8;
    case ExprKind::kNeg: return 7;
    case ExprKind::kNot: return 3;
    case ExprKind::kBetween: return 4;
    case ExprKind::kBinary:
      switch (e.op) {
        case BinOp::kOr: return 1;
        case BinOp::kAnd: return 2;
        case BinOp::kAdd:
        case BinOp::kSub: return 5;
        case BinOp::kMul: return 6;
        default: return 4;
      }
  }
  return 8;
}

const char* op_text(BinOp op) {
  switch (op) {
    case BinOp::kOr: return "|";
    case BinOp::kAnd: return "&";
    case BinOp::kEq: return "=";
    case BinOp::kNe: return "!=";
    case BinOp::kLt: return "<";
    case BinOp::kLe: return "<=";
    case BinOp::kGt: return ">";
    case BinOp::kGe: return ">=";
    case BinOp::kAdd: return "+";
    case BinOp::kSub: return "-";
    case BinOp::kMul: return "*";
  }
  return "?";
}

std::string wrap(const ExprPtr& e, bool parens) {
  std::string s = print_expr(e);
  return parens ? "(" + s + ")" : s;
}

// Two's-complement arithmetic without signed-overflow UB.
std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

}  // namespace

std::string AttrRef::table_name() const { return role == Role::kEdge ? "edge." + name : name; }

std::string AttrRef::to_string() const {
  switch (role) {
    case Role::kSelf: return "self." + name;
    case Role::kNeighbor: return "neighbor." + name;
    case Role::kEdge: return "edge." + name;
  }
  return name;
}

ExprPtr make_const(std::int64_t v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kConst;
  e->value = v;
  return e;
}

ExprPtr make_attr(AttrRef a) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kAttr;
  e->attr = std::move(a);
  return e;
}

ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kBinary;
  e->op = op;
  e->args = {std::move(lhs), std::move(rhs)};
  return e;
}

ExprPtr make_unary(ExprKind kind, ExprPtr operand) {
  if (kind == ExprKind::kNeg && operand->kind == ExprKind::kConst) {
    return make_const(-operand->value);
  }
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->args = {std::move(operand)};
  return e;
}

ExprPtr make_between(ExprPtr x, ExprPtr lo, ExprPtr hi) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kBetween;
  e->args = {std::move(x), std::move(lo), std::move(hi)};
  return e;
}

void collect_conjuncts(const ExprPtr& e, std::vector<ExprPtr>& out) {
  if (e->kind == ExprKind::kBinary && e->op == BinOp::kAnd) {
    collect_conjuncts(e->args[0], out);
    collect_conjuncts(e->args[1], out);
  } else {
    out.push_back(e);
  }
}

ExprPtr make_conjunction(std::vector<ExprPtr> terms) {
  require(!terms.empty(), ErrorCode::kInvalidArgument, "empty conjunction");
  std::vector<std::pair<std::string, ExprPtr>> keyed;
  for (ExprPtr& t : terms) {
    std::vector<ExprPtr> flat;
    collect_conjuncts(t, flat);
    for (ExprPtr& f : flat) keyed.emplace_back(print_expr(f), f);
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  ExprPtr acc = keyed[0].second;
  for (std::size_t i = 1; i < keyed.size(); ++i) {
    acc = make_binary(BinOp::kAnd, acc, keyed[i].second);
  }
  return acc;
}

ExprPtr canonicalize(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::kConst:
    case ExprKind::kAttr: return e;
    case ExprKind::kNot:
    case ExprKind::kNeg: return make_unary(e->kind, canonicalize(e->args[0]));
    case ExprKind::kBetween:
      return make_between(canonicalize(e->args[0]), canonicalize(e->args[1]),
                          canonicalize(e->args[2]));
    case ExprKind::kBinary: {
      if (e->op == BinOp::kAnd) {
        std::vector<ExprPtr> flat;
        collect_conjuncts(e, flat);
        for (ExprPtr& f : flat) f = canonicalize(f);
        return make_conjunction(std::move(flat));
      }
      return make_binary(e->op, canonicalize(e->args[0]), canonicalize(e->args[1]));
    }
  }
  return e;
}

std::string print_expr(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::kConst: return std::to_string(e->value);
    case ExprKind::kAttr: return e->attr.to_string();
    case ExprKind::kNeg: return "-" + wrap(e->args[0], precedence(*e->args[0]) <= 7);
    case ExprKind::kNot: return "!" + wrap(e->args[0], precedence(*e->args[0]) < 3);
    case ExprKind::kBetween:
      return wrap(e->args[0], precedence(*e->args[0]) <= 4) + " in [" + print_expr(e->args[1]) +
             ", " + print_expr(e->args[2]) + "]";
    case ExprKind::kBinary: {
      int p = precedence(*e);
      bool comparison = p == 4;
      bool left_parens = comparison ? precedence(*e->args[0]) <= p : precedence(*e->args[0]) < p;
      bool right_parens = precedence(*e->args[1]) <= p;
      return wrap(e->args[0], left_parens) + " " + op_text(e->op) + " " +
             wrap(e->args[1], right_parens);
    }
  }
  return "";
}

void collect_attrs(const ExprPtr& e, std::vector<AttrRef>& out) {
  if (!e) return;
  if (e->kind == ExprKind::kAttr) {
    if (std::find(out.begin(), out.end(), e->attr) == out.end()) out.push_back(e->attr);
    return;
  }
  for (const ExprPtr& a : e->args) collect_attrs(a, out);
}

void CompiledExpr::check_stack() const {
  int sp = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::kPushConst:
      case Op::kPushSlot: ++sp; break;
      case Op::kNot:
      case Op::kNeg: break;
      case Op::kBetween: sp -= 2; break;
      default: --sp; break;
    }
    require(sp <= kStackLimit, ErrorCode::kInvalidArgument, "expression too deep to evaluate");
  }
}

std::int64_t CompiledExpr::eval(const std::int64_t* slots) const {
  std::int64_t stack[kStackLimit];
  std::size_t sp = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::kPushConst: stack[sp++] = in.imm; break;
      case Op::kPushSlot: stack[sp++] = slots[in.imm]; break;
      case Op::kNot: stack[sp - 1] = stack[sp - 1] == 0; break;
      case Op::kNeg: stack[sp - 1] = wrap_sub(0, stack[sp - 1]); break;
      case Op::kBetween: {
        std::int64_t hi = stack[--sp];
        std::int64_t lo = stack[--sp];
        stack[sp - 1] = stack[sp - 1] >= lo && stack[sp - 1] <= hi;
        break;
      }
      default: {
        std::int64_t b = stack[--sp];
        std::int64_t& a = stack[sp - 1];
        switch (in.op) {
          case Op::kOr: a = (a != 0) || (b != 0); break;
          case Op::kAnd: a = (a != 0) && (b != 0); break;
          case Op::kEq: a = a == b; break;
          case Op::kNe: a = a != b; break;
          case Op::kLt: a = a < b; break;
          case Op::kLe: a = a <= b; break;
          case Op::kGt: a = a > b; break;
          case Op::kGe: a = a >= b; break;
          case Op::kAdd: a = wrap_add(a, b); break;
          case Op::kSub: a = wrap_sub(a, b); break;
          case Op::kMul: a = wrap_mul(a, b); break;
          default: break;
        }
      }
    }
  }
  return sp == 0 ? 0 : stack[0];
}

}  // namespace colo
