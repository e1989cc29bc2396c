#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace colo {

enum class Role { kSelf, kNeighbor, kEdge };

struct AttrRef {
  Role role = Role::kSelf;
  std::string name;  // without the role prefix

  // Name in the preprocess table: "x" for node attributes, "edge.x" for edges.
  std::string table_name() const;
  std::string to_string() const;
  friend bool operator==(const AttrRef&, const AttrRef&) = default;
  friend auto operator<=>(const AttrRef&, const AttrRef&) = default;
};

enum class ExprKind { kConst, kAttr, kNot, kNeg, kBinary, kBetween };
enum class BinOp { kOr, kAnd, kEq, kNe, kLt, kLe, kGt, kGe, kAdd, kSub, kMul };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind = ExprKind::kConst;
  std::int64_t value = 0;
  AttrRef attr;
  BinOp op = BinOp::kAnd;
  std::vector<ExprPtr> args;  // binary: lhs, rhs; between: x, lo, hi
  int line = 0;
  int column = 0;
};

ExprPtr make_const(std::int64_t v);
ExprPtr make_attr(AttrRef a);
ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_unary(ExprKind kind, ExprPtr operand);
ExprPtr make_between(ExprPtr x, ExprPtr lo, ExprPtr hi);

// Conjunction of the given terms with conjuncts sorted by their printed form.
ExprPtr make_conjunction(std::vector<ExprPtr> terms);
// Splits top-level '&' chains.
void collect_conjuncts(const ExprPtr& e, std::vector<ExprPtr>& out);
// Rebuilds every '&' chain with sorted conjuncts.
ExprPtr canonicalize(const ExprPtr& e);

std::string print_expr(const ExprPtr& e);
void collect_attrs(const ExprPtr& e, std::vector<AttrRef>& out);

// Stack program over integer slots. Expressions are limited to a nesting
// depth of kMaxDepth by the parser, which bounds the evaluation stack.
class CompiledExpr {
 public:
  enum class Op : std::uint8_t {
    kPushConst, kPushSlot, kNot, kNeg, kOr, kAnd, kEq, kNe, kLt, kLe, kGt, kGe, kAdd, kSub,
    kMul, kBetween,
  };
  struct Instr {
    Op op;
    std::int64_t imm;
  };

  static constexpr int kMaxDepth = 32;
  static constexpr int kStackLimit = 256;

  CompiledExpr() = default;
  // slot_of maps an attribute to its slot index.
  template <class SlotOf>
  static CompiledExpr compile(const ExprPtr& e, SlotOf&& slot_of) {
    CompiledExpr c;
    c.emit(e, slot_of);
    c.check_stack();
    return c;
  }

  std::int64_t eval(const std::int64_t* slots) const;
  bool empty() const { return code_.empty(); }

 private:
  template <class SlotOf>
  void emit(const ExprPtr& e, SlotOf& slot_of);
  void push(Op op, std::int64_t imm = 0) { code_.push_back({op, imm}); }
  // Throws when the program would overflow the fixed evaluation stack.
  void check_stack() const;

  std::vector<Instr> code_;
};

struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

// Sound interval bound for e given per-attribute intervals.
template <class RangeOf>
Interval interval_of(const ExprPtr& e, RangeOf&& range_of);

// ---- template definitions ----

template <class SlotOf>
void CompiledExpr::emit(const ExprPtr& e, SlotOf& slot_of) {
  switch (e->kind) {
    case ExprKind::kConst: push(Op::kPushConst, e->value); return;
    case ExprKind::kAttr: push(Op::kPushSlot, static_cast<std::int64_t>(slot_of(e->attr))); return;
    case ExprKind::kNot:
      emit(e->args[0], slot_of);
      push(Op::kNot);
      return;
    case ExprKind::kNeg:
      emit(e->args[0], slot_of);
      push(Op::kNeg);
      return;
    case ExprKind::kBetween:
      emit(e->args[0], slot_of);
      emit(e->args[1], slot_of);
      emit(e->args[2], slot_of);
      push(Op::kBetween);
      return;
    case ExprKind::kBinary: {
      emit(e->args[0], slot_of);
      emit(e->args[1], slot_of);
      static constexpr Op kMap[] = {Op::kOr, Op::kAnd, Op::kEq, Op::kNe, Op::kLt, Op::kLe,
                                    Op::kGt, Op::kGe, Op::kAdd, Op::kSub, Op::kMul};
      push(kMap[static_cast<int>(e->op)]);
      return;
    }
  }
}

namespace detail {
inline std::int64_t min4(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  return std::min(std::min(a, b), std::min(c, d));
}
inline std::int64_t max4(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  return std::max(std::max(a, b), std::max(c, d));
}
}  // namespace detail

template <class RangeOf>
Interval interval_of(const ExprPtr& e, RangeOf&& range_of) {
  switch (e->kind) {
    case ExprKind::kConst: return {e->value, e->value};
    case ExprKind::kAttr: return range_of(e->attr);
    case ExprKind::kNot:
    case ExprKind::kBetween: return {0, 1};
    case ExprKind::kNeg: {
      Interval a = interval_of(e->args[0], range_of);
      return {-a.hi, -a.lo};
    }
    case ExprKind::kBinary: {
      Interval a = interval_of(e->args[0], range_of);
      Interval b = interval_of(e->args[1], range_of);
      switch (e->op) {
        case BinOp::kAdd: return {a.lo + b.lo, a.hi + b.hi};
        case BinOp::kSub: return {a.lo - b.hi, a.hi - b.lo};
        case BinOp::kMul:
          return {detail::min4(a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi),
                  detail::max4(a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)};
        default: return {0, 1};
      }
    }
  }
  return {0, 0};
}

}  // namespace colo
