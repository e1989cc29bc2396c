#include "colo/query/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "colo/query/error.hpp"
#include "colo/query/lexer.hpp"

namespace colo {
namespace {

const char* rule_name(RuleKind k) {
  switch (k) {
    case RuleKind::kField: return "field";
    case RuleKind::kClamp: return "clamp";
    case RuleKind::kFlag: return "flag";
    case RuleKind::kBucket: return "bucket";
    case RuleKind::kDayIndex: return "day_index";
  }
  return "?";
}

bool is_identifier_name(std::string_view name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return lower == "id" || lower == "edge.id";
}

class LineParser {
 public:
  LineParser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(std::string_view sym) {
    if (peek().type == TokenType::kSymbol && peek().text == sym) {
      ++pos_;
      return true;
    }
    return false;
  }
  const Token& expect(std::string_view sym) {
    if (peek().type != TokenType::kSymbol || peek().text != sym) {
      syntax("expected '" + std::string(sym) + "'");
    }
    return next();
  }
  std::string ident(const char* what) {
    if (peek().type != TokenType::kIdent) syntax(std::string("expected ") + what);
    return next().text;
  }
  std::int64_t integer() {
    bool neg = accept("-");
    if (peek().type != TokenType::kNumber) syntax("expected integer");
    std::int64_t v = next().number;
    return neg ? -v : v;
  }
  [[noreturn]] void syntax(const std::string& msg) const {
    throw QueryError(QueryErrorKind::kSyntax, peek().line, peek().column, msg);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

PreprocessEntry parse_line(std::string_view line, int line_no, std::uint64_t cap) {
  LineParser p(tokenize(line, line_no));
  const Token start = p.peek();
  std::string name = p.ident("attribute name");
  if (p.accept(".")) {
    if (name != "edge") {
      throw QueryError(QueryErrorKind::kSyntax, start.line, start.column,
                       "only edge attributes may be qualified (edge.name)");
    }
    name += "." + p.ident("edge attribute name");
  }
  if (is_identifier_name(name)) {
    throw QueryError(QueryErrorKind::kIdentifierPredicate, start.line, start.column,
                     "per-device identifier attributes are not certifiable");
  }
  if (p.peek().type == TokenType::kSymbol && p.peek().text == "=") {
    throw QueryError(QueryErrorKind::kUnboundedAttribute, start.line, start.column,
                     "attribute '" + name + "' has no declared domain");
  }
  p.expect(":");
  if (p.peek().type == TokenType::kSymbol && p.peek().text == "=") {
    throw QueryError(QueryErrorKind::kUnboundedAttribute, start.line, start.column,
                     "attribute '" + name + "' has no declared domain");
  }
  PreprocessEntry e;
  e.domain.name = name;
  e.domain.lo = p.integer();
  p.expect("..");
  e.domain.hi = p.integer();
  if (e.domain.hi < e.domain.lo) {
    throw QueryError(QueryErrorKind::kInvalidRule, start.line, start.column,
                     "empty domain for '" + name + "'");
  }
  if (e.domain.size() > cap) {
    throw QueryError(QueryErrorKind::kDomainTooLarge, start.line, start.column,
                     "domain of '" + name + "' has " + std::to_string(e.domain.size()) +
                         " values, cap is " + std::to_string(cap));
  }
  p.expect("=");
  const Token rule_tok = p.peek();
  std::string rule = p.ident("derivation rule");
  auto invalid = [&](const std::string& msg) {
    throw QueryError(QueryErrorKind::kInvalidRule, rule_tok.line, rule_tok.column, msg);
  };
  if (rule == "field") e.rule.kind = RuleKind::kField;
  else if (rule == "clamp") e.rule.kind = RuleKind::kClamp;
  else if (rule == "flag") e.rule.kind = RuleKind::kFlag;
  else if (rule == "bucket") e.rule.kind = RuleKind::kBucket;
  else if (rule == "day_index") e.rule.kind = RuleKind::kDayIndex;
  else invalid("unknown derivation rule '" + rule + "'");
  p.expect("(");
  e.rule.source = p.ident("raw field name");
  if (p.accept(";") || p.accept(",")) {
    e.rule.params.push_back(p.integer());
    while (p.accept(",")) e.rule.params.push_back(p.integer());
  }
  p.expect(")");
  if (p.peek().type != TokenType::kEnd) p.syntax("unexpected trailing input");

  switch (e.rule.kind) {
    case RuleKind::kField:
    case RuleKind::kClamp:
    case RuleKind::kFlag:
      if (!e.rule.params.empty()) invalid(rule + " takes no parameters");
      if (e.rule.kind == RuleKind::kFlag && (e.domain.lo != 0 || e.domain.hi != 1)) {
        invalid("flag attributes must have domain 0..1");
      }
      break;
    case RuleKind::kBucket:
      if (e.rule.params.empty()) invalid("bucket needs at least one threshold");
      if (!std::is_sorted(e.rule.params.begin(), e.rule.params.end()) ||
          std::adjacent_find(e.rule.params.begin(), e.rule.params.end()) !=
              e.rule.params.end()) {
        invalid("bucket thresholds must be strictly increasing");
      }
      if (e.domain.lo != 0 || e.domain.hi != static_cast<std::int64_t>(e.rule.params.size())) {
        invalid("bucket with " + std::to_string(e.rule.params.size()) +
                " thresholds needs domain 0.." + std::to_string(e.rule.params.size()));
      }
      break;
    case RuleKind::kDayIndex:
      if (e.rule.params.size() != 1) invalid("day_index takes exactly one origin");
      break;
  }
  return e;
}

}  // namespace

std::string DerivationRule::to_string() const {
  std::ostringstream os;
  os << rule_name(kind) << "(" << source;
  for (std::size_t i = 0; i < params.size(); ++i) {
    os << (i == 0 ? (kind == RuleKind::kBucket ? "; " : ", ") : ", ") << params[i];
  }
  os << ")";
  return os.str();
}

std::string PreprocessEntry::to_string() const {
  return domain.name + ": " + std::to_string(domain.lo) + ".." + std::to_string(domain.hi) +
         " = " + rule.to_string();
}

std::optional<std::int64_t> PreprocessEntry::apply(std::int64_t raw) const {
  switch (rule.kind) {
    case RuleKind::kField:
      if (!domain.contains(raw)) return std::nullopt;
      return raw;
    case RuleKind::kClamp: return std::clamp(raw, domain.lo, domain.hi);
    case RuleKind::kFlag: return raw != 0 ? 1 : 0;
    case RuleKind::kBucket: {
      std::int64_t b = 0;
      for (std::int64_t t : rule.params) b += raw >= t ? 1 : 0;
      return b;
    }
    case RuleKind::kDayIndex: return std::clamp(raw - rule.params[0], domain.lo, domain.hi);
  }
  return std::nullopt;
}

std::pair<std::int64_t, std::int64_t> PreprocessEntry::raw_range() const {
  switch (rule.kind) {
    case RuleKind::kField: return {domain.lo, domain.hi};
    case RuleKind::kClamp: {
      std::int64_t w = static_cast<std::int64_t>(domain.size() / 4);
      return {domain.lo - w, domain.hi + w};
    }
    case RuleKind::kFlag: return {0, 1};
    case RuleKind::kBucket: {
      std::int64_t s = std::max<std::int64_t>(10, rule.params.back() - rule.params.front());
      return {rule.params.front() - s, rule.params.back() + s};
    }
    case RuleKind::kDayIndex: return {rule.params[0] + domain.lo, rule.params[0] + domain.hi};
  }
  return {0, 0};
}

void PreprocessTable::add(PreprocessEntry e) {
  std::string name = e.domain.name;
  entries_.insert_or_assign(std::move(name), std::move(e));
}

const PreprocessEntry* PreprocessTable::find(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string PreprocessTable::to_string() const {
  std::string out;
  for (const auto& [name, e] : entries_) out += e.to_string() + "\n";
  return out;
}

std::map<std::string, std::int64_t> PreprocessTable::derive(
    const std::map<std::string, std::int64_t>& raw, bool edge) const {
  std::map<std::string, std::int64_t> out;
  for (const auto& [name, e] : entries_) {
    if (e.is_edge() != edge) continue;
    auto it = raw.find(e.rule.source);
    if (it == raw.end()) {
      fail(ErrorCode::kPrecondition, "raw field '" + e.rule.source + "' missing");
    }
    auto v = e.apply(it->second);
    if (!v) {
      fail(ErrorCode::kPrecondition, "raw field '" + e.rule.source + "' outside domain of " + name);
    }
    out[name] = *v;
  }
  return out;
}

std::map<std::string, std::pair<std::int64_t, std::int64_t>> PreprocessTable::raw_fields(
    bool edge) const {
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> out;
  for (const auto& [name, e] : entries_) {
    if (e.is_edge() != edge) continue;
    auto r = e.raw_range();
    auto [it, inserted] = out.emplace(e.rule.source, r);
    if (!inserted) {
      it->second.first = std::min(it->second.first, r.first);
      it->second.second = std::max(it->second.second, r.second);
    }
  }
  // A 'field' rule rejects raw values outside its domain, so narrow to it.
  for (const auto& [name, e] : entries_) {
    if (e.is_edge() != edge || e.rule.kind != RuleKind::kField) continue;
    auto& r = out[e.rule.source];
    r.first = std::max(r.first, e.domain.lo);
    r.second = std::min(r.second, e.domain.hi);
  }
  return out;
}

PreprocessTable parse_preprocess(std::string_view text, int first_line, std::uint64_t cap) {
  PreprocessTable table;
  int line_no = first_line;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && line[first] != '#') {
      PreprocessEntry e = parse_line(line, line_no, cap);
      if (table.find(e.domain.name) != nullptr) {
        throw QueryError(QueryErrorKind::kInvalidRule, line_no, static_cast<int>(first) + 1,
                         "attribute '" + e.domain.name + "' declared twice");
      }
      table.add(std::move(e));
    }
    ++line_no;
    if (end == text.size()) break;
    pos = end + 1;
  }
  return table;
}

}  // namespace colo
