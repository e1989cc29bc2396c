#include "colo/query/lexer.hpp"

#include <cctype>
#include <limits>

#include "colo/query/error.hpp"

namespace colo {

const char* query_error_kind_name(QueryErrorKind kind) {
  switch (kind) {
    case QueryErrorKind::kSyntax: return "syntax";
    case QueryErrorKind::kUnknownAttribute: return "unknown-attribute";
    case QueryErrorKind::kUnboundedAttribute: return "unbounded-attribute";
    case QueryErrorKind::kUnsupportedAggregation: return "unsupported-aggregation";
    case QueryErrorKind::kIdentifierPredicate: return "identifier-predicate";
    case QueryErrorKind::kDomainTooLarge: return "domain-too-large";
    case QueryErrorKind::kInvalidRule: return "invalid-rule";
    case QueryErrorKind::kNegativeOutput: return "negative-output";
  }
  return "unknown";
}

QueryError::QueryError(QueryErrorKind kind, int line, int column, const std::string& message)
    : Error(ErrorCode::kParse, (line > 0 ? std::to_string(line) + ":" + std::to_string(column) +
                                               ": "
                                         : std::string()) +
                                   message),
      kind_(kind),
      line_(line),
      column_(column),
      detail_(message) {}

bool keyword_equals(const Token& t, std::string_view keyword) {
  if (t.type != TokenType::kIdent || t.text.size() != keyword.size()) return false;
  for (std::size_t i = 0; i < keyword.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(t.text[i])) !=
        std::tolower(static_cast<unsigned char>(keyword[i]))) {
      return false;
    }
  }
  return true;
}

std::vector<Token> tokenize(std::string_view text, int first_line) {
  static constexpr std::string_view kTwoChar[] = {"<=", ">=", "!=", "<>", "==", ".."};
  std::vector<Token> out;
  int line = first_line;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      t.type = TokenType::kIdent;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      std::int64_t v = 0;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        int d = text[j] - '0';
        if (v > (std::numeric_limits<std::int64_t>::max() - d) / 10) {
          throw QueryError(QueryErrorKind::kSyntax, line, col, "integer literal too large");
        }
        v = v * 10 + d;
        ++j;
      }
      t.type = TokenType::kNumber;
      t.number = v;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else {
      t.type = TokenType::kSymbol;
      std::string_view rest = text.substr(i);
      bool matched = false;
      for (std::string_view two : kTwoChar) {
        if (rest.substr(0, 2) == two) {
          t.text = std::string(two);
          matched = true;
          break;
        }
      }
      if (!matched) {
        static constexpr std::string_view kSingle = "()[],.*/+-&|!=<>:;";
        if (kSingle.find(c) == std::string_view::npos) {
          throw QueryError(QueryErrorKind::kSyntax, line, col,
                           std::string("unexpected character '") + c + "'");
        }
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

}  // namespace colo
