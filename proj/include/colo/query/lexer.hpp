#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace colo {

enum class TokenType { kIdent, kNumber, kSymbol, kEnd };

struct Token {
  TokenType type = TokenType::kEnd;
  std::string text;
  std::int64_t number = 0;
  int line = 0;
  int column = 0;
};

// Splits text into identifiers, decimal integers and operator symbols.
// first_line numbers the first line of text. Throws QueryError on stray
// characters.
std::vector<Token> tokenize(std::string_view text, int first_line = 1);

bool keyword_equals(const Token& t, std::string_view keyword);

}  // namespace colo
