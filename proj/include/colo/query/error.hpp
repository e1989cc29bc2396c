#pragma once

#include <string>

#include "colo/core/error.hpp"

namespace colo {

enum class QueryErrorKind {
  kSyntax,
  kUnknownAttribute,
  kUnboundedAttribute,
  kUnsupportedAggregation,
  kIdentifierPredicate,
  kDomainTooLarge,
  kInvalidRule,
  kNegativeOutput,
};

const char* query_error_kind_name(QueryErrorKind kind);

// Parse or validation failure; line and column are 1-based, 0 when unknown.
class QueryError : public Error {
 public:
  QueryError(QueryErrorKind kind, int line, int column, const std::string& message);

  QueryErrorKind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  QueryErrorKind kind_;
  int line_;
  int column_;
  std::string detail_;
};

}  // namespace colo
