#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace colo {

struct AttributeDomain {
  std::string name;
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  std::uint64_t size() const {
    return static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  }
  bool contains(std::int64_t v) const { return v >= lo && v <= hi; }
  friend bool operator==(const AttributeDomain&, const AttributeDomain&) = default;
};

enum class RuleKind { kField, kClamp, kFlag, kBucket, kDayIndex };

// Declarative derivation of one attribute from one raw field.
struct DerivationRule {
  RuleKind kind = RuleKind::kField;
  std::string source;                  // raw field name
  std::vector<std::int64_t> params;    // bucket thresholds or day-index origin

  std::string to_string() const;
  friend bool operator==(const DerivationRule&, const DerivationRule&) = default;
};

struct PreprocessEntry {
  AttributeDomain domain;  // domain.name is "x" or "edge.x"
  DerivationRule rule;

  bool is_edge() const { return domain.name.rfind("edge.", 0) == 0; }
  std::string to_string() const;
  // Derived attribute value; nullopt when the raw value falls outside the
  // domain under a 'field' rule.
  std::optional<std::int64_t> apply(std::int64_t raw) const;
  // Raw interval that exercises every derived value.
  std::pair<std::int64_t, std::int64_t> raw_range() const;
  friend bool operator==(const PreprocessEntry&, const PreprocessEntry&) = default;
};

class PreprocessTable {
 public:
  void add(PreprocessEntry e);
  const PreprocessEntry* find(std::string_view name) const;
  const std::map<std::string, PreprocessEntry, std::less<>>& entries() const { return entries_; }
  // One line per entry, sorted by name.
  std::string to_string() const;

  // Derived attributes for one node or edge from its raw fields.
  std::map<std::string, std::int64_t> derive(const std::map<std::string, std::int64_t>& raw,
                                             bool edge) const;
  // Hull of raw_range() per raw field used by node (edge=false) or edge rules.
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> raw_fields(bool edge) const;

  friend bool operator==(const PreprocessTable&, const PreprocessTable&) = default;

 private:
  std::map<std::string, PreprocessEntry, std::less<>> entries_;
};

// Parses "name: lo..hi = rule(args)" lines. line_offset numbers the first
// line; blank lines and lines starting with '#' are skipped.
PreprocessTable parse_preprocess(std::string_view text, int first_line,
                                 std::uint64_t domain_cap);

}  // namespace colo
