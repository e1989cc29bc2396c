#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace colo {

// Counters of one entity in one phase. entity is "device", "server" or "run".
struct MetricsRecord {
  std::string entity;
  std::uint32_t id = 0;
  std::string phase;
  std::map<std::string, std::uint64_t> counters;

  nlohmann::json to_json() const;
};

// One JSON object per line, keys sorted.
std::string metrics_jsonl(const std::vector<MetricsRecord>& records);
// Header entity,id,phase followed by every counter name in sorted order;
// absent counters are empty cells.
std::string metrics_csv(const std::vector<MetricsRecord>& records);

// Sum of one counter over the records of an entity kind and phase.
std::uint64_t metrics_total(const std::vector<MetricsRecord>& records, const std::string& entity,
                            const std::string& phase, const std::string& counter);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace colo
