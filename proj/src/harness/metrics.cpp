#include "colo/harness/metrics.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "colo/core/error.hpp"

namespace colo {

nlohmann::json MetricsRecord::to_json() const {
  nlohmann::json j;
  j["entity"] = entity;
  j["id"] = id;
  j["phase"] = phase;
  j["counters"] = counters;
  return j;
}

std::string metrics_jsonl(const std::vector<MetricsRecord>& records) {
  std::string out;
  for (const MetricsRecord& r : records) {
    out += r.to_json().dump();
    out += '\n';
  }
  return out;
}

std::string metrics_csv(const std::vector<MetricsRecord>& records) {
  std::set<std::string> names;
  for (const MetricsRecord& r : records) {
    for (const auto& [k, v] : r.counters) names.insert(k);
  }
  std::ostringstream os;
  os << "entity,id,phase";
  for (const std::string& n : names) os << ',' << n;
  os << '\n';
  for (const MetricsRecord& r : records) {
    os << r.entity << ',' << r.id << ',' << r.phase;
    for (const std::string& n : names) {
      os << ',';
      auto it = r.counters.find(n);
      if (it != r.counters.end()) os << it->second;
    }
    os << '\n';
  }
  return os.str();
}

std::uint64_t metrics_total(const std::vector<MetricsRecord>& records, const std::string& entity,
                            const std::string& phase, const std::string& counter) {
  std::uint64_t total = 0;
  for (const MetricsRecord& r : records) {
    if (r.entity != entity || r.phase != phase) continue;
    auto it = r.counters.find(counter);
    if (it != r.counters.end()) total += it->second;
  }
  return total;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::kIo, "short write to " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace colo
