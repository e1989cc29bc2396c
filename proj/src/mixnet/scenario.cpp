#include "colo/mixnet/scenario.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "colo/core/error.hpp"

namespace colo {
namespace {

constexpr std::array<std::string_view, 8> kActions = {
    "drop-fraction",      "duplicate-fraction", "log-observations",
    "withhold-signature", "forge-signature",    "drop-share",
    "duplicate-share",    "builder-attack",
};

bool known_action(std::string_view a) {
  for (auto k : kActions) {
    if (k == a) return true;
  }
  return false;
}

bool matches(const ScenarioAction& a, std::string_view action, std::uint32_t server) {
  return a.action == action && (!a.server || *a.server == server);
}

}  // namespace

double Scenario::server_param(std::string_view action, std::uint32_t server,
                              std::uint64_t round) const {
  double total = 0.0;
  for (const ScenarioAction& a : actions_) {
    if (matches(a, action, server) && (!a.round || *a.round == round)) total += a.parameter;
  }
  return total;
}

bool Scenario::server_flag(std::string_view action, std::uint32_t server) const {
  for (const ScenarioAction& a : actions_) {
    if (matches(a, action, server)) return true;
  }
  return false;
}

double Scenario::server_total(std::string_view action, std::uint32_t server) const {
  double total = 0.0;
  for (const ScenarioAction& a : actions_) {
    if (matches(a, action, server)) total += a.parameter;
  }
  return total;
}

bool Scenario::logs_observations(std::uint32_t server, std::uint64_t round) const {
  for (const ScenarioAction& a : actions_) {
    if (matches(a, "log-observations", server) && (!a.round || *a.round == round)) return true;
  }
  return false;
}

std::optional<std::string> Scenario::builder_attack(std::uint32_t device) const {
  for (const ScenarioAction& a : actions_) {
    if (a.action == "builder-attack" && (!a.device || *a.device == device)) return a.attack;
  }
  return std::nullopt;
}

Scenario parse_scenario(std::string_view text) {
  std::vector<ScenarioAction> actions;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto bad = [&](const std::string& msg) {
      fail(ErrorCode::kParse, "scenario line " + std::to_string(line_no) + ": " + msg);
    };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      bad(e.what());
    }
    if (!j.is_object()) bad("expected a JSON object");
    ScenarioAction a;
    try {
      a.action = j.at("action").get<std::string>();
      if (j.contains("round")) a.round = j["round"].get<std::uint64_t>();
      if (j.contains("server")) a.server = j["server"].get<std::uint32_t>();
      if (j.contains("device")) a.device = j["device"].get<std::uint32_t>();
      if (j.contains("parameter")) a.parameter = j["parameter"].get<double>();
      if (j.contains("attack")) a.attack = j["attack"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      bad(e.what());
    }
    if (!known_action(a.action)) bad("unknown action '" + a.action + "'");
    if (a.action == "builder-attack" && a.attack.empty()) bad("builder-attack needs \"attack\"");
    if ((a.action == "drop-fraction" || a.action == "duplicate-fraction") &&
        (a.parameter < 0.0 || a.parameter > 1.0)) {
      bad("fraction must lie in [0, 1]");
    }
    actions.push_back(std::move(a));
  }
  return Scenario(std::move(actions));
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open scenario " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace colo
