#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace colo {

// One scripted adversarial action. Unset round/server/device match all.
//
// Server actions: drop-fraction, duplicate-fraction (mixnet rounds),
// log-observations, withhold-signature, forge-signature, drop-share,
// duplicate-share (parameter = number of shares). Device actions:
// builder-attack with "attack" one of out-of-range, inconsistent-mask,
// wrong-opening, swap-payload.
struct ScenarioAction {
  std::optional<std::uint64_t> round;
  std::optional<std::uint32_t> server;
  std::optional<std::uint32_t> device;
  std::string action;
  double parameter = 0.0;
  std::string attack;
};

class Scenario {
 public:
  Scenario() = default;
  explicit Scenario(std::vector<ScenarioAction> actions) : actions_(std::move(actions)) {}

  // Sum of the parameters of matching server actions in a round.
  double server_param(std::string_view action, std::uint32_t server, std::uint64_t round) const;
  bool server_flag(std::string_view action, std::uint32_t server) const;
  // Parameter of a matching server action regardless of round.
  double server_total(std::string_view action, std::uint32_t server) const;
  bool logs_observations(std::uint32_t server, std::uint64_t round) const;
  std::optional<std::string> builder_attack(std::uint32_t device) const;

  const std::vector<ScenarioAction>& actions() const { return actions_; }
  bool empty() const { return actions_.empty(); }

 private:
  std::vector<ScenarioAction> actions_;
};

// JSON-lines: {"round": 3, "server": 1, "action": "drop-fraction", "parameter": 0.1}.
// Blank lines and lines starting with '#' are skipped. Throws kParse with the
// line number on malformed input or an unknown action.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

}  // namespace colo
