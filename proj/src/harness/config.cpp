#include "colo/harness/config.hpp"

#include <algorithm>
#include <filesystem>

#include <CLI11.hpp>

#include "colo/core/error.hpp"

namespace colo {

void validate(const RunConfig& config) {
  if (!(config.malicious_frac >= 0.0 && config.malicious_frac < 0.5)) {
    fail(ErrorCode::kConfig, "malicious-frac must satisfy 0 <= f < 0.5");
  }
  if (config.degree_bound < 1) fail(ErrorCode::kConfig, "degree-bound must be >= 1");
  if (config.servers < 2) fail(ErrorCode::kConfig, "servers must be >= 2");
  if (config.gen_n > 0 && config.gen_degree < 0.0) {
    fail(ErrorCode::kConfig, "gen-degree must be >= 0");
  }
  if (config.threads < 1) fail(ErrorCode::kConfig, "threads must be >= 1");
  validate(config.mixnet());
}

void add_run_options(CLI::App& app, RunConfig& c) {
  app.set_config("--config", "", "key=value configuration file");
  app.add_option("--graph", c.graph, "SNAP edge list");
  app.add_option("--gen-n", c.gen_n, "generate a random graph with this many nodes");
  app.add_option("--gen-degree", c.gen_degree, "mean degree of the generated graph");
  app.add_option("--gen-max-degree", c.gen_max_degree, "degree cap of the generated graph");
  app.add_option("--subsample", c.subsample, "keep at most this many nodes (BFS)");
  app.add_option("--degree-bound", c.degree_bound, "degree bound d");
  app.add_option("--servers", c.servers, "number of servers M");
  app.add_option("--malicious-frac", c.malicious_frac, "assumed malicious server fraction f");
  app.add_option("--hops", c.hops, "mixnet route length m");
  app.add_option("--noise-mean", c.noise_mean, "Poisson noise mean per server and round");
  app.add_option("--slot-size", c.slot_size, "onion payload bytes per slot");
  app.add_option("--seed", c.seed, "run seed");
  app.add_option("--query", c.query, "query file")->required();
  app.add_option("--certified", c.certified, "certified query id list");
  app.add_option("--scenario", c.scenario, "adversary scenario script");
  app.add_option("--metrics-out", c.metrics_out, "metrics JSON-lines output");
  app.add_option("--report-out", c.report_out, "report JSON output");
  app.add_option("--max-rounds", c.max_rounds, "mixnet round limit");
  app.add_option("--threads", c.threads, "worker threads for device work");
  app.add_option_function<std::string>(
         "--direction",
         [&c](const std::string& s) {
           auto p = parse_direction(s);
           if (!p) throw CLI::ValidationError("--direction", "expected both or single");
           c.direction = *p;
         },
         "edge direction policy: both or single")
      ->default_str("both");
}

RunConfig parse_run_args(const std::vector<std::string>& args) {
  RunConfig config;
  CLI::App app{"run"};
  add_run_options(app, config);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    fail(ErrorCode::kConfig, e.what());
  }
  validate(config);
  return config;
}

std::string certified_path(const RunConfig& config) {
  if (!config.certified.empty()) return config.certified;
  return (std::filesystem::path(config.query).parent_path() / "certified.txt").string();
}

}  // namespace colo
