#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "colo/core/error.hpp"
#include "colo/harness/bench.hpp"
#include "colo/harness/config.hpp"
#include "colo/harness/metrics.hpp"
#include "colo/harness/simulation.hpp"
#include "colo/query/error.hpp"
#include "colo/query/plan.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitAbort = 3;

int exit_code(const colo::Error& e) {
  switch (e.code()) {
    case colo::ErrorCode::kParse:
    case colo::ErrorCode::kConfig:
    case colo::ErrorCode::kIo:
      return kExitConfig;
    case colo::ErrorCode::kProtocolAbort:
      return kExitAbort;
    default:
      return kExitFailure;
  }
}

void print_error(const colo::Error& e) {
  if (const auto* q = dynamic_cast<const colo::QueryError*>(&e)) {
    std::cerr << "error: " << colo::query_error_kind_name(q->kind()) << " at " << q->line() << ":"
              << q->column() << ": " << q->detail() << "\n";
    return;
  }
  std::cerr << "error: " << colo::error_code_name(e.code()) << ": " << e.what() << "\n";
}

int cmd_run(colo::RunConfig& config) {
  colo::validate(config);
  colo::RunResult r = colo::run(config);
  if (config.report_out.empty()) std::cout << colo::report_text(r);
  const auto& d = r.diag;
  std::cerr << "nodes=" << d.nodes << " edges=" << d.edges << " rounds=" << d.rounds
            << " frames=" << d.frames_delivered << "/" << d.frames_sent
            << " aborted=" << d.leaf_sessions_aborted
            << " matches_oracle=" << (d.matches_oracle ? "yes" : "no") << "\n";
  return kExitOk;
}

int cmd_oracle(colo::RunConfig& config) {
  colo::validate(config);
  colo::RunInputs inputs = colo::load_inputs(config);
  std::string text = colo::plaintext_answer(config, inputs).dump(2) + "\n";
  if (config.report_out.empty()) {
    std::cout << text;
  } else {
    colo::write_text_file(config.report_out, text);
  }
  return kExitOk;
}

int cmd_parse(const std::string& path, bool id_only) {
  colo::QueryPlan plan = colo::parse_query(colo::read_text_file(path));
  if (id_only) {
    std::cout << plan.query_id << "\n";
    return kExitOk;
  }
  std::cout << "query_id: " << plan.query_id << "\n"
            << "aggregation: " << colo::agg_op_name(plan.requested) << "\n"
            << "leaves:";
  for (const colo::QueryPlan* leaf : plan.leaves()) {
    std::cout << " " << leaf->label() << "(len=" << leaf->table_length << ", bound=" << leaf->bound
              << ")";
  }
  std::cout << "\n---\n" << plan.canonical << "\n";
  return kExitOk;
}

int cmd_bench(colo::BenchOptions& options, const std::string& sweep, const std::string& out) {
  std::vector<colo::BenchPoint> points;
  auto add = [&](std::vector<colo::BenchPoint> p) {
    points.insert(points.end(), p.begin(), p.end());
  };
  if (sweep == "len" || sweep == "all") add(colo::bench_lengths(options));
  if (sweep == "degree" || sweep == "all") add(colo::bench_degrees(options));
  if (sweep == "nodes" || sweep == "all") add(colo::bench_nodes(options));
  std::string csv = colo::bench_csv(points);
  if (out.empty()) {
    std::cout << csv;
  } else {
    colo::write_text_file(out, csv);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private neighborhood aggregation simulator"};
  app.require_subcommand(1);

  colo::RunConfig run_config;
  CLI::App* run = app.add_subcommand("run", "end-to-end simulated run");
  colo::add_run_options(*run, run_config);

  colo::RunConfig oracle_config;
  CLI::App* oracle = app.add_subcommand("oracle", "plaintext answer only");
  colo::add_run_options(*oracle, oracle_config);

  std::string parse_path;
  bool parse_id = false;
  CLI::App* parse = app.add_subcommand("parse", "check a query file");
  parse->add_option("query", parse_path, "query file")->required();
  parse->add_flag("--id", parse_id, "print only the query id");

  colo::BenchOptions bench_options = colo::default_bench_options();
  std::string bench_sweep = "all";
  std::string bench_out;
  CLI::App* bench = app.add_subcommand("bench", "sweep len(T), degree bound and N; emit CSV");
  bench->add_option("--sweep", bench_sweep, "len, degree, nodes or all")
      ->check(CLI::IsMember({"len", "degree", "nodes", "all"}));
  bench->add_option("--out", bench_out, "CSV output path");
  bench->add_option("--lengths", bench_options.lengths, "table lengths");
  bench->add_option("--degrees", bench_options.degrees, "degree bounds");
  bench->add_option("--nodes", bench_options.nodes, "node counts");
  bench->add_option("--servers", bench_options.base.servers, "number of servers");
  bench->add_option("--hops", bench_options.base.hops, "route length");
  bench->add_option("--noise-mean", bench_options.base.noise_mean, "noise mean");
  bench->add_option("--slot-size", bench_options.base.slot_size, "slot size");
  bench->add_option("--seed", bench_options.base.seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_config);
    if (*oracle) return cmd_oracle(oracle_config);
    if (*parse) return cmd_parse(parse_path, parse_id);
    if (*bench) return cmd_bench(bench_options, bench_sweep, bench_out);
  } catch (const colo::Error& e) {
    print_error(e);
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
