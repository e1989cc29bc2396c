#include "colo/harness/bench.hpp"

#include <chrono>
#include <sstream>

#include "colo/core/error.hpp"
#include "colo/harness/simulation.hpp"

namespace colo {
namespace {

BenchPoint measure(const std::string& sweep, std::uint64_t x, const RunConfig& config,
                   RunInputs inputs) {
  inputs.certified = {inputs.plan.query_id};
  auto start = std::chrono::steady_clock::now();
  RunResult r = simulate(config, inputs);
  BenchPoint p;
  p.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  p.sweep = sweep;
  p.x = x;
  p.nodes = r.diag.nodes;
  p.rounds = r.diag.rounds;
  p.matches_oracle = r.diag.matches_oracle;
  const double n = static_cast<double>(std::max<std::size_t>(1, r.diag.nodes));
  auto dev = [&](const char* counter) {
    return static_cast<double>(metrics_total(r.metrics, "device", "localagg", counter)) / n;
  };
  p.device_bytes = dev("onion_bytes_sent");
  p.device_frame_bytes = dev("frame_bytes_sent");
  p.device_commitments = dev("commitments");
  p.device_layers = dev("onion_layers_built");
  auto srv = [&](const char* counter) {
    return metrics_total(r.metrics, "server", "localagg", counter);
  };
  p.server_device_bytes = srv("device_bytes_in") + srv("device_bytes_out");
  p.server_noise_bytes = srv("noise_bytes");
  p.server_bytes = srv("bytes_in") + srv("bytes_out");
  return p;
}

}  // namespace

BenchOptions default_bench_options() {
  BenchOptions o;
  o.base.servers = 5;
  o.base.hops = 2;
  o.base.noise_mean = 20;
  o.base.slot_size = 4096;
  o.base.malicious_frac = 0.2;
  o.base.seed = 7;
  o.query =
      "SELECT COUNT(*) FROM neigh(1)\n"
      "WHERE self.inf & neighbor.inf\n"
      "---\n"
      "inf: 0..1 = flag(infected)\n";
  return o;
}

std::string length_query(std::uint64_t length) {
  require(length >= 1, ErrorCode::kInvalidArgument, "length must be >= 1");
  const std::string hi = std::to_string(length - 1);
  return "SELECT COUNT(*) FROM neigh(1)\n"
         "WHERE self.x < neighbor.y\n"
         "---\n"
         "x: 0.." + hi + " = clamp(rx)\n"
         "y: 0.." + hi + " = clamp(ry)\n";
}

std::vector<BenchPoint> bench_lengths(const BenchOptions& o) {
  std::vector<BenchPoint> out;
  for (std::uint64_t len : o.lengths) {
    RunConfig c = o.base;
    c.degree_bound = o.length_degree;
    RunInputs in;
    in.plan = parse_query(length_query(len));
    in.graph = circulant(o.length_nodes, o.length_degree);
    out.push_back(measure("len", in.plan.table_length, c, std::move(in)));
  }
  return out;
}

std::vector<BenchPoint> bench_degrees(const BenchOptions& o) {
  std::vector<BenchPoint> out;
  for (std::uint64_t d : o.degrees) {
    RunConfig c = o.base;
    c.degree_bound = d;
    RunInputs in;
    in.plan = parse_query(o.query);
    in.graph = circulant(o.degree_nodes, d);
    out.push_back(measure("degree", d, c, std::move(in)));
  }
  return out;
}

std::vector<BenchPoint> bench_nodes(const BenchOptions& o) {
  std::vector<BenchPoint> out;
  for (std::uint64_t n : o.nodes) {
    RunConfig c = o.base;
    c.degree_bound = o.nodes_degree;
    RunInputs in;
    in.plan = parse_query(o.query);
    in.graph = circulant(n, o.nodes_degree);
    out.push_back(measure("nodes", n, c, std::move(in)));
  }
  return out;
}

std::string bench_csv(std::span<const BenchPoint> points) {
  std::ostringstream os;
  os << "sweep,x,nodes,rounds,device_bytes,device_frame_bytes,device_commitments,device_layers,"
        "server_device_bytes,server_noise_bytes,server_bytes,seconds,matches_oracle\n";
  for (const BenchPoint& p : points) {
    os << p.sweep << ',' << p.x << ',' << p.nodes << ',' << p.rounds << ',' << p.device_bytes
       << ',' << p.device_frame_bytes << ',' << p.device_commitments << ',' << p.device_layers
       << ',' << p.server_device_bytes << ',' << p.server_noise_bytes << ',' << p.server_bytes
       << ',' << p.seconds << ',' << (p.matches_oracle ? 1 : 0) << '\n';
  }
  return os.str();
}

double linear_r2(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::kInvalidArgument,
          "linear_r2 needs two or more paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (syy == 0) return 1.0;
  if (sxx == 0) return 0.0;
  return sxy * sxy / (sxx * syy);
}

}  // namespace colo
