#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "colo/harness/config.hpp"

namespace colo {

// One run of a sweep. Per-device values are means over devices.
struct BenchPoint {
  std::string sweep;  // "len", "degree" or "nodes"
  std::uint64_t x = 0;
  std::uint64_t nodes = 0;
  std::uint64_t rounds = 0;
  double device_bytes = 0;        // onion bytes sent
  double device_frame_bytes = 0;  // local-aggregation stream bytes
  double device_commitments = 0;
  double device_layers = 0;  // onion layers built
  std::uint64_t server_device_bytes = 0;  // bytes exchanged with devices
  std::uint64_t server_noise_bytes = 0;
  std::uint64_t server_bytes = 0;  // bytes_in + bytes_out over all servers
  double seconds = 0;
  bool matches_oracle = false;
};

struct BenchOptions {
  RunConfig base;  // servers, hops, noise, slot and seed
  std::vector<std::uint64_t> lengths{2, 60, 240, 1000};
  std::uint64_t length_nodes = 12;
  std::uint64_t length_degree = 2;
  std::vector<std::uint64_t> degrees{1, 10, 50};
  std::uint64_t degree_nodes = 52;
  std::vector<std::uint64_t> nodes{100, 1000, 10000};
  std::uint64_t nodes_degree = 1;
  std::string query;  // query text for the degree and node sweeps
};

BenchOptions default_bench_options();

// COUNT query whose table has exactly `length` entries, and its plan.
std::string length_query(std::uint64_t length);

std::vector<BenchPoint> bench_lengths(const BenchOptions& options);
std::vector<BenchPoint> bench_degrees(const BenchOptions& options);
std::vector<BenchPoint> bench_nodes(const BenchOptions& options);

std::string bench_csv(std::span<const BenchPoint> points);

// Coefficient of determination of the least-squares line through (x, y).
double linear_r2(std::span<const double> x, std::span<const double> y);

}  // namespace colo
